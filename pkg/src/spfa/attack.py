"""Key recovery from persistently faulted ciphertexts via SEI ranking.

The attacked value is one cell of the state right after the penultimate
round's substitution layer (round 31 for LED64, round 9 for AES128). For a
key hypothesis covering the four last-round key cells that feed that cell's
column, partially decrypting a ciphertext back to it yields a value delta.
With the correct hypothesis the multiset of deltas inherits the faulted
table's output imbalance; with a wrong one it stays near uniform. Candidates
are ranked by the SEI of their delta histogram.

Two implementations of the same map are kept deliberately separate:

* per-ciphertext partial decryptions built from the cipher inverse
  primitives (aes_partial_decrypt / led_partial_decrypt), used as the
  reference path;
* a table-folded search engine where delta = D[a ^ h] over a packed 16-bit
  tuple, enabling one histogram pass over all 2^16 candidates at once.

Both ciphers omit key material that only shifts every candidate's histogram
by a constant (the round key between the two final linear layers for AES,
the whole-key conjugation for LED): a constant XOR permutes histogram bins
and leaves SEI unchanged. For LED the search therefore runs in the
transformed key domain K' = inv_mix_columns(K), and led_key_recover maps
ranked group values back to the real key.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import aes, led, sei
from .ciphers import AES128, LED64, CiphertextBatch, CipherSpec, get_cipher
from .errors import ConfigurationError, ContractViolation, UnsupportedConfiguration
from .sbox import Sbox

HYP_SPACE_BITS = 16
HYP_SPACE = 1 << HYP_SPACE_BITS
_H_BLOCK = 8192  # hypotheses per histogram sub-block
_CT_CHUNK = 2048  # ciphertexts per accumulation slice inside one call


@dataclass(frozen=True)
class AttackTarget:
    """Cell of the post-substitution state attacked in the penultimate round.

    group selects which anti-diagonal of last-round key cells is hypothesized
    (equivalently: which column of the inverse-mixed state carries the cell);
    row picks the cell inside that column. The attacked cell index is
    cell_index(row, (group + row) % 4).
    """

    cipher: str
    group: int
    row: int = 0

    def __post_init__(self):
        get_cipher(self.cipher)
        if not 0 <= self.group < 4:
            raise ConfigurationError(f"group must be 0..3, got {self.group}")
        if not 0 <= self.row < 4:
            raise ConfigurationError(f"row must be 0..3, got {self.row}")

    @property
    def round_index(self) -> int:
        return get_cipher(self.cipher).penultimate_round()

    @property
    def cell(self) -> int:
        spec = get_cipher(self.cipher)
        return spec.cell_index(self.row, (self.group + self.row) % 4)


def group_positions(spec: CipherSpec, group: int) -> list:
    """Cell indices of the hypothesized key cells: positions (r, (group-r) % 4)."""
    spec = get_cipher(spec)
    return [spec.cell_index(r, (group - r) % 4) for r in range(4)]


def pack_group(spec: CipherSpec, cells) -> int:
    """Pack 4 group cells (row 0 first) into one integer, row 0 most significant."""
    w = get_cipher(spec).cell_bits
    v = 0
    for c in cells:
        v = (v << w) | int(c)
    return v


def unpack_group(spec: CipherSpec, value: int) -> list:
    w = get_cipher(spec).cell_bits
    mask = (1 << w) - 1
    return [(value >> (w * (3 - r))) & mask for r in range(4)]


def true_group_value(spec: CipherSpec, key_cells, group: int) -> int:
    """Packed value of the searched key material for a known key.

    AES128: the last round key's cells on the group diagonal. LED64: the
    cells of inv_mix_columns(K) on the group diagonal.
    """
    spec = get_cipher(spec)
    pos = group_positions(spec, group)
    if spec.name == "AES128":
        material = aes.key_schedule(key_cells)[aes.ROUNDS]
    else:
        material = led.inv_mix_columns(np.asarray(key_cells, dtype=np.uint8))
    return pack_group(spec, material[pos])


def _hyp_state(spec: CipherSpec, group: int, hyp: int) -> np.ndarray:
    state = np.zeros(16, dtype=np.uint8)
    pos = group_positions(spec, group)
    state[pos] = unpack_group(spec, hyp)
    return state


def aes_partial_decrypt(ct, hyp: int, target: AttackTarget, clean_sbox: Sbox = aes.AES_SBOX) -> int:
    """Reference delta for one AES ciphertext under one 32-bit group hypothesis.

    Inverts the final key addition (hypothesis cells only), ShiftRows, the
    clean substitution, and MixColumns, then reads the target's column cell.
    The key addition between MixColumns and the substitution layer is omitted;
    it offsets all deltas of a candidate equally.
    """
    if target.cipher != "AES128":
        raise ConfigurationError("target is not an AES128 target")
    inv_table = clean_sbox.inverse().table
    x = np.asarray(ct, dtype=np.uint8) ^ _hyp_state(AES128, target.group, hyp)
    y = aes.inv_shift_rows(x)
    z = aes.sub_cells(y, inv_table)
    w = aes.inv_mix_columns(z)
    return int(w[AES128.cell_index(target.row, target.group)])


def led_partial_decrypt(ct, hyp: int, target: AttackTarget, clean_sbox: Sbox = led.PRESENT_SBOX) -> int:
    """Reference delta for one LED ciphertext under one 16-bit group hypothesis.

    The hypothesis lives in the transformed domain K' = inv_mix_columns(K):
    since the final key addition sits outside the last MixColumns,
    inv_mix_columns(ct ^ K) = inv_mix_columns(ct) ^ K', and the constant K'
    cells can be cancelled cell-wise before inverting the rest of round 32
    (ShiftRows, the clean substitution, the round-32 constants, MixColumns).
    """
    if target.cipher != "LED64":
        raise ConfigurationError("target is not an LED64 target")
    inv_table = clean_sbox.inverse().table
    a = led.inv_mix_columns(np.asarray(ct, dtype=np.uint8))
    b = a ^ _hyp_state(LED64, target.group, hyp)
    v = led.inv_shift_rows(b)
    u = led.sub_cells(v, inv_table)
    e = led.add_constants(u, led.ROUNDS)
    f = led.inv_mix_columns(e)
    return int(f[LED64.cell_index(target.row, target.group)])


@dataclass
class GroupSearch:
    """Folded form of one group attack: delta = d16[tuples[i] ^ h] (^ base[i]).

    tuples packs, per ciphertext, the cells the free hypothesis cells act on;
    base carries the contribution of pinned hypothesis cells (None if none).
    hyp_values maps search index -> full packed hypothesis value.
    """

    cipher: str
    group: int
    row: int
    nbins: int
    d16: np.ndarray
    tuples: np.ndarray
    base: np.ndarray | None
    hyp_values: np.ndarray
    fixed: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.tuples.shape[0])

    def search_index_of(self, full_hyp_value: int) -> int:
        """Search index of a full hypothesis value; error if outside the space."""
        idx = np.flatnonzero(self.hyp_values == int(full_hyp_value))
        if idx.size == 0:
            raise ConfigurationError(
                f"hypothesis {full_hyp_value:#x} is not in the searched space"
            )
        return int(idx[0])


def _folded_tables(spec: CipherSpec, target: AttackTarget, clean_sbox: Sbox):
    """Per-group-slot tables T_r with delta = xor_r T_r[a_r ^ h_r] (+ constant)."""
    if clean_sbox.size != spec.sbox_size:
        raise ConfigurationError("sbox width does not match the cipher")
    if not clean_sbox.is_bijection():
        raise ContractViolation("the reference substitution table must be bijective")
    inv_table = clean_sbox.inverse().table
    if spec.name == "AES128":
        mul = aes.MUL
    else:
        mul = led.MUL
    tables = []
    const = 0
    inv_mix = spec.inv_mix_matrix
    for r in range(4):
        coef = inv_mix[target.row][r]
        if coef == 0:
            tables.append(np.zeros(spec.sbox_size, dtype=np.uint8))
            continue
        t = inv_table if coef == 1 else mul[coef][inv_table]
        tables.append(t.astype(np.uint8))
    if spec.name == "LED64":
        mask = led.CONSTANT_MASKS[led.ROUNDS - 1]
        for r in range(4):
            coef = inv_mix[target.row][r]
            c = int(mask[spec.cell_index(r, target.group)])
            if coef and c:
                from .gf import gf_mul

                const ^= gf_mul(coef, c, spec.field_poly, spec.cell_bits)
    return tables, const


def prepare_search(
    batch: CiphertextBatch,
    target: AttackTarget,
    clean_sbox: Sbox | None = None,
    fixed: dict | None = None,
) -> GroupSearch:
    """Fold one group attack over a batch into lookup-table form."""
    spec = batch.spec()
    if target.cipher != batch.cipher:
        raise ConfigurationError(
            f"target cipher {target.cipher} does not match batch cipher {batch.cipher}"
        )
    if clean_sbox is None:
        clean_sbox = spec.clean_sbox
    pos = group_positions(spec, target.group)
    tables, const = _folded_tables(spec, target, clean_sbox)
    xs = np.arange(HYP_SPACE, dtype=np.uint32)

    if spec.name == "LED64":
        if fixed:
            raise UnsupportedConfiguration(
                "the LED group space is already 16-bit; pinned cells are not supported"
            )
        a = led.inv_mix_columns(batch.cells)
        cols = [a[:, p].astype(np.uint16) for p in pos]
        tuples = (cols[0] << 12) | (cols[1] << 8) | (cols[2] << 4) | cols[3]
        d16 = (
            tables[0][(xs >> 12) & 0xF]
            ^ tables[1][(xs >> 8) & 0xF]
            ^ tables[2][(xs >> 4) & 0xF]
            ^ tables[3][xs & 0xF]
        )
        if const:
            d16 = d16 ^ np.uint8(const)
        hyp_values = np.arange(HYP_SPACE, dtype=np.int64)
        return GroupSearch(
            cipher=spec.name,
            group=target.group,
            row=target.row,
            nbins=16,
            d16=d16.astype(np.uint8),
            tuples=tuples,
            base=None,
            hyp_values=hyp_values,
        )

    # AES128: the full group space is 32-bit; this engine searches 16 bits,
    # so exactly two of the four slots must be pinned (see fullsearch for the
    # unpinned variant).
    if not fixed:
        raise ConfigurationError(
            "AES128 group hypotheses are 32-bit: pin two slots via fixed={slot: value} "
            "or use the full-search path"
        )
    fixed = {int(s): int(v) for s, v in fixed.items()}
    for s, v in fixed.items():
        if not 0 <= s < 4:
            raise ConfigurationError(f"fixed slot {s} out of range 0..3")
        if not 0 <= v < 256:
            raise ConfigurationError(f"fixed value {v:#x} out of range")
    free = [s for s in range(4) if s not in fixed]
    if len(free) != 2:
        raise ConfigurationError(
            f"exactly 2 of 4 slots must be pinned, got {len(fixed)} pinned"
        )
    cells = batch.cells
    f0, f1 = free
    tuples = (cells[:, pos[f0]].astype(np.uint16) << 8) | cells[:, pos[f1]]
    d16 = tables[f0][(xs >> 8) & 0xFF] ^ tables[f1][xs & 0xFF]
    base = np.zeros(batch.n, dtype=np.uint8)
    for s, v in fixed.items():
        base ^= tables[s][cells[:, pos[s]] ^ np.uint8(v)]
    shifts = {slot: 8 * (3 - slot) for slot in range(4)}
    hyp_values = np.zeros(HYP_SPACE, dtype=np.int64)
    hyp_values += (xs.astype(np.int64) >> 8) << shifts[f0]
    hyp_values += (xs.astype(np.int64) & 0xFF) << shifts[f1]
    for s, v in fixed.items():
        hyp_values += v << shifts[s]
    return GroupSearch(
        cipher=spec.name,
        group=target.group,
        row=target.row,
        nbins=256,
        d16=d16.astype(np.uint8),
        tuples=tuples,
        base=base,
        hyp_values=hyp_values,
        fixed=fixed,
    )


def accumulate_histograms(
    search: GroupSearch,
    hists: np.ndarray,
    ct_lo: int,
    ct_hi: int,
    h_lo: int = 0,
) -> None:
    """Add delta counts of ciphertexts [ct_lo, ct_hi) into hists (rows are
    hypotheses h_lo..h_lo+len-1)."""
    nbins = search.nbins
    h_hi = h_lo + hists.shape[0]
    for c_lo in range(ct_lo, ct_hi, _CT_CHUNK):
        c_hi = min(c_lo + _CT_CHUNK, ct_hi)
        t = search.tuples[c_lo:c_hi]
        b = search.base[c_lo:c_hi] if search.base is not None else None
        for lo in range(h_lo, h_hi, _H_BLOCK):
            hi = min(lo + _H_BLOCK, h_hi)
            hs = np.arange(lo, hi, dtype=np.uint16)
            bins = search.d16[hs[:, None] ^ t[None, :]]
            if b is not None:
                bins = bins ^ b[None, :]
            rows = np.arange(hi - lo, dtype=np.int64)
            idx = rows[:, None] * nbins + bins
            hists[lo - h_lo : hi - h_lo] += np.bincount(
                idx.ravel(), minlength=(hi - lo) * nbins
            ).reshape(hi - lo, nbins)


def _score_range(search: GroupSearch, n: int, h_lo: int, h_hi: int) -> np.ndarray:
    hists = np.zeros((h_hi - h_lo, search.nbins), dtype=np.int64)
    accumulate_histograms(search, hists, 0, n, h_lo=h_lo)
    return sei.sei_rows(hists, n)


def _score_task(args):
    return _score_range(*args)


def compute_scores(search: GroupSearch, n: int | None = None, workers: int = 1) -> np.ndarray:
    """SEI score of every hypothesis in the searched space.

    workers > 1 partitions the hypothesis space into contiguous ranges scored
    in separate processes; per-hypothesis counts are integers, so the result
    is bit-identical for any worker count.
    """
    if n is None:
        n = search.n
    if not 1 <= n <= search.n:
        raise ConfigurationError(f"n must be 1..{search.n}, got {n}")
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    if workers == 1:
        return _score_range(search, n, 0, HYP_SPACE)
    bounds = np.linspace(0, HYP_SPACE, workers + 1, dtype=int)
    tasks = [(search, n, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_score_task, tasks))
    return np.concatenate(parts)


@dataclass
class SeiRanking:
    """Hypotheses sorted by SEI, best first; ties broken by ascending value."""

    cipher: str
    group: int
    row: int
    hypotheses: np.ndarray  # int64 full packed hypothesis values
    scores: np.ndarray  # float64, descending
    n_used: int
    nbins: int
    fixed: dict = field(default_factory=dict)
    rows: tuple = ()  # non-empty when scores sum several target rows

    @property
    def best(self) -> int:
        return int(self.hypotheses[0])

    def top(self, k: int = 10) -> list:
        k = min(k, len(self.hypotheses))
        return [(int(self.hypotheses[i]), float(self.scores[i])) for i in range(k)]

    def rank_of(self, hyp_value: int) -> int:
        """1-based rank of a full hypothesis value."""
        idx = np.flatnonzero(self.hypotheses == int(hyp_value))
        if idx.size == 0:
            raise ConfigurationError(f"hypothesis {hyp_value:#x} not in the ranking")
        return int(idx[0]) + 1

    def gap_ratio(self) -> float:
        if len(self.scores) < 2:
            return float("inf")
        if self.scores[1] == 0:
            return float("inf")
        return float(self.scores[0] / self.scores[1])


def rank_hypotheses(search: GroupSearch, scores: np.ndarray, n: int) -> SeiRanking:
    order = np.lexsort((search.hyp_values, -scores))
    return SeiRanking(
        cipher=search.cipher,
        group=search.group,
        row=search.row,
        hypotheses=search.hyp_values[order],
        scores=scores[order],
        n_used=n,
        nbins=search.nbins,
        fixed=dict(search.fixed),
    )


def run_attack(
    batch: CiphertextBatch,
    target: AttackTarget,
    clean_sbox: Sbox | None = None,
    fixed: dict | None = None,
    n: int | None = None,
    workers: int = 1,
    full_search: bool = False,
    top_k: int = 4096,
    checkpoint_path=None,
    progress=None,
) -> SeiRanking:
    """Score and rank key hypotheses for one group of one batch.

    fixed pins group slots to known byte values (AES only). full_search
    enumerates the whole 32-bit AES group space instead (slow; returns the
    top_k head of the ranking and can checkpoint progress to a file).
    """
    if batch.n == 0:
        raise ConfigurationError("cannot attack an empty batch")
    if full_search:
        if batch.cipher != "AES128":
            raise UnsupportedConfiguration("full 32-bit search only applies to AES128")
        if fixed:
            raise ConfigurationError("full_search and fixed slots are mutually exclusive")
        from . import fullsearch

        return fullsearch.full_search(
            batch,
            target,
            clean_sbox=clean_sbox,
            n=n,
            workers=workers,
            top_k=top_k,
            checkpoint_path=checkpoint_path,
            progress=progress,
        )
    search = prepare_search(batch, target, clean_sbox=clean_sbox, fixed=fixed)
    if n is None:
        n = search.n
    scores = compute_scores(search, n=n, workers=workers)
    return rank_hypotheses(search, scores, n)


def run_combined_attack(
    batch: CiphertextBatch,
    group: int,
    clean_sbox: Sbox | None = None,
    fixed: dict | None = None,
    n: int | None = None,
    workers: int = 1,
    rows: tuple = (0, 1, 2, 3),
) -> SeiRanking:
    """Rank one group's hypotheses by the sum of SEI scores over several rows.

    Every row of the inverse-mixed column is an independent statistic over
    the same hypothesis space, so adding the per-row scores uses all of the
    collected signal; a hypothesis in the lead on one row but middling on the
    others drops back. The returned ranking records the rows it combined.
    """
    rows = tuple(int(r) for r in rows)
    if not rows or len(set(rows)) != len(rows) or not all(0 <= r < 4 for r in rows):
        raise ConfigurationError(f"rows must be distinct values in 0..3, got {rows}")
    if batch.n == 0:
        raise ConfigurationError("cannot attack an empty batch")
    total = search = None
    for r in rows:
        target = AttackTarget(batch.cipher, group=group, row=r)
        search = prepare_search(batch, target, clean_sbox=clean_sbox, fixed=fixed)
        if n is None:
            n = search.n
        scores = compute_scores(search, n=n, workers=workers)
        total = scores if total is None else total + scores
    ranking = rank_hypotheses(search, total, n)
    ranking.row = rows[0]
    ranking.rows = rows
    return ranking


@dataclass
class CheckpointStat:
    n: int
    top_hyp: int
    top_score: float
    second_score: float
    true_score: float
    true_rank1: bool  # strict unique maximum at the true hypothesis


@dataclass
class ScanResult:
    """Outcome of the incremental needed-N protocol for one group attack.

    needed_n is the smallest checkpoint where the true hypothesis is the
    strict unique rank-1 and stays rank-1 at the next `stability` checkpoints;
    None means did-not-finish within max_n. Ties never count as success.
    """

    needed_n: int | None
    confirmed_at: int | None
    checkpoints: list
    stride: int
    max_n: int
    stability: int

    @property
    def success(self) -> bool:
        return self.needed_n is not None

    def stat_at(self, n: int) -> CheckpointStat:
        for st in self.checkpoints:
            if st.n == n:
                return st
        raise ConfigurationError(f"no checkpoint at n={n}")


def scan_needed_n(
    search: GroupSearch,
    true_hyp_value: int,
    stride: int = 250,
    max_n: int | None = None,
    stability: int = 2,
    early_stop: bool = True,
) -> ScanResult:
    """Grow the batch checkpoint by checkpoint and find the needed-N.

    Histograms accumulate incrementally, so the whole scan costs one pass over
    the ciphertexts. Rank decisions use the integer sum of squared counts,
    which orders hypotheses exactly like SEI at fixed n; reported scores are
    canonical SEI values.
    """
    if stride < 1:
        raise ConfigurationError("stride must be >= 1")
    if max_n is None:
        max_n = search.n
    if not stride <= max_n <= search.n:
        raise ConfigurationError(
            f"max_n must be in [stride, batch size]; got {max_n} with {search.n} ciphertexts"
        )
    true_idx = search.search_index_of(true_hyp_value)
    hists = np.zeros((HYP_SPACE, search.nbins), dtype=np.int64)
    flags = []
    stats = []
    needed = confirmed = None
    prev = 0
    checkpoints = list(range(stride, max_n + 1, stride))
    for k, n_k in enumerate(checkpoints):
        accumulate_histograms(search, hists, prev, n_k)
        prev = n_k
        sumsq = np.einsum("ij,ij->i", hists, hists)
        top_idx = int(np.argmax(sumsq))
        top = int(sumsq[top_idx])
        ties = int(np.count_nonzero(sumsq == top))
        second = int(np.partition(sumsq, -2)[-2])
        rank1 = ties == 1 and top_idx == true_idx
        flags.append(rank1)
        stats.append(
            CheckpointStat(
                n=n_k,
                top_hyp=int(search.hyp_values[top_idx]),
                top_score=_sei_of_sumsq(top, n_k, search.nbins),
                second_score=_sei_of_sumsq(second, n_k, search.nbins),
                true_score=_sei_of_sumsq(int(sumsq[true_idx]), n_k, search.nbins),
                true_rank1=rank1,
            )
        )
        if needed is None and k >= stability and all(flags[k - stability : k + 1]):
            needed = checkpoints[k - stability]
            confirmed = n_k
            if early_stop:
                break
    return ScanResult(
        needed_n=needed,
        confirmed_at=confirmed,
        checkpoints=stats,
        stride=stride,
        max_n=max_n,
        stability=stability,
    )


def _sei_of_sumsq(sumsq: int, n: int, nbins: int) -> float:
    return sumsq / float(n) ** 2 - 1.0 / nbins


def led_key_recover(group_values: dict) -> np.ndarray:
    """Assemble the LED-64 master key from the four ranked group values.

    group_values maps group -> packed 16-bit K' diagonal value; the key is
    mix_columns applied to the assembled K' state.
    """
    if sorted(group_values) != [0, 1, 2, 3]:
        raise ConfigurationError("need exactly the four groups 0..3")
    kp = np.zeros(16, dtype=np.uint8)
    for g, value in group_values.items():
        kp[group_positions(LED64, g)] = unpack_group(LED64, value)
    return led.mix_columns(kp)


def aes_last_round_key(group_values: dict) -> np.ndarray:
    """Assemble the AES round-10 key from the four ranked group values."""
    if sorted(group_values) != [0, 1, 2, 3]:
        raise ConfigurationError("need exactly the four groups 0..3")
    k10 = np.zeros(16, dtype=np.uint8)
    for g, value in group_values.items():
        k10[group_positions(AES128, g)] = unpack_group(AES128, value)
    return k10


def recover_full_key(rankings) -> np.ndarray:
    """Master key from the four per-group rankings' rank-1 candidates.

    rankings is a dict {group: SeiRanking} or a sequence covering groups 0..3.
    LED: the groups hypothesize K' = inverse-mixed key material, so the key is
    the forward mix of the assembled state. AES: the groups hypothesize the
    last round key, so the key schedule is walked backwards.
    """
    if not isinstance(rankings, dict):
        rankings = {r.group: r for r in rankings}
    if sorted(rankings) != [0, 1, 2, 3]:
        raise ConfigurationError("need exactly the four groups 0..3")
    names = {r.cipher for r in rankings.values()}
    if len(names) != 1:
        raise ConfigurationError(f"rankings mix ciphers {sorted(names)}")
    best = {g: r.best for g, r in rankings.items()}
    cipher = names.pop()
    if cipher == "LED64":
        return led_key_recover(best)
    if cipher == "AES128":
        return aes.invert_key_schedule(aes_last_round_key(best))
    raise ConfigurationError(f"unknown cipher {cipher!r}")


@dataclass
class PfaResult:
    """Classical last-round counting attack: per ciphertext byte position,
    the key candidates missing_value ^ {values with the minimal count}."""

    candidates: list  # per position: tuple of candidate key bytes
    min_counts: list
    n_used: int

    @property
    def ambiguous(self) -> bool:
        return any(len(c) != 1 for c in self.candidates)

    def key(self) -> np.ndarray | None:
        if self.ambiguous:
            return None
        return np.array([c[0] for c in self.candidates], dtype=np.uint8)


def pfa_baseline(
    batch: CiphertextBatch,
    fault_index: int | None = None,
    fault_value: int | None = None,
    n: int | None = None,
) -> PfaResult:
    """Recover last-round key bytes by spotting the never-appearing ciphertext
    value per position.

    fault_value is the substitution output that disappeared from the faulted
    table; if only fault_index is given it is looked up in the clean table.
    AES only: its final round feeds substitution outputs XOR key straight into
    the ciphertext, which is what the counting argument needs.
    """
    if batch.cipher != "AES128":
        raise UnsupportedConfiguration(
            "the counting baseline reads substitution outputs directly from "
            "ciphertext bytes, which only holds for AES128"
        )
    if fault_value is None:
        if fault_index is None:
            raise ConfigurationError("need fault_value or fault_index")
        fault_value = int(aes.SBOX_TABLE[fault_index])
    if not 0 <= fault_value < 256:
        raise ConfigurationError(f"fault value {fault_value} out of range")
    if n is None:
        n = batch.n
    if not 1 <= n <= batch.n:
        raise ConfigurationError(f"n must be 1..{batch.n}")
    cells = batch.cells[:n]
    candidates = []
    min_counts = []
    for j in range(16):
        counts = np.bincount(cells[:, j], minlength=256)
        m = int(counts.min())
        tied = np.flatnonzero(counts == m)
        candidates.append(tuple(int(fault_value ^ t) for t in tied))
        min_counts.append(m)
    return PfaResult(candidates=candidates, min_counts=min_counts, n_used=int(n))


def ranking_to_dict(ranking: SeiRanking, head: int = 64) -> dict:
    spec = get_cipher(ranking.cipher)
    digits = spec.cell_bits  # 4 cells of cell_bits/4 hex digits each
    data = {
        "cipher": ranking.cipher,
        "group": ranking.group,
        "row": ranking.row,
        "n_used": ranking.n_used,
        "bins": ranking.nbins,
        "searched": len(ranking.hypotheses),
        "fixed": {str(k): v for k, v in ranking.fixed.items()},
        "ranking": [
            {"hypothesis": f"{h:0{digits}x}", "score": s} for h, s in ranking.top(head)
        ],
    }
    if ranking.rows:
        data["rows"] = list(ranking.rows)
    return data


def save_ranking(ranking: SeiRanking, path, head: int = 64, sidecar_path=None) -> None:
    """Write the JSON head of a ranking; optionally the full ranking as an
    npz sidecar (hypotheses + scores arrays)."""
    data = ranking_to_dict(ranking, head=head)
    if sidecar_path is not None:
        np.savez_compressed(
            sidecar_path, hypotheses=ranking.hypotheses, scores=ranking.scores
        )
        data["full_ranking"] = str(sidecar_path)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
