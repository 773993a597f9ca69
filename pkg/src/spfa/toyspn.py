"""16-bit toy SPN: small enough that every key hypothesis is enumerable.

Block and key are 4 nibbles. One round is x -> mix(S(x ^ K)) with the 4-cell
MDS matrix shared with LED64; three rounds run, then a final key addition.
The same statistical attack as for the real ciphers targets the substitution
output of round 2 (the penultimate round), and because the key space is only
2^16 the ranking covers every possible key: ground truth by exhaustion.

The search runs in the transformed domain k' = inv_mix(K): the delta of the
correct key differs from the pure table fold by the constant k'_t, which
shifts all its histogram bins equally and cannot change SEI, so the engine
drops it. hyp_values maps each searched k' back to the real key K.
"""

import numpy as np

from . import led
from .attack import GroupSearch, compute_scores, rank_hypotheses
from .errors import ConfigurationError
from .led import MUL, PRESENT_SBOX
from .sbox import Sbox

ROUNDS = 3
CELLS = 4

MIX_MATRIX = led.MIX_MATRIX
INV_MIX_MATRIX = led.INV_MIX_MATRIX


def _as_cells(x) -> np.ndarray:
    arr = np.asarray(x, dtype=np.uint8)
    if arr.shape[-1] != CELLS:
        raise ConfigurationError(f"toy blocks have 4 cells, got shape {arr.shape}")
    if int(arr.max(initial=0)) > 0xF:
        raise ConfigurationError("toy cells are nibbles")
    return arr


def int_to_cells(value: int) -> np.ndarray:
    return np.array([(value >> 12) & 0xF, (value >> 8) & 0xF, (value >> 4) & 0xF, value & 0xF], dtype=np.uint8)


def cells_to_int(cells) -> int:
    c = _as_cells(cells)
    return (int(c[0]) << 12) | (int(c[1]) << 8) | (int(c[2]) << 4) | int(c[3])


def blocks_from_ints(values) -> np.ndarray:
    """Packed 16-bit blocks to an (n, 4) nibble-cell array."""
    v = np.asarray(values, dtype=np.uint32)
    return np.stack(
        [(v >> 12) & 0xF, (v >> 8) & 0xF, (v >> 4) & 0xF, v & 0xF], axis=-1
    ).astype(np.uint8)


def blocks_to_ints(cells) -> np.ndarray:
    c = _as_cells(cells).astype(np.uint32)
    return (c[..., 0] << 12) | (c[..., 1] << 8) | (c[..., 2] << 4) | c[..., 3]


def _mix_with(matrix, state):
    cols = [state[..., j] for j in range(CELLS)]
    out = []
    for row in matrix:
        acc = np.zeros_like(cols[0])
        for coef, col in zip(row, cols):
            acc = acc ^ (col if coef == 1 else MUL[coef][col])
        out.append(acc)
    return np.stack(out, axis=-1)


def mix(state):
    return _mix_with(MIX_MATRIX, state)


def inv_mix(state):
    return _mix_with(INV_MIX_MATRIX, state)


def encrypt(key, blocks, sbox: Sbox | None = None, sbox_rounds: dict | None = None) -> np.ndarray:
    key = _as_cells(key)
    state = _as_cells(blocks)
    default = (sbox.table if sbox is not None else PRESENT_SBOX.table)
    for rnd in range(1, ROUNDS + 1):
        table = default
        if sbox_rounds and rnd in sbox_rounds:
            override = sbox_rounds[rnd]
            table = override.table if isinstance(override, Sbox) else np.asarray(override, dtype=np.uint8)
        state = table[state ^ key]
        state = mix(state)
    return state ^ key


def decrypt(key, blocks, sbox: Sbox | None = None) -> np.ndarray:
    key = _as_cells(key)
    state = _as_cells(blocks)
    table = (sbox if sbox is not None else PRESENT_SBOX).inverse().table
    state = state ^ key
    for _ in range(ROUNDS):
        state = inv_mix(state)
        state = table[state]
        state = state ^ key
    return state


def toy_partial_decrypt(ct, key_hyp: int, row: int = 0, clean_sbox: Sbox = PRESENT_SBOX) -> int:
    """Reference delta: invert the last round under a full 16-bit key
    hypothesis and read cell `row` of the round-2 substitution output."""
    if not 0 <= row < CELLS:
        raise ConfigurationError("row must be 0..3")
    k = int_to_cells(key_hyp)
    inv_table = clean_sbox.inverse().table
    x3 = _as_cells(ct) ^ k
    y = inv_mix(x3)
    z = inv_table[y]
    x2 = z ^ k
    return int(inv_mix(x2)[row])


def prepare_search(cts, clean_sbox: Sbox = PRESENT_SBOX, row: int = 0) -> GroupSearch:
    """Fold the toy attack into the shared search-engine form.

    The search index h enumerates k' = inv_mix(K); hyp_values[h] is the packed
    real key. delta(h) matches toy_partial_decrypt up to the constant k'_row.
    """
    if not 0 <= row < CELLS:
        raise ConfigurationError("row must be 0..3")
    if not clean_sbox.is_bijection() or clean_sbox.size != 16:
        raise ConfigurationError("toy search needs a bijective 16-entry reference table")
    cts = _as_cells(cts)
    if cts.ndim != 2:
        raise ConfigurationError("expected a batch of ciphertexts")
    inv_table = clean_sbox.inverse().table
    a = inv_mix(cts)
    tuples = (
        (a[:, 0].astype(np.uint16) << 12)
        | (a[:, 1].astype(np.uint16) << 8)
        | (a[:, 2].astype(np.uint16) << 4)
        | a[:, 3].astype(np.uint16)
    )
    tables = []
    for j in range(CELLS):
        coef = INV_MIX_MATRIX[row][j]
        tables.append(inv_table if coef == 1 else MUL[coef][inv_table])
    xs = np.arange(1 << 16, dtype=np.uint32)
    d16 = (
        tables[0][(xs >> 12) & 0xF]
        ^ tables[1][(xs >> 8) & 0xF]
        ^ tables[2][(xs >> 4) & 0xF]
        ^ tables[3][xs & 0xF]
    ).astype(np.uint8)
    kp = np.stack([(xs >> 12) & 0xF, (xs >> 8) & 0xF, (xs >> 4) & 0xF, xs & 0xF], axis=-1).astype(np.uint8)
    keys = mix(kp)
    hyp_values = (
        (keys[:, 0].astype(np.int64) << 12)
        | (keys[:, 1].astype(np.int64) << 8)
        | (keys[:, 2].astype(np.int64) << 4)
        | keys[:, 3].astype(np.int64)
    )
    return GroupSearch(
        cipher="TOY16",
        group=0,
        row=row,
        nbins=16,
        d16=d16,
        tuples=tuples,
        base=None,
        hyp_values=hyp_values,
    )


def recover_key(cts, clean_sbox: Sbox = PRESENT_SBOX, row: int = 0, n: int | None = None):
    """Rank every 16-bit key by SEI; returns the full SeiRanking."""
    search = prepare_search(cts, clean_sbox=clean_sbox, row=row)
    if n is None:
        n = search.n
    scores = compute_scores(search, n=n)
    return rank_hypotheses(search, scores, n)
