"""Exhaustive 32-bit group search for AES128, compiled with numba.

Cost grows as 2^32 x n table lookups: hours of single-core time at useful
batch sizes, which is why run_attack keeps it behind an explicit flag. The
space is processed in bands of the low 16 hypothesis bits; each finished band
appends one JSON line (its top candidates) to the checkpoint file, so an
interrupted run resumes where it stopped. The returned ranking holds the
merged head of all bands: rank 1 is globally exact, the tail is truncated to
each band's local top list.
"""

import json
import os
from dataclasses import dataclass

import numpy as np

from . import sei
from .attack import (
    AttackTarget,
    SeiRanking,
    _folded_tables,
    group_positions,
)
from .ciphers import CiphertextBatch, get_cipher
from .errors import ConfigurationError

BAND_H23 = 256  # h23 values per checkpointed band
TOP_PER_BAND = 64

_kernel_cache = {}


def _get_kernel():
    if "band" in _kernel_cache:
        return _kernel_cache["band"]
    from numba import njit

    @njit(cache=True, nogil=True)
    def band(d01, d23, t01, t23, h23_band, top_len):
        n = t01.shape[0]
        top_ss = np.zeros(top_len, dtype=np.int64)
        top_h01 = np.zeros(top_len, dtype=np.int64)
        top_h23 = np.zeros(top_len, dtype=np.int64)
        cur_min = np.int64(0)
        base = np.empty(n, dtype=np.uint8)
        hist = np.zeros(256, dtype=np.int64)
        for j in range(h23_band.shape[0]):
            h23 = h23_band[j]
            for i in range(n):
                base[i] = d23[t23[i] ^ h23]
            for h01 in range(65536):
                for b in range(256):
                    hist[b] = 0
                for i in range(n):
                    hist[d01[t01[i] ^ h01] ^ base[i]] += 1
                ss = np.int64(0)
                for b in range(256):
                    ss += hist[b] * hist[b]
                if ss > cur_min:
                    m = 0
                    for k in range(1, top_len):
                        if top_ss[k] < top_ss[m]:
                            m = k
                    top_ss[m] = ss
                    top_h01[m] = h01
                    top_h23[m] = h23
                    cur_min = top_ss[0]
                    for k in range(1, top_len):
                        if top_ss[k] < cur_min:
                            cur_min = top_ss[k]
        return top_ss, top_h01, top_h23

    _kernel_cache["band"] = band
    return band


@dataclass
class _BandResult:
    band: int
    entries: list  # (sumsq, h01, h23)


def _band_line(result: _BandResult) -> str:
    return json.dumps({"band": result.band, "top": [[int(a), int(b), int(c)] for a, b, c in result.entries]})


def _load_checkpoint(path) -> dict:
    done = {}
    if path and os.path.exists(path):
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                    done[int(rec["band"])] = [tuple(e) for e in rec["top"]]
                except (json.JSONDecodeError, KeyError, TypeError, ValueError):
                    raise ConfigurationError(f"{path}: corrupt checkpoint line") from None
    return done


def search_tables(batch: CiphertextBatch, target: AttackTarget, clean_sbox=None):
    """Pair-folded tables and tuples: delta = d01[t01 ^ h01] ^ d23[t23 ^ h23]."""
    spec = batch.spec()
    if spec.name != "AES128":
        raise ConfigurationError("full search only applies to AES128")
    if clean_sbox is None:
        clean_sbox = spec.clean_sbox
    tables, _ = _folded_tables(spec, target, clean_sbox)
    pos = group_positions(spec, target.group)
    xs = np.arange(1 << 16, dtype=np.uint32)
    d01 = (tables[0][(xs >> 8) & 0xFF] ^ tables[1][xs & 0xFF]).astype(np.uint8)
    d23 = (tables[2][(xs >> 8) & 0xFF] ^ tables[3][xs & 0xFF]).astype(np.uint8)
    cells = batch.cells
    t01 = (cells[:, pos[0]].astype(np.int64) << 8) | cells[:, pos[1]]
    t23 = (cells[:, pos[2]].astype(np.int64) << 8) | cells[:, pos[3]]
    return d01, d23, t01, t23


def full_search(
    batch: CiphertextBatch,
    target: AttackTarget,
    clean_sbox=None,
    n: int | None = None,
    workers: int = 1,
    top_k: int = 4096,
    checkpoint_path=None,
    progress=None,
    h23_values=None,
) -> SeiRanking:
    """Score all 2^32 group hypotheses; returns the merged top-k head.

    progress, if given, is called as progress(done_bands, total_bands) after
    every band. workers is accepted for interface symmetry; the kernel is
    single-threaded compiled code. h23_values, if given, restricts the low
    16 hypothesis bits to those values (partial knowledge shrinks the search
    to len(h23_values) x 2^16); a checkpoint file is only meaningful when
    reused with the same h23_values.
    """
    del workers
    if n is None:
        n = batch.n
    if not 1 <= n <= batch.n:
        raise ConfigurationError(f"n must be 1..{batch.n}, got {n}")
    if h23_values is None:
        h23_arr = np.arange(1 << 16, dtype=np.int64)
    else:
        h23_arr = np.array(sorted({int(v) for v in h23_values}), dtype=np.int64)
        if h23_arr.size == 0 or h23_arr[0] < 0 or h23_arr[-1] > 0xFFFF:
            raise ConfigurationError("h23_values must be a nonempty set of ints in 0..65535")
    d01, d23, t01, t23 = search_tables(batch, target, clean_sbox)
    t01, t23 = t01[:n], t23[:n]
    kernel = _get_kernel()
    done = _load_checkpoint(checkpoint_path)
    total_bands = -(-h23_arr.size // BAND_H23)
    fh = open(checkpoint_path, "a") if checkpoint_path else None
    try:
        for band_idx in range(total_bands):
            if band_idx in done:
                continue
            chunk = h23_arr[band_idx * BAND_H23 : (band_idx + 1) * BAND_H23]
            ss, h01, h23 = kernel(d01, d23, t01, t23, chunk, TOP_PER_BAND)
            order = np.argsort(-ss, kind="stable")
            entries = [
                (int(ss[i]), int(h01[i]), int(h23[i])) for i in order if ss[i] > 0
            ]
            done[band_idx] = entries
            if fh:
                fh.write(_band_line(_BandResult(band_idx, entries)) + "\n")
                fh.flush()
            if progress:
                progress(len(done), total_bands)
    finally:
        if fh:
            fh.close()
    merged = [e for entries in done.values() for e in entries]
    # sort by sumsq descending, then ascending packed hypothesis
    merged.sort(key=lambda e: (-e[0], (e[1] << 16) | e[2]))
    merged = merged[:top_k]
    hyps = np.array([(h01 << 16) | h23 for _, h01, h23 in merged], dtype=np.int64)
    scores = np.array([ss / float(n) ** 2 - 1.0 / 256 for ss, _, _ in merged])
    return SeiRanking(
        cipher="AES128",
        group=target.group,
        row=target.row,
        hypotheses=hyps,
        scores=scores,
        n_used=int(n),
        nbins=256,
    )


def hypothesis_score(
    batch: CiphertextBatch,
    target: AttackTarget,
    hyp_value: int,
    clean_sbox=None,
    n: int | None = None,
) -> float:
    """Exact SEI of one full 32-bit hypothesis (cross-check helper)."""
    if n is None:
        n = batch.n
    d01, d23, t01, t23 = search_tables(batch, target, clean_sbox)
    h01 = (hyp_value >> 16) & 0xFFFF
    h23 = hyp_value & 0xFFFF
    deltas = d01[t01[:n] ^ h01] ^ d23[t23[:n] ^ h23]
    return sei.sei(np.bincount(deltas, minlength=256))
