"""Two-level synthesis of substitution tables.

Each output bit is minimized independently with Quine-McCluskey: merge
adjacent implicants until fixpoint, take the primes, then cover the on-set
greedily. Tie-breaking is deterministic everywhere: among primes covering
the same number of still-uncovered minterms the lexicographically smallest
(value, mask) pair wins, so the same table always yields the same netlist.

Cubes are (value, mask) pairs; a set mask bit marks a don't-care position.
"""

import numpy as np

from .errors import ConfigurationError
from .netlist import Gate, Netlist
from .sbox import Sbox


def cube_minterms(value: int, mask: int, bits: int) -> frozenset:
    free = [b for b in range(bits) if mask & (1 << b)]
    terms = []
    for assign in range(1 << len(free)):
        x = value
        for i, b in enumerate(free):
            if assign & (1 << i):
                x |= 1 << b
        terms.append(x)
    return frozenset(terms)


def prime_implicants(on_set, bits: int) -> set:
    cubes = {(m, 0) for m in on_set}
    primes = set()
    while cubes:
        merged = set()
        used = set()
        for v, mask in cubes:
            for b in range(bits):
                bit = 1 << b
                if mask & bit:
                    continue
                partner = (v ^ bit, mask)
                if partner in cubes:
                    merged.add((v & ~bit, mask | bit))
                    used.add((v, mask))
                    used.add(partner)
        primes |= cubes - used
        cubes = merged
    return primes


def minimal_cover(on_set, bits: int) -> list:
    """Greedy prime-implicant cover of on_set; returns sorted (value, mask) cubes."""
    on_set = set(on_set)
    if not on_set:
        return []
    if any(not 0 <= m < (1 << bits) for m in on_set):
        raise ConfigurationError("minterm out of range")
    primes = sorted(prime_implicants(on_set, bits))
    spans = {c: cube_minterms(c[0], c[1], bits) for c in primes}
    uncovered = set(on_set)
    chosen = []
    while uncovered:
        best, best_gain = None, 0
        for c in primes:
            gain = len(spans[c] & uncovered)
            if gain > best_gain:
                best, best_gain = c, gain
        chosen.append(best)
        uncovered -= spans[best]
    return sorted(chosen)


def _literals(value: int, mask: int, bits: int) -> list:
    """Wire names for a cube's fixed positions, most significant bit first."""
    out = []
    for b in range(bits - 1, -1, -1):
        bit = 1 << b
        if mask & bit:
            continue
        out.append(f"x{b}" if value & bit else f"n{b}")
    return out


def synthesize_sop(sbox: Sbox) -> Netlist:
    """Sum-of-products netlist computing the table; derive_table inverts it exactly."""
    bits = sbox.bits
    inputs = tuple(f"x{b}" for b in range(bits - 1, -1, -1))
    gates = []
    not_made = set()
    outputs = []
    term_counter = 0
    for j in range(bits - 1, -1, -1):
        on_set = [m for m in range(sbox.size) if (int(sbox.table[m]) >> j) & 1]
        name = f"y{j}"
        if not on_set:
            outputs.append((name, "0"))
            continue
        if len(on_set) == sbox.size:
            outputs.append((name, "1"))
            continue
        cover = minimal_cover(on_set, bits)
        term_wires = []
        for value, mask in cover:
            lits = _literals(value, mask, bits)
            for lit in lits:
                if lit.startswith("n") and lit not in not_made:
                    gates.append(Gate(lit, "NOT", (f"x{lit[1:]}",)))
                    not_made.add(lit)
            if len(lits) == 1:
                term_wires.append(lits[0])
            else:
                gid = f"t{term_counter}"
                term_counter += 1
                gates.append(Gate(gid, "AND", tuple(lits)))
                term_wires.append(gid)
        if len(term_wires) == 1:
            outputs.append((name, term_wires[0]))
        else:
            gid = f"or_y{j}"
            gates.append(Gate(gid, "OR", tuple(term_wires)))
            outputs.append((name, gid))
    return Netlist(inputs, tuple(gates), tuple(outputs))


def table_from_cover(cover, bits: int) -> np.ndarray:
    """Characteristic vector of a cube list (testing helper)."""
    out = np.zeros(1 << bits, dtype=bool)
    for value, mask in cover:
        for m in cube_minterms(value, mask, bits):
            out[m] = True
    return out
