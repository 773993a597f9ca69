"""Substitution tables as first-class objects.

An Sbox is a table of 2^s entries, each an s-bit value, with s in {4, 8}.
Tables are stored as read-only numpy uint8 arrays so a table handed to the
cipher or the fault models cannot be mutated behind anyone's back.

File format: 2^s whitespace-separated hex entries (with optional # comments);
the width is inferred from the entry count.
"""

import numpy as np

from .errors import ConfigurationError, ContractViolation

VALID_SIZES = (16, 256)


class Sbox:
    def __init__(self, entries):
        table = np.array(entries, dtype=np.uint8)
        if table.ndim != 1 or table.size not in VALID_SIZES:
            raise ConfigurationError(
                f"an sbox needs 16 or 256 entries, got shape {table.shape}"
            )
        if int(table.max(initial=0)) >= table.size:
            raise ConfigurationError(
                f"entry value {int(table.max())} out of range for {table.size} entries"
            )
        table.flags.writeable = False
        self.table = table

    @property
    def size(self) -> int:
        return int(self.table.size)

    @property
    def bits(self) -> int:
        return 4 if self.table.size == 16 else 8

    def __getitem__(self, x):
        return self.table[x]

    def __eq__(self, other):
        if not isinstance(other, Sbox):
            return NotImplemented
        return self.size == other.size and bool(np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"Sbox({self.size} entries, bijective={self.is_bijection()})"

    def is_bijection(self) -> bool:
        return np.unique(self.table).size == self.size

    def inverse(self) -> "Sbox":
        if not self.is_bijection():
            raise ContractViolation("cannot invert a non-bijective sbox")
        inv = np.empty(self.size, dtype=np.uint8)
        inv[self.table] = np.arange(self.size, dtype=np.uint8)
        return Sbox(inv)

    def diff_indices(self, other: "Sbox") -> np.ndarray:
        """Indices where this table disagrees with another of the same size."""
        if self.size != other.size:
            raise ConfigurationError("cannot diff sboxes of different widths")
        return np.flatnonzero(self.table != other.table)


def load_sbox(path) -> Sbox:
    """Read an sbox from a whitespace-separated hex file."""
    tokens = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    if len(tokens) not in VALID_SIZES:
        raise ConfigurationError(
            f"{path}: expected 16 or 256 entries, found {len(tokens)}"
        )
    try:
        values = [int(t, 16) for t in tokens]
    except ValueError as e:
        raise ConfigurationError(f"{path}: bad hex token ({e})") from None
    return Sbox(values)


def dump_sbox(sbox: Sbox, path, per_line: int = 16) -> None:
    width = 1 if sbox.bits == 4 else 2
    with open(path, "w") as fh:
        for start in range(0, sbox.size, per_line):
            row = sbox.table[start : start + per_line]
            fh.write(" ".join(f"{int(v):0{width}x}" for v in row) + "\n")
