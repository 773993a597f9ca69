"""Cipher registry and the ciphertext-batch container.

Each supported cipher is described by a CipherSpec (structural constants plus
function handles), so fault injection, collection, and the key-search code can
stay cipher-agnostic. Cells are uint8 throughout; a cell holds a nibble for
LED64 and a byte for AES128.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import aes, led
from .errors import ConfigurationError
from .sbox import Sbox


@dataclass(frozen=True)
class CipherSpec:
    name: str
    cell_bits: int
    rounds: int
    clean_sbox: Sbox
    field_poly: int
    mix_matrix: tuple
    inv_mix_matrix: tuple
    shift_offsets: tuple  # row r rotates left by shift_offsets[r]
    # cell index of state matrix position (row, col)
    cell_index: Callable[[int, int], int]
    encrypt: Callable = field(repr=False, default=None)
    decrypt: Callable = field(repr=False, default=None)
    block_from_hex: Callable = field(repr=False, default=None)
    block_to_hex: Callable = field(repr=False, default=None)

    @property
    def sbox_size(self) -> int:
        return 1 << self.cell_bits

    @property
    def sbox_lookups_per_block(self) -> int:
        return self.rounds * 16

    def penultimate_round(self) -> int:
        return self.rounds - 1


LED64 = CipherSpec(
    name="LED64",
    cell_bits=4,
    rounds=led.ROUNDS,
    clean_sbox=led.PRESENT_SBOX,
    field_poly=led.POLY,
    mix_matrix=led.MIX_MATRIX,
    inv_mix_matrix=led.INV_MIX_MATRIX,
    shift_offsets=(0, 1, 2, 3),
    cell_index=lambda r, c: 4 * r + c,
    encrypt=led.encrypt,
    decrypt=led.decrypt,
    block_from_hex=led.block_from_hex,
    block_to_hex=led.block_to_hex,
)

AES128 = CipherSpec(
    name="AES128",
    cell_bits=8,
    rounds=aes.ROUNDS,
    clean_sbox=aes.AES_SBOX,
    field_poly=aes.POLY,
    mix_matrix=aes.MIX_MATRIX,
    inv_mix_matrix=aes.INV_MIX_MATRIX,
    shift_offsets=(0, 1, 2, 3),
    cell_index=lambda r, c: r + 4 * c,
    encrypt=aes.encrypt,
    decrypt=aes.decrypt,
    block_from_hex=aes.block_from_hex,
    block_to_hex=aes.block_to_hex,
)

CIPHERS = {spec.name: spec for spec in (LED64, AES128)}


def get_cipher(name) -> CipherSpec:
    if isinstance(name, CipherSpec):
        return name
    try:
        return CIPHERS[str(name)]
    except KeyError:
        raise ConfigurationError(
            f"unknown cipher {name!r}; choose from {sorted(CIPHERS)}"
        ) from None


def key_from_hex(spec: CipherSpec, text: str) -> np.ndarray:
    return spec.block_from_hex(text)


@dataclass
class CiphertextBatch:
    """Ciphertexts collected under one fixed key and one faulted table.

    metadata carries reproducibility details (seed, RNG family, fault digest,
    optionally the true key for protocol bookkeeping); the key-search code
    never reads it.
    """

    cipher: str
    cells: np.ndarray  # (n, 16) uint8
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.ndim != 2 or self.cells.shape[1] != 16:
            raise ConfigurationError(f"batch cells must be (n, 16), got {self.cells.shape}")
        get_cipher(self.cipher)

    @property
    def n(self) -> int:
        return int(self.cells.shape[0])

    def spec(self) -> CipherSpec:
        return get_cipher(self.cipher)


def save_batch(batch: CiphertextBatch, path) -> None:
    """Text format: header `<cipher> <count> [key=value ...]`, then one hex block per line."""
    spec = batch.spec()
    with open(path, "w") as fh:
        meta = " ".join(f"{k}={v}" for k, v in sorted(batch.metadata.items()))
        fh.write(f"{batch.cipher} {batch.n}" + (f" {meta}" if meta else "") + "\n")
        for row in batch.cells:
            fh.write(spec.block_to_hex(row) + "\n")


def load_batch(path) -> CiphertextBatch:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) < 2:
            raise ConfigurationError(f"{path}: missing batch header")
        name, count = header[0], header[1]
        spec = get_cipher(name)
        try:
            n = int(count)
        except ValueError:
            raise ConfigurationError(f"{path}: bad count {count!r}") from None
        metadata = {}
        for tok in header[2:]:
            if "=" not in tok:
                raise ConfigurationError(f"{path}: bad metadata token {tok!r}")
            k, v = tok.split("=", 1)
            metadata[k] = v
        rows = []
        for line in fh:
            line = line.strip()
            if line:
                rows.append(spec.block_from_hex(line))
    if len(rows) != n:
        raise ConfigurationError(f"{path}: header says {n} blocks, found {len(rows)}")
    cells = np.stack(rows) if rows else np.zeros((0, 16), dtype=np.uint8)
    return CiphertextBatch(cipher=name, cells=cells, metadata=metadata)
