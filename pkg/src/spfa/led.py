"""LED-64 with an injectable substitution table, vectorized over block batches.

State convention is row-major nibbles: cell index i of a 16-cell block is
row i // 4, column i % 4, matching the design document's reading order of the
64-bit block as 16 hex digits. Blocks are numpy uint8 arrays (values < 16) of
shape (16,) or (n, 16).

Structure: 8 steps of (AddRoundKey, then 4 rounds of AddConstants, SubCells,
ShiftRows, MixColumnsSerial), with a final AddRoundKey after step 8. 32 rounds
total, the 64-bit key used unchanged at every key addition.
"""

import numpy as np

from . import gf
from .errors import ConfigurationError
from .sbox import Sbox

POLY = 0x13
ROUNDS = 32
KEY_SIZE_BITS = 64

PRESENT_SBOX_TABLE = np.array(
    [0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD, 0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2],
    dtype=np.uint8,
)
PRESENT_SBOX_TABLE.flags.writeable = False
PRESENT_SBOX = Sbox(PRESENT_SBOX_TABLE)

MIX_MATRIX = ((4, 1, 2, 2), (8, 6, 5, 6), (0xB, 0xE, 0xA, 9), (2, 2, 0xF, 0xB))
INV_MIX_MATRIX = gf.mat_inv(MIX_MATRIX, POLY, 4)

MUL = {c: gf.mul_table(c, POLY, 4) for c in range(1, 16)}

# new[i] = old[perm[i]] with i = 4*row + col
SHIFT_SRC = np.array([4 * (i // 4) + ((i % 4 + i // 4) % 4) for i in range(16)])
INV_SHIFT_SRC = np.array([4 * (i // 4) + ((i % 4 - i // 4) % 4) for i in range(16)])


def _round_constant_values(n: int) -> list[int]:
    """First n states of the 6-bit constant LFSR, starting from the all-zero seed."""
    rc = 0
    out = []
    for _ in range(n):
        bit = ((rc >> 5) ^ (rc >> 4) ^ 1) & 1
        rc = ((rc << 1) & 0x3F) | bit
        out.append(rc)
    return out


RC_VALUES = tuple(_round_constant_values(ROUNDS))


def _constant_mask(rc: int) -> np.ndarray:
    upper_ks = (KEY_SIZE_BITS >> 4) & 0xF
    lower_ks = KEY_SIZE_BITS & 0xF
    hi, lo = (rc >> 3) & 0x7, rc & 0x7
    mask = np.zeros(16, dtype=np.uint8)
    mask[[0, 4, 8, 12]] = [0 ^ upper_ks, 1 ^ upper_ks, 2 ^ lower_ks, 3 ^ lower_ks]
    mask[[1, 5, 9, 13]] = [hi, lo, hi, lo]
    return mask


CONSTANT_MASKS = np.stack([_constant_mask(rc) for rc in RC_VALUES])
CONSTANT_MASKS.flags.writeable = False


def block_from_hex(text: str) -> np.ndarray:
    text = text.strip()
    if len(text) != 16:
        raise ConfigurationError(f"LED blocks are 16 hex digits, got {len(text)}")
    try:
        return np.array([int(c, 16) for c in text], dtype=np.uint8)
    except ValueError:
        raise ConfigurationError(f"bad hex block {text!r}") from None


def block_to_hex(cells: np.ndarray) -> str:
    return "".join(f"{int(v):x}" for v in np.asarray(cells, dtype=np.uint8))


def _as_blocks(blocks) -> np.ndarray:
    arr = np.asarray(blocks, dtype=np.uint8)
    if arr.shape[-1] != 16:
        raise ConfigurationError(f"blocks must have 16 cells, got shape {arr.shape}")
    if int(arr.max(initial=0)) > 0xF:
        raise ConfigurationError("LED cells are nibbles; found a value above 0xf")
    return arr


def add_constants(state, rnd: int):
    """XOR the round-rnd constant array into the state (rnd is 1-based)."""
    return state ^ CONSTANT_MASKS[rnd - 1]


def sub_cells(state, table=PRESENT_SBOX_TABLE):
    return np.asarray(table, dtype=np.uint8)[state]


def shift_rows(state):
    return state[..., SHIFT_SRC]


def inv_shift_rows(state):
    return state[..., INV_SHIFT_SRC]


def _mix_with(matrix_rows, state):
    s = state.reshape(*state.shape[:-1], 4, 4)
    rows = [s[..., r, :] for r in range(4)]
    out = []
    for coeffs in matrix_rows:
        acc = np.zeros_like(rows[0])
        for c, r in zip(coeffs, rows):
            acc = acc ^ (r if c == 1 else MUL[c][r])
        out.append(acc)
    return np.stack(out, axis=-2).reshape(state.shape)


def mix_columns(state):
    return _mix_with(MIX_MATRIX, state)


def inv_mix_columns(state):
    return _mix_with(INV_MIX_MATRIX, state)


def _round_table(rnd, sbox, sbox_rounds):
    if sbox_rounds and rnd in sbox_rounds:
        override = sbox_rounds[rnd]
        return override.table if isinstance(override, Sbox) else np.asarray(override, dtype=np.uint8)
    if sbox is None:
        return PRESENT_SBOX_TABLE
    return sbox.table if isinstance(sbox, Sbox) else np.asarray(sbox, dtype=np.uint8)


def encrypt(key, blocks, sbox=None, sbox_rounds=None) -> np.ndarray:
    """Encrypt blocks under a 16-nibble key; see aes.encrypt for the override rules."""
    blocks = _as_blocks(blocks)
    key = _as_blocks(key)
    if key.ndim != 1:
        raise ConfigurationError("LED-64 keys are a single 16-nibble block")
    state = blocks
    for step in range(8):
        state = state ^ key
        for j in range(4):
            rnd = 4 * step + j + 1
            state = add_constants(state, rnd)
            state = sub_cells(state, _round_table(rnd, sbox, sbox_rounds))
            state = shift_rows(state)
            state = mix_columns(state)
    return state ^ key


def decrypt(key, blocks, sbox=None) -> np.ndarray:
    """Inverse cipher; requires a bijective substitution table."""
    blocks = _as_blocks(blocks)
    key = _as_blocks(key)
    table = sbox if isinstance(sbox, Sbox) else Sbox(sbox) if sbox is not None else PRESENT_SBOX
    inv_table = table.inverse().table
    state = blocks ^ key
    for step in range(7, -1, -1):
        for j in range(3, -1, -1):
            rnd = 4 * step + j + 1
            state = inv_mix_columns(state)
            state = inv_shift_rows(state)
            state = sub_cells(state, inv_table)
            state = add_constants(state, rnd)
        state = state ^ key
    return state
