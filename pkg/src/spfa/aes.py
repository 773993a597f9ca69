"""AES-128 with an injectable substitution table, vectorized over block batches.

State convention follows the standard column-major loading: cell index i of a
16-cell block is state row i % 4, column i // 4, i.e. cell i == input byte i.
Blocks are numpy uint8 arrays of shape (16,) or (n, 16); all round functions
broadcast over leading axes.

The substitution step accepts any 256-entry table (bijective or not), and an
optional per-round override so a fault can be restricted to chosen rounds.
Key schedule and its inversion work on 16-byte round keys.
"""

import numpy as np

from . import gf
from .errors import ConfigurationError
from .sbox import Sbox

POLY = 0x11B
ROUNDS = 10

SBOX_TABLE = np.array([
    0x63, 0x7C, 0x77, 0x7B, 0xF2, 0x6B, 0x6F, 0xC5, 0x30, 0x01, 0x67, 0x2B, 0xFE, 0xD7, 0xAB, 0x76,
    0xCA, 0x82, 0xC9, 0x7D, 0xFA, 0x59, 0x47, 0xF0, 0xAD, 0xD4, 0xA2, 0xAF, 0x9C, 0xA4, 0x72, 0xC0,
    0xB7, 0xFD, 0x93, 0x26, 0x36, 0x3F, 0xF7, 0xCC, 0x34, 0xA5, 0xE5, 0xF1, 0x71, 0xD8, 0x31, 0x15,
    0x04, 0xC7, 0x23, 0xC3, 0x18, 0x96, 0x05, 0x9A, 0x07, 0x12, 0x80, 0xE2, 0xEB, 0x27, 0xB2, 0x75,
    0x09, 0x83, 0x2C, 0x1A, 0x1B, 0x6E, 0x5A, 0xA0, 0x52, 0x3B, 0xD6, 0xB3, 0x29, 0xE3, 0x2F, 0x84,
    0x53, 0xD1, 0x00, 0xED, 0x20, 0xFC, 0xB1, 0x5B, 0x6A, 0xCB, 0xBE, 0x39, 0x4A, 0x4C, 0x58, 0xCF,
    0xD0, 0xEF, 0xAA, 0xFB, 0x43, 0x4D, 0x33, 0x85, 0x45, 0xF9, 0x02, 0x7F, 0x50, 0x3C, 0x9F, 0xA8,
    0x51, 0xA3, 0x40, 0x8F, 0x92, 0x9D, 0x38, 0xF5, 0xBC, 0xB6, 0xDA, 0x21, 0x10, 0xFF, 0xF3, 0xD2,
    0xCD, 0x0C, 0x13, 0xEC, 0x5F, 0x97, 0x44, 0x17, 0xC4, 0xA7, 0x7E, 0x3D, 0x64, 0x5D, 0x19, 0x73,
    0x60, 0x81, 0x4F, 0xDC, 0x22, 0x2A, 0x90, 0x88, 0x46, 0xEE, 0xB8, 0x14, 0xDE, 0x5E, 0x0B, 0xDB,
    0xE0, 0x32, 0x3A, 0x0A, 0x49, 0x06, 0x24, 0x5C, 0xC2, 0xD3, 0xAC, 0x62, 0x91, 0x95, 0xE4, 0x79,
    0xE7, 0xC8, 0x37, 0x6D, 0x8D, 0xD5, 0x4E, 0xA9, 0x6C, 0x56, 0xF4, 0xEA, 0x65, 0x7A, 0xAE, 0x08,
    0xBA, 0x78, 0x25, 0x2E, 0x1C, 0xA6, 0xB4, 0xC6, 0xE8, 0xDD, 0x74, 0x1F, 0x4B, 0xBD, 0x8B, 0x8A,
    0x70, 0x3E, 0xB5, 0x66, 0x48, 0x03, 0xF6, 0x0E, 0x61, 0x35, 0x57, 0xB9, 0x86, 0xC1, 0x1D, 0x9E,
    0xE1, 0xF8, 0x98, 0x11, 0x69, 0xD9, 0x8E, 0x94, 0x9B, 0x1E, 0x87, 0xE9, 0xCE, 0x55, 0x28, 0xDF,
    0x8C, 0xA1, 0x89, 0x0D, 0xBF, 0xE6, 0x42, 0x68, 0x41, 0x99, 0x2D, 0x0F, 0xB0, 0x54, 0xBB, 0x16,
], dtype=np.uint8)
SBOX_TABLE.flags.writeable = False

AES_SBOX = Sbox(SBOX_TABLE)
INV_SBOX_TABLE = AES_SBOX.inverse().table

RCON = (0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40, 0x80, 0x1B, 0x36)

MIX_MATRIX = ((2, 3, 1, 1), (1, 2, 3, 1), (1, 1, 2, 3), (3, 1, 1, 2))
INV_MIX_MATRIX = gf.mat_inv(MIX_MATRIX, POLY, 8)

MUL = {c: gf.mul_table(c, POLY, 8) for c in (2, 3, 9, 11, 13, 14)}

# new[i] = old[perm[i]] with i = row + 4*col
SHIFT_SRC = np.array([(i % 4) + 4 * ((i // 4 + i % 4) % 4) for i in range(16)])
INV_SHIFT_SRC = np.array([(i % 4) + 4 * ((i // 4 - i % 4) % 4) for i in range(16)])


def block_from_hex(text: str) -> np.ndarray:
    try:
        data = bytes.fromhex(text)
    except ValueError:
        raise ConfigurationError(f"bad hex block {text!r}") from None
    if len(data) != 16:
        raise ConfigurationError(f"AES blocks are 16 bytes, got {len(data)}")
    return np.frombuffer(data, dtype=np.uint8).copy()


def block_to_hex(cells: np.ndarray) -> str:
    return bytes(np.asarray(cells, dtype=np.uint8)).hex()


def _as_blocks(blocks) -> np.ndarray:
    arr = np.asarray(blocks, dtype=np.uint8)
    if arr.shape[-1] != 16:
        raise ConfigurationError(f"blocks must have 16 cells, got shape {arr.shape}")
    return arr


def sub_cells(state, table=SBOX_TABLE):
    return np.asarray(table, dtype=np.uint8)[state]


def shift_rows(state):
    return state[..., SHIFT_SRC]


def inv_shift_rows(state):
    return state[..., INV_SHIFT_SRC]


def _mix_with(matrix_rows, state):
    s = state.reshape(*state.shape[:-1], 4, 4)
    rows = [s[..., r] for r in range(4)]
    out = []
    for coeffs in matrix_rows:
        acc = np.zeros_like(rows[0])
        for c, r in zip(coeffs, rows):
            acc = acc ^ (r if c == 1 else MUL[c][r])
        out.append(acc)
    return np.stack(out, axis=-1).reshape(state.shape)


def mix_columns(state):
    return _mix_with(MIX_MATRIX, state)


def inv_mix_columns(state):
    return _mix_with(INV_MIX_MATRIX, state)


def _sub_word(w):
    return [int(SBOX_TABLE[b]) for b in w]


def key_schedule(key) -> np.ndarray:
    """Expand a 16-byte key into 11 round keys, shape (11, 16)."""
    key = _as_blocks(key)
    if key.ndim != 1:
        raise ConfigurationError("key schedule expects a single 16-byte key")
    words = [list(key[4 * i : 4 * i + 4]) for i in range(4)]
    for i in range(4, 44):
        temp = list(words[i - 1])
        if i % 4 == 0:
            temp = temp[1:] + temp[:1]
            temp = _sub_word(temp)
            temp[0] ^= RCON[i // 4 - 1]
        words.append([a ^ b for a, b in zip(words[i - 4], temp)])
    flat = [b for w in words for b in w]
    return np.array(flat, dtype=np.uint8).reshape(11, 16)


def invert_key_schedule(last_round_key) -> np.ndarray:
    """Recover the master key from round key 10."""
    rk = _as_blocks(last_round_key)
    words = [None] * 44
    for i in range(4):
        words[40 + i] = [int(b) for b in rk[4 * i : 4 * i + 4]]
    for i in range(43, 3, -1):
        temp = list(words[i - 1])
        if i % 4 == 0:
            temp = temp[1:] + temp[:1]
            temp = _sub_word(temp)
            temp[0] ^= RCON[i // 4 - 1]
        words[i - 4] = [a ^ b for a, b in zip(words[i], temp)]
    flat = [b for w in words[:4] for b in w]
    return np.array(flat, dtype=np.uint8)


def _round_table(rnd, sbox, sbox_rounds):
    if sbox_rounds and rnd in sbox_rounds:
        override = sbox_rounds[rnd]
        return override.table if isinstance(override, Sbox) else np.asarray(override, dtype=np.uint8)
    if sbox is None:
        return SBOX_TABLE
    return sbox.table if isinstance(sbox, Sbox) else np.asarray(sbox, dtype=np.uint8)


def encrypt(key, blocks, sbox=None, sbox_rounds=None) -> np.ndarray:
    """Encrypt blocks under key; sbox/sbox_rounds swap the substitution table.

    sbox_rounds maps 1-based round numbers to tables and wins over sbox for
    those rounds; rounds not listed fall back to sbox (or the clean table).
    """
    blocks = _as_blocks(blocks)
    rks = key_schedule(key)
    state = blocks ^ rks[0]
    for rnd in range(1, ROUNDS + 1):
        state = sub_cells(state, _round_table(rnd, sbox, sbox_rounds))
        state = shift_rows(state)
        if rnd < ROUNDS:
            state = mix_columns(state)
        state = state ^ rks[rnd]
    return state


def decrypt(key, blocks, sbox=None) -> np.ndarray:
    """Inverse cipher; requires a bijective substitution table."""
    blocks = _as_blocks(blocks)
    table = sbox if isinstance(sbox, Sbox) else Sbox(sbox) if sbox is not None else AES_SBOX
    inv_table = table.inverse().table
    rks = key_schedule(key)
    state = blocks ^ rks[ROUNDS]
    for rnd in range(ROUNDS, 0, -1):
        if rnd < ROUNDS:
            state = inv_mix_columns(state)
        state = inv_shift_rows(state)
        state = sub_cells(state, inv_table)
        state = state ^ rks[rnd - 1]
    return state
