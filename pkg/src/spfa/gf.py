"""Small binary-field helpers backing the cipher linear layers.

Fields are GF(2^bits) with a fixed reduction polynomial given as an integer
that includes the x^bits term (AES uses 0x11b, the 4-bit ciphers use 0x13).
"""

import numpy as np


def gf_mul(a: int, b: int, poly: int, bits: int) -> int:
    """Carry-less multiply a*b reduced by poly."""
    mask = (1 << bits) - 1
    top = 1 << (bits - 1)
    red = poly & mask
    r = 0
    a &= mask
    while b:
        if b & 1:
            r ^= a
        hi = a & top
        a = (a << 1) & mask
        if hi:
            a ^= red
        b >>= 1
    return r


def mul_table(c: int, poly: int, bits: int) -> np.ndarray:
    """Lookup table for multiplication by the constant c."""
    n = 1 << bits
    return np.array([gf_mul(c, x, poly, bits) for x in range(n)], dtype=np.uint8)


def gf_inv(a: int, poly: int, bits: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse")
    for y in range(1, 1 << bits):
        if gf_mul(a, y, poly, bits) == 1:
            return y
    raise AssertionError("field element without inverse; poly not irreducible?")


def mat_inv(mat, poly: int, bits: int):
    """Invert a square matrix over GF(2^bits) by Gauss-Jordan elimination."""
    m = [list(row) for row in mat]
    n = len(m)
    aug = [m[i] + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = gf_inv(aug[col][col], poly, bits)
        aug[col] = [gf_mul(inv, v, poly, bits) for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v ^ gf_mul(f, w, poly, bits) for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)
