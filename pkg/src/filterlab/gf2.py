"""Binary extension field arithmetic GF(2^w).

Field elements are Python ints in [0, 2^w) interpreted as polynomials over
GF(2); multiplication is carry-less polynomial multiplication reduced by a
fixed irreducible modulus.  The moduli are pinned so that results are
bit-exact across implementations:

    w = 4   x^4 + x + 1                      (0x13)
    w = 8   x^8 + x^4 + x^3 + x^2 + 1        (0x11D)
    w = 16  x^16 + x^12 + x^3 + x + 1        (0x1100B)
    w = 32  x^32 + x^7 + x^3 + x^2 + 1       (0x10000008D)
    w = 64  x^64 + x^4 + x^3 + x + 1         (0x1000000000000001B)

For w <= 16 the polynomial x is a primitive element of these fields, so
discrete-log/antilog tables with generator x are available (`FieldTables`)
and drive the vectorised evaluation paths used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MODULI = {
    4: 0x13,
    8: 0x11D,
    16: 0x1100B,
    32: 0x10000008D,
    64: 0x1000000000000001B,
}

SUPPORTED_WIDTHS = tuple(sorted(MODULI))

# Widths small enough for full log/antilog tables.
TABLE_WIDTHS = (4, 8, 16)


def width_for(bits: int) -> int:
    """Smallest supported field width >= bits."""
    for w in SUPPORTED_WIDTHS:
        if w >= bits:
            return w
    raise ValueError(f"no supported field width covers {bits} bits")


def clmul(a: int, b: int) -> int:
    """Carry-less product of two nonnegative ints (GF(2)[x] multiplication)."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def gf_mod(a: int, p: int) -> int:
    """Reduce polynomial a modulo p over GF(2)."""
    dp = p.bit_length()
    while a.bit_length() >= dp:
        a ^= p << (a.bit_length() - dp)
    return a


def gf_mul(a: int, b: int, w: int) -> int:
    """Multiply in GF(2^w) using the pinned modulus."""
    return gf_mod(clmul(a, b), MODULI[w])


def gf_pow(a: int, e: int, w: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = gf_mul(r, a, w)
        a = gf_mul(a, a, w)
        e >>= 1
    return r


def _poly_gcd(a: int, b: int) -> int:
    while b:
        db = b.bit_length()
        while a.bit_length() >= db:
            a ^= b << (a.bit_length() - db)
        a, b = b, a
    return a


def is_irreducible(p: int) -> bool:
    """Rabin irreducibility test for a degree-w polynomial over GF(2)."""
    w = p.bit_length() - 1
    if w < 1:
        return False

    def x_pow_2exp(j: int) -> int:
        v = 2
        for _ in range(j):
            v = gf_mod(clmul(v, v), p)
        return v

    if x_pow_2exp(w) != 2:
        return False
    n, q, primes = w, 2, []
    while q * q <= n:
        if n % q == 0:
            primes.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        primes.append(n)
    for q in primes:
        if _poly_gcd(x_pow_2exp(w // q) ^ 2, p) != 1:
            return False
    return True


@dataclass
class FieldTables:
    """Log/antilog tables for GF(2^w), w <= 16, with generator x.

    Zero has no discrete log; log[0] holds the out-of-range sentinel
    `order` and callers special-case zero operands.
    """

    width: int
    order: int
    log: np.ndarray    # int32[2^w]
    exp: np.ndarray    # int32[order]: exp[i] = x^i
    lsb_mask: np.ndarray  # uint64[2^w]: mask m(b) with parity(c & m(b)) == LSB(c*b)


_TABLE_CACHE: dict[int, FieldTables] = {}


def tables(w: int) -> FieldTables:
    """Build (and cache) the lookup tables for a table-sized width."""
    if w in _TABLE_CACHE:
        return _TABLE_CACHE[w]
    if w not in TABLE_WIDTHS:
        raise ValueError(f"log/antilog tables only built for widths {TABLE_WIDTHS}")
    order = (1 << w) - 1
    exp = np.zeros(order, dtype=np.int32)
    log = np.zeros(1 << w, dtype=np.int32)
    v = 1
    for i in range(order):
        exp[i] = v
        log[v] = i
        v = gf_mul(v, 2, w)
    assert v == 1, "x must be primitive for the pinned modulus"
    log[0] = order

    # lsb_mask[b]: bit a of the mask is LSB(x^a * b), so that for any c,
    # LSB(c * b) == parity(c & lsb_mask[b]).  This linearises the low output
    # bit of a field product over the bits of one operand.
    size = 1 << w
    vals = np.arange(size, dtype=np.uint64)
    p64 = np.uint64(MODULI[w] & ((1 << w) - 1))
    top = np.uint64(1 << (w - 1))
    mask_w = np.uint64((1 << w) - 1)
    m = np.zeros(size, dtype=np.uint64)
    cur = vals.copy()
    for a in range(w):
        m |= (cur & np.uint64(1)) << np.uint64(a)
        high = (cur & top) != 0
        cur = (cur << np.uint64(1)) & mask_w
        cur[high] ^= p64
    t = FieldTables(width=w, order=order, log=log, exp=exp, lsb_mask=m)
    _TABLE_CACHE[w] = t
    return t
