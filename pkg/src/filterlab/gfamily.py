"""Family G: ell independent one-bit hash functions, each exactly k-wise
independent.

Each g_i is a uniformly random degree-(k-1) polynomial over GF(2^w); its
output bit is the least significant bit of the field evaluation.  Exact
k-wise independence is immediate: on any <= k distinct points the
evaluations of a random polynomial are jointly uniform field elements, and
a fixed bit of a uniform field element is an unbiased bit.

Evaluating a degree-(k-1) polynomial per query would be ruinously slow in
pure Python, so the output bit is computed through a bilinear identity:
for field elements c and b, LSB(c*b) == parity(c & m(b)) where the mask
m(b) collects LSB(x^a * b) over bit positions a.  Packing the k
coefficients of g_i into one wide integer C_i and the k masks m(alpha^i)
into one wide integer X(alpha) turns a full polynomial evaluation into a
single AND + popcount:

    g_i(x) = parity(C_i & X(alpha_x))

X depends only on the field, k, and the point, never on the coefficients,
so it is cached and shared across every family (and filter build) with the
same shape.  A slow Horner evaluation is kept as the reference oracle; the
two routes are cross-checked exhaustively in tests.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import gf2
from .bitio import BitReader, BitWriter


def _pack_slots(values: np.ndarray, w: int) -> int:
    """Pack an array of w-bit values into one int, slot i at bits [i*w, (i+1)*w)."""
    if w == 16:
        return int.from_bytes(values.astype("<u2").tobytes(), "little")
    if w == 8:
        return int.from_bytes(values.astype("<u1").tobytes(), "little")
    if w == 4:
        v = values.astype(np.uint8)
        if len(v) % 2:
            v = np.append(v, np.uint8(0))
        return int.from_bytes((v[0::2] | (v[1::2] << 4)).tobytes(), "little")
    # generic fallback (wide fields): plain Python packing
    out = 0
    for i, val in enumerate(int(v) for v in values):
        out |= val << (i * w)
    return out


def _lsb_mask_scalar(beta: int, w: int) -> int:
    """m(beta): bit a is LSB(x^a * beta) in GF(2^w)."""
    p = gf2.MODULI[w]
    top = 1 << (w - 1)
    mask_w = (1 << w) - 1
    m, v = 0, beta
    for a in range(w):
        m |= (v & 1) << a
        v = ((v << 1) & mask_w) ^ (p & mask_w if v & top else 0)
    return m


class XProvider:
    """Cache of packed mask vectors X(x) for one (field width, k) shape."""

    def __init__(self, w: int, k: int):
        self.w = w
        self.k = k
        self._cache: dict[int, int] = {}
        if w in gf2.TABLE_WIDTHS:
            self._tables = gf2.tables(w)
            self._idx = np.arange(k, dtype=np.int64)
        else:
            self._tables = None

    def get(self, x: int) -> int:
        v = self._cache.get(x)
        if v is None:
            v = self._build(x)
            self._cache[x] = v
        return v

    def _build(self, x: int) -> int:
        if x >> self.w:
            raise ValueError(f"point {x} does not embed in GF(2^{self.w})")
        if x == 0:
            return 1  # powers are (1, 0, 0, ...) and m(1) == 1
        t = self._tables
        if t is not None:
            powlogs = (self._idx * int(t.log[x])) % t.order
            betas = t.exp[powlogs]
            return _pack_slots(t.lsb_mask[betas], self.w)
        out, beta = 0, 1
        for i in range(self.k):
            out |= _lsb_mask_scalar(beta, self.w) << (i * self.w)
            beta = gf2.gf_mul(beta, x, self.w)
        return out


_PROVIDERS: OrderedDict[tuple[int, int], XProvider] = OrderedDict()
_PROVIDER_LIMIT = 6


def x_provider(w: int, k: int) -> XProvider:
    key = (w, k)
    prov = _PROVIDERS.get(key)
    if prov is None:
        prov = XProvider(w, k)
        _PROVIDERS[key] = prov
        while len(_PROVIDERS) > _PROVIDER_LIMIT:
            _PROVIDERS.popitem(last=False)
    else:
        _PROVIDERS.move_to_end(key)
    return prov


@dataclass
class GFamily:
    """ell sampled one-bit functions over GF(2^field_width), k-wise independent."""

    ell: int
    k: int
    field_width: int
    coeffs: np.ndarray  # uint64[ell, k], each entry < 2^field_width

    def __post_init__(self) -> None:
        self.packed: list[int] = [
            _pack_slots(self.coeffs[j], self.field_width) for j in range(self.ell)
        ]
        self.provider = x_provider(self.field_width, self.k)

    @property
    def rep_bits(self) -> int:
        return self.ell * self.k * self.field_width

    def evaluate(self, i: int, x: int) -> int:
        """Reference Horner evaluation of polynomial i at the embedding of x.

        Returns the full field element; the output bit is its LSB.  Kept
        deliberately independent of the packed fast path.
        """
        if not (0 <= i < self.ell):
            raise IndexError(f"function index {i} out of range")
        if x >> self.field_width:
            raise ValueError(f"point {x} does not embed in GF(2^{self.field_width})")
        w = self.field_width
        acc = 0
        for d in range(self.k - 1, -1, -1):
            acc = gf2.gf_mul(acc, x, w) ^ int(self.coeffs[i, d])
        return acc

    def eval_bit(self, i: int, x: int) -> int:
        """Output bit of g_i at x (fast path)."""
        if not (0 <= i < self.ell):
            raise IndexError(f"function index {i} out of range")
        return (self.packed[i] & self.provider.get(x)).bit_count() & 1

    def fingerprint(self, x: int) -> int:
        """All ell output bits at x, packed with g_0 in the low bit."""
        X = self.provider.get(x)
        fp = 0
        for j, C in enumerate(self.packed):
            fp |= ((C & X).bit_count() & 1) << j
        return fp

    def serialize(self) -> tuple[bytes, int]:
        """Coefficients in index order as fixed-width big-endian field elements."""
        w = BitWriter()
        fw = self.field_width
        for j in range(self.ell):
            for i in range(self.k):
                w.write(int(self.coeffs[j, i]), fw)
        return w.getvalue(), w.bit_length

    @classmethod
    def deserialize(cls, ell: int, k: int, field_width: int,
                    data: bytes, bit_length: int) -> "GFamily":
        r = BitReader(data, bit_length)
        coeffs = np.zeros((ell, k), dtype=np.uint64)
        for j in range(ell):
            for i in range(k):
                coeffs[j, i] = r.read(field_width)
        return cls(ell=ell, k=k, field_width=field_width, coeffs=coeffs)


def g_sample(ell: int, k: int, field_width: int, rng_seed: int) -> GFamily:
    """Sample the family: uniform independent coefficients, degree may degenerate."""
    if ell < 1 or k < 1:
        raise ValueError("ell and k must be >= 1")
    if field_width not in gf2.SUPPORTED_WIDTHS:
        raise ValueError(f"field_width must be one of {gf2.SUPPORTED_WIDTHS}")
    rng = np.random.default_rng(rng_seed)
    if field_width < 64:
        coeffs = rng.integers(0, 1 << field_width, size=(ell, k), dtype=np.uint64)
    else:
        halves = rng.integers(0, 1 << 32, size=(ell, k, 2), dtype=np.uint64)
        coeffs = (halves[..., 0] << np.uint64(32)) | halves[..., 1]
    return GFamily(ell=ell, k=k, field_width=field_width, coeffs=coeffs)
