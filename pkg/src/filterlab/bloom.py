"""Classic steady-representation Bloom filter.

The non-resilient baseline: k_h keyed index hashes into an m-bit array.
Index seeds are secret by default; debug exposure policies publish the hash
structure (for representation-space search attacks) or the full state (for
white-box search attacks).
"""

from __future__ import annotations

import math
import random
from typing import Iterable

from .bitio import BitReader, BitWriter
from .core import SEED_BITS, BuildError, FilterParams, Representation
from .hashing import mix64


def standard_bloom_bits(n: int, eps: float) -> int:
    """Textbook sizing: m = ceil(n * log2(1/eps) / ln 2)."""
    return math.ceil(n * math.log2(1.0 / eps) / math.log(2))


def index_count(m: int, n: int) -> int:
    """k_h = max(1, round(ln 2 * m / n))."""
    return max(1, round(math.log(2) * m / n))


class BloomIndexStructure:
    """The public hash structure of a Bloom filter: everything but the array."""

    def __init__(self, m: int, seeds: tuple[int, ...], u_bits: int):
        self.m = m
        self.seeds = seeds
        self.k_h = len(seeds)
        self.u_bits = u_bits

    def positions(self, x: int) -> list[int]:
        return [mix64(s, x) % self.m for s in self.seeds]

    def position_masks(self) -> list[int]:
        """Per-element OR-mask of index bits, precomputed over the universe.

        Only for enumerable universes; lets candidate representations be
        tested as integers: rep matches x iff rep & mask[x] == mask[x].
        """
        if self.u_bits > 16:
            raise ValueError("position masks only precomputed for u_bits <= 16")
        masks = []
        for x in range(1 << self.u_bits):
            mk = 0
            for p in self.positions(x):
                mk |= 1 << p
            masks.append(mk)
        return masks


class BloomRepSpace:
    """Exhaustive space of m-bit arrays under a published hash structure."""

    def __init__(self, structure: BloomIndexStructure):
        if structure.m > 20:
            raise ValueError("representation space too large to enumerate")
        self.structure = structure
        self.masks = structure.position_masks()

    @property
    def memory_bits(self) -> int:
        # the searched secret state is the array; the seeds are published
        return self.structure.m

    def rep_ids(self) -> range:
        return range(1 << self.structure.m)

    def model_query(self, rep_id: int, x: int) -> bool:
        mk = self.masks[x]
        return (rep_id & mk) == mk


class BloomFilterRep(Representation):
    kind = "steady"

    def __init__(self, params: FilterParams, m: int, seeds: tuple[int, ...],
                 array: bytearray):
        self.params = params
        self.m = m
        self.seeds = seeds
        self.k_h = len(seeds)
        self.array = array

    @property
    def bits(self) -> int:
        # seeds are secret state, so they count
        return self.m + self.k_h * SEED_BITS

    def _get(self, pos: int) -> int:
        return (self.array[pos >> 3] >> (pos & 7)) & 1

    def _set(self, pos: int) -> None:
        self.array[pos >> 3] |= 1 << (pos & 7)

    def query(self, x: int) -> bool:
        m = self.m
        arr = self.array
        for s in self.seeds:
            p = mix64(s, x) % m
            if not (arr[p >> 3] >> (p & 7)) & 1:
                return False
        return True

    def structure(self) -> BloomIndexStructure:
        return BloomIndexStructure(self.m, self.seeds, self.params.u_bits)

    def published_view(self, expose: str):
        if expose == "structure":
            return self.structure()
        if expose == "full":
            return self
        return None

    def rep_space_enumerator(self):
        if self.m <= 20 and self.params.u_bits <= 16:
            return BloomRepSpace(self.structure())
        return None

    def serialize(self) -> tuple[bytes, int]:
        w = BitWriter()
        for s in self.seeds:
            w.write(s, SEED_BITS)
        for pos in range(self.m):
            w.write(self._get(pos), 1)
        return w.getvalue(), w.bit_length

    @classmethod
    def deserialize(cls, params: FilterParams, m: int, k_h: int,
                    data: bytes, bit_length: int) -> "BloomFilterRep":
        r = BitReader(data, bit_length)
        seeds = tuple(r.read(SEED_BITS) for _ in range(k_h))
        array = bytearray((m + 7) // 8)
        rep = cls(params, m, seeds, array)
        for pos in range(m):
            if r.read(1):
                rep._set(pos)
        return rep


def build_bloom(S: Iterable[int], params: FilterParams, rng_seed: int,
                m: int | None = None) -> BloomFilterRep:
    """Build the baseline filter; m defaults to standard sizing from eps."""
    elems = list(S)
    members = frozenset(elems)
    if len(members) != len(elems):
        raise BuildError("duplicate elements in S")
    if m is None:
        m = standard_bloom_bits(params.n, params.eps)
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = random.Random(rng_seed)
    k_h = index_count(m, params.n)
    seeds = tuple(rng.getrandbits(SEED_BITS) for _ in range(k_h))
    rep = BloomFilterRep(params, m, seeds, bytearray((m + 7) // 8))
    for x in members:
        params.check_element(x)
        for s in seeds:
            rep._set(mix64(s, x) % m)
    return rep
