"""Permutation shield: make any filter resilient by randomizing its inputs.

Every element is passed through a secret keyed bijection before it reaches
the wrapped filter, both at build time (the filter is built on the permuted
set) and at query time.  Adaptive queries therefore reach the inner filter
as points the adversary cannot steer, and the memory overhead is exactly
the key: lambda_bits.

Only the key must stay secret: publishing the inner representation must not
help an attacker, and the debug exposure policies deliberately exercise
that claim.
"""

from __future__ import annotations

import random
from typing import Iterable

from .core import FilterParams, FilterFactory, Representation
from .permutation import PermKey, permute, sample_key


class ShieldedRep(Representation):
    def __init__(self, params: FilterParams, key: PermKey, inner: Representation):
        self.params = params
        self.key = key
        self.inner = inner
        # the permutation is a pure function of the key: memoizing it is a
        # query-time cache, not representation state
        self._memo: dict[int, int] | list[int | None]
        if params.u_bits <= 16:
            self._memo = [None] * params.universe
        else:
            self._memo = {}

    @property
    def kind(self) -> str:  # type: ignore[override]
        return self.inner.kind

    @property
    def bits(self) -> int:
        return self.inner.bits + self.params.lambda_bits

    def _permute(self, x: int) -> int:
        memo = self._memo
        if isinstance(memo, list):
            y = memo[x]
            if y is None:
                y = permute(self.key, x)
                memo[x] = y
            return y
        y = memo.get(x)
        if y is None:
            y = permute(self.key, x)
            memo[x] = y
        return y

    def query(self, x: int) -> bool:
        return self.inner.query(self._permute(x))

    def serialize(self) -> tuple[bytes, int]:
        from .bitio import BitWriter

        inner_data, inner_bits = self.inner.serialize()
        w = BitWriter()
        w.write(self.key.key_bits, self.params.lambda_bits)
        w.write(int.from_bytes(inner_data, "big"), len(inner_data) * 8)
        # tail padding of the inner payload is excluded from the count
        return w.getvalue(), self.params.lambda_bits + inner_bits

    def published_view(self, expose: str):
        # exposure applies to the inner filter; the key is never published
        return self.inner.published_view(expose)

    def rep_space_enumerator(self):
        # a black-box attacker enumerates the inner space it believes it faces
        return self.inner.rep_space_enumerator()


def build_shield(
    inner_builder: FilterFactory,
    S: Iterable[int],
    params: FilterParams,
    rng_seed: int,
) -> ShieldedRep:
    """Sample a key, permute S, and build the wrapped filter on the image."""
    rng = random.Random(rng_seed)
    key = sample_key(params.lambda_bits, params.universe, rng)
    members = frozenset(S)
    permuted = {permute(key, x) for x in members}
    assert len(permuted) == len(members), "bijection cannot collapse the set"
    inner_seed = rng.getrandbits(63)
    inner = inner_builder(permuted, params, inner_seed)
    return ShieldedRep(params, key, inner)
