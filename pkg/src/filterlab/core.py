"""Domain types, the filter contract, and the adversarial challenge game.

A filter is built once on a set S drawn from the integer universe
[0, 2^u_bits) and then answers membership queries with one-sided error:
members always answer True, non-members answer True with small probability.
The challenge game hands an adversary oracle access (never the internal
representation), a query budget t, and the set S itself; the adversary wins
if it names a fresh false positive.

All randomness is derived from integer seeds through `split_seed`, so every
game, trial, and campaign is bit-reproducible.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Protocol, Sequence

from .hashing import split_seed

SEED_BITS = 64  # size at which per-representation hash seeds are accounted


class ProtocolViolation(Exception):
    """An adversary stepped outside the game contract."""


class QueryBudgetExceeded(ProtocolViolation):
    """The adversary issued more oracle queries than its budget t."""


class BuildError(Exception):
    """A filter could not be constructed for the given set and parameters."""


def _ceil_log2_inv(eps: float) -> int:
    # guard against float fuzz for eps that are exact powers of two
    return max(1, math.ceil(math.log2(1.0 / eps) - 1e-12))


@dataclass(frozen=True)
class FilterParams:
    """Instance parameters shared by every filter and game.

    n: set size; eps: target error rate; t: adaptive query budget;
    lambda_bits: secret-key size used by the shield; u_bits: universe width.
    """

    n: int
    eps: float
    t: int
    u_bits: int
    lambda_bits: int = 128

    def __post_init__(self) -> None:
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must lie in (0,1), got {self.eps}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.t < 0:
            raise ValueError("t must be >= 0")
        if self.u_bits < math.ceil(math.log2(self.n)) + 1:
            raise ValueError("u_bits too small: universe must exceed 2n")
        if self.lambda_bits < 1:
            raise ValueError("lambda_bits must be >= 1")

    @property
    def universe(self) -> int:
        return 1 << self.u_bits

    @property
    def log_inv_eps(self) -> int:
        """ceil(log2(1/eps)), the bit budget behind all derived sizes."""
        return _ceil_log2_inv(self.eps)

    @property
    def ell(self) -> int:
        """Fingerprint width: 4*ceil(log2(1/eps))."""
        return 4 * self.log_inv_eps

    @property
    def k_independence(self) -> int:
        """Per-function independence: ceil(2t / ceil(log2(1/eps))), >= 1."""
        return max(1, math.ceil(2 * self.t / self.log_inv_eps))

    def check_element(self, x: int) -> None:
        if not (0 <= x < self.universe):
            raise ValueError(f"element {x} outside universe [0, 2^{self.u_bits})")


def minimal_error(m: int, n: int) -> float:
    """Best error rate any m-bit filter on n elements can reach: 2^(-m/n).

    Companion of the classic memory lower bound m >= n*log2(1/eps).  Exact
    when n divides m (pure binary exponent), float otherwise.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 0:
        raise ValueError("m must be >= 0")
    if m % n == 0:
        return 2.0 ** (-(m // n))
    return 2.0 ** (-(m / n))


def sample_set(params: FilterParams, rng: random.Random) -> frozenset[int]:
    """Sample S of size n without replacement from the universe."""
    return frozenset(rng.sample(range(params.universe), params.n))


class Representation:
    """Base class for built filters.

    Concrete filters expose exact bit accounting (`bits`), a query method,
    and a bit-exact payload serialization.  `kind` distinguishes steady
    representations (queries never mutate state) from unsteady ones (queries
    may mutate; here only benign cursor state that never changes an answer).
    """

    kind = "steady"

    params: FilterParams

    @property
    def bits(self) -> int:
        raise NotImplementedError

    def query(self, x: int) -> bool:
        raise NotImplementedError

    def serialize(self) -> tuple[bytes, int]:
        """Payload bytes plus exact payload bit length (== self.bits)."""
        raise NotImplementedError

    def published_view(self, expose: str):
        """Adversary-visible state under a debug exposure policy.

        expose: "none" (default game), "structure" (hash/placement structure
        public, contents secret), or "full" (entire representation public).
        """
        return None

    def rep_space_enumerator(self):
        """Enumerator over candidate representations, when desk-scale small.

        Only meaningful under expose="structure" or "full"; None when the
        representation space is not enumerable.
        """
        return None


FilterFactory = Callable[[Iterable[int], FilterParams, int], Representation]


@dataclass
class GameTranscript:
    """Ordered record of one challenge game."""

    queries: list[tuple[int, bool]]
    challenge: int | None
    challenge_response: bool | None
    success: bool
    valid: bool
    seed_record: dict[str, int] = field(default_factory=dict)

    def recompute_success(self, S: frozenset[int]) -> bool:
        """Re-derive the success flag from the transcript contents alone."""
        if not self.valid or self.challenge is None:
            return False
        if self.challenge in S:
            return False
        if any(q == self.challenge for q, _ in self.queries):
            return False
        return bool(self.challenge_response)


class QueryOracle:
    """Budgeted oracle handle the adversary queries through."""

    def __init__(self, rep: Representation, budget: int):
        self._rep = rep
        self.budget = budget
        self.queries: list[tuple[int, bool]] = []
        self.queried: set[int] = set()

    def query(self, x: int) -> bool:
        if len(self.queries) >= self.budget:
            raise QueryBudgetExceeded(f"query budget t={self.budget} exhausted")
        y = self._rep.query(x)
        self.queries.append((x, y))
        self.queried.add(x)
        return y

    @property
    def queries_used(self) -> int:
        return len(self.queries)


@dataclass
class AdversaryContext:
    """Everything a strategy may see: oracle, the set, public parameters.

    Never the build seeds or key material.  `published` and `enumerator`
    are only populated under a debug exposure policy.
    """

    oracle: QueryOracle
    S: frozenset[int]
    params: FilterParams
    rng: random.Random
    published: object | None = None
    enumerator: object | None = None


class Strategy(Protocol):
    name: str

    def run(self, ctx: AdversaryContext) -> int: ...


def run_challenge(
    filter_factory: FilterFactory,
    strategy: Strategy,
    S: frozenset[int] | None,
    params: FilterParams,
    rng_seed: int,
    expose: str = "none",
) -> GameTranscript:
    """Play one challenge game and report the transcript.

    The filter is built on S (sampled fresh from a derived seed when None),
    the adversary runs with oracle access and up to t queries, and its
    output x* wins only if it is a fresh non-member answering True.  The
    verification query goes through the same (possibly mutating) query path
    and is issued exactly once.
    """
    set_seed = split_seed(rng_seed, 0)
    build_seed = split_seed(rng_seed, 1)
    adv_seed = split_seed(rng_seed, 2)
    if S is None:
        S = sample_set(params, random.Random(set_seed))
    S = frozenset(S)
    if len(S) != params.n:
        raise ValueError(f"|S|={len(S)} but params.n={params.n}")

    rep = filter_factory(S, params, build_seed)
    oracle = QueryOracle(rep, params.t)
    ctx = AdversaryContext(
        oracle=oracle,
        S=S,
        params=params,
        rng=random.Random(adv_seed),
        published=rep.published_view(expose) if expose != "none" else None,
        enumerator=rep.rep_space_enumerator() if expose != "none" else None,
    )
    seeds = {"master": rng_seed, "set": set_seed, "build": build_seed, "adversary": adv_seed}

    try:
        challenge = strategy.run(ctx)
    except QueryBudgetExceeded:
        return GameTranscript(
            queries=oracle.queries, challenge=None, challenge_response=None,
            success=False, valid=False, seed_record=seeds,
        )

    params.check_element(challenge)
    response = rep.query(challenge)  # post-transcript verification, once
    success = (
        challenge not in S
        and challenge not in oracle.queried
        and response
    )
    return GameTranscript(
        queries=oracle.queries, challenge=challenge, challenge_response=response,
        success=success, valid=True, seed_record=seeds,
    )


def normal_ci_half_width(rate: float, trials: int, z: float = 1.96) -> float:
    """95% normal-approximation confidence half-width for a rate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    return z * math.sqrt(rate * (1.0 - rate) / trials)


def estimate_success_rate(
    filter_factory: FilterFactory,
    strategy: Strategy,
    params: FilterParams,
    trials: int,
    master_seed: int,
    S: frozenset[int] | None = None,
    expose: str = "none",
) -> tuple[float, float]:
    """Monte-Carlo estimate of the challenge-game success rate.

    Trial i runs with seed split_seed(master_seed, i); a fresh S is sampled
    per trial unless one is pinned.  Returns (rate, 95% CI half-width).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    wins = 0
    for i in range(trials):
        tr = run_challenge(filter_factory, strategy, S, params,
                           split_seed(master_seed, i), expose=expose)
        wins += 1 if tr.success else 0
    rate = wins / trials
    return rate, normal_ci_half_width(rate, trials)


class ExactSetRep(Representation):
    """Trivial baseline that stores S verbatim: zero false positives."""

    kind = "steady"

    def __init__(self, S: frozenset[int], params: FilterParams):
        self.params = params
        self._members = frozenset(S)
        self._sorted: Sequence[int] = tuple(sorted(self._members))

    @property
    def bits(self) -> int:
        return self.params.n * self.params.u_bits

    def query(self, x: int) -> bool:
        return x in self._members

    def serialize(self) -> tuple[bytes, int]:
        from .bitio import BitWriter

        w = BitWriter()
        for x in self._sorted:
            w.write(x, self.params.u_bits)
        return w.getvalue(), w.bit_length

    def published_view(self, expose: str):
        if expose == "full":
            return self
        return None

    def rep_space_enumerator(self):
        # No secret randomness: the set itself is the only candidate.
        return ExactSetRepSpace(self)


class ExactSetRepSpace:
    """Degenerate representation space for the exact-set filter."""

    def __init__(self, rep: ExactSetRep):
        self._rep = rep

    @property
    def memory_bits(self) -> int:
        return self._rep.bits

    def rep_ids(self) -> range:
        return range(1)

    def model_query(self, rep_id: int, x: int) -> bool:
        return self._rep.query(x)


def build_exact_set(S: Iterable[int], params: FilterParams, rng_seed: int) -> ExactSetRep:
    members = frozenset(S)
    if len(members) != params.n:
        raise BuildError("duplicate elements or wrong set size")
    return ExactSetRep(members, params)
