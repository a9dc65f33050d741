"""Campaign machinery: named filters and adversaries, Monte-Carlo runs,
memory audits, and the flat result records the CLI writes out.

Filters and adversaries are addressed by string identifiers so that a
campaign is fully described by a picklable `GameConfig`; trial i of a
campaign always runs on seed split_seed(master, i), which makes results
independent of execution order and of the worker count.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Iterable

from . import adversaries, bloom, core, cuckoo, shield
from .core import FilterParams, GameTranscript, Representation
from .hashing import split_seed

FILTER_KINDS = ("baseline_bloom", "exact_set", "cuckoo_resilient", "cuckoo_random_query")

ADVERSARY_KINDS = ("random_probe", "mutate_positives", "seed_exposed", "consistency_search")


@dataclass(frozen=True)
class GameConfig:
    """One (filter, adversary, parameter point) to be played repeatedly."""

    filter_kind: str
    adversary_kind: str
    params: FilterParams
    shielded: bool = False
    bloom_bits: int | None = None  # explicit m for the Bloom baseline
    expose: str = "none"
    adversary_opts: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.filter_kind not in FILTER_KINDS:
            raise ValueError(f"unknown filter kind {self.filter_kind!r}")
        if self.adversary_kind not in ADVERSARY_KINDS:
            raise ValueError(f"unknown adversary kind {self.adversary_kind!r}")
        if self.expose not in ("none", "structure", "full"):
            raise ValueError(f"unknown exposure policy {self.expose!r}")


def build_filter(cfg: GameConfig, S: Iterable[int], params: FilterParams,
                 rng_seed: int) -> Representation:
    kind = cfg.filter_kind

    def inner(S_, params_, seed_):
        if kind == "baseline_bloom":
            return bloom.build_bloom(S_, params_, seed_, m=cfg.bloom_bits)
        if kind == "exact_set":
            return core.build_exact_set(S_, params_, seed_)
        if kind == "cuckoo_resilient":
            return cuckoo.build_cuckoo(S_, params_, seed_)
        if kind == "cuckoo_random_query":
            return cuckoo.build_cuckoo_random_query(S_, params_, seed_)
        raise ValueError(kind)

    if cfg.shielded:
        return shield.build_shield(inner, S, params, rng_seed)
    return inner(S, params, rng_seed)


def make_adversary(cfg: GameConfig) -> core.Strategy:
    kind = cfg.adversary_kind
    opts = cfg.adversary_opts
    if kind == "random_probe":
        return adversaries.RandomProbeAttack()
    if kind == "mutate_positives":
        return adversaries.MutatePositivesAttack()
    if kind == "seed_exposed":
        return adversaries.SeedExposedAttack(**opts)
    if kind == "consistency_search":
        return adversaries.ConsistencySearchAttack(**opts)
    raise ValueError(kind)


def play_game(cfg: GameConfig, trial_seed: int,
              S: frozenset[int] | None = None) -> GameTranscript:
    factory = lambda S_, p_, seed_: build_filter(cfg, S_, p_, seed_)
    return core.run_challenge(factory, make_adversary(cfg), S, cfg.params,
                              trial_seed, expose=cfg.expose)


def _trial_wins(args: tuple[GameConfig, int, int, int]) -> int:
    cfg, master_seed, start, count = args
    wins = 0
    for i in range(start, start + count):
        if play_game(cfg, split_seed(master_seed, i)).success:
            wins += 1
    return wins


@dataclass
class CampaignResult:
    cfg: GameConfig
    trials: int
    wins: int
    success_rate: float
    ci_half_width: float
    fp_rate_baseline: float
    memory_bits: int
    mean_bit_comparisons: float | None
    wall_time_ms: int
    master_seed: int


def measure_fp_rate(cfg: GameConfig, master_seed: int,
                    samples: int = 10_000) -> tuple[float, int, float | None]:
    """Non-adaptive calibration on one build: FP rate on uniform non-members,
    the audited memory size, and mean compared bit-pairs where applicable."""
    rng = random.Random(split_seed(master_seed, 0, 1))
    S = core.sample_set(cfg.params, rng)
    rep = build_filter(cfg, S, cfg.params, split_seed(master_seed, 0, 2))
    u = cfg.params.universe
    hits = 0
    before = getattr(rep, "bit_comparisons", 0)
    for _ in range(samples):
        x = rng.randrange(u)
        while x in S:
            x = rng.randrange(u)
        if rep.query(x):
            hits += 1
    mean_cmp = None
    if isinstance(rep, cuckoo.CuckooFilterRep):
        mean_cmp = (rep.bit_comparisons - before) / samples
    return hits / samples, rep.bits, mean_cmp


def run_campaign(cfg: GameConfig, trials: int, master_seed: int,
                 parallel: int = 1, fp_samples: int = 10_000) -> CampaignResult:
    """Run the Monte-Carlo campaign for one config and aggregate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t0 = time.perf_counter()
    if parallel > 1:
        chunk = max(1, trials // (parallel * 8))
        jobs = [(cfg, master_seed, s, min(chunk, trials - s))
                for s in range(0, trials, chunk)]
        with Pool(parallel) as pool:
            wins = sum(pool.map(_trial_wins, jobs))
    else:
        wins = _trial_wins((cfg, master_seed, 0, trials))
    rate = wins / trials
    fp_rate, mem_bits, mean_cmp = measure_fp_rate(cfg, master_seed, fp_samples)
    wall_ms = int((time.perf_counter() - t0) * 1000)
    return CampaignResult(
        cfg=cfg, trials=trials, wins=wins, success_rate=rate,
        ci_half_width=core.normal_ci_half_width(rate, trials),
        fp_rate_baseline=fp_rate, memory_bits=mem_bits,
        mean_bit_comparisons=mean_cmp, wall_time_ms=wall_ms,
        master_seed=master_seed,
    )


RESULT_COLUMNS = (
    "filter", "adversary", "n", "eps", "t", "trials", "success_rate",
    "ci_half_width", "fp_rate_baseline", "memory_bits",
    "mean_bit_comparisons", "wall_time_ms", "master_seed",
)


def result_record(res: CampaignResult) -> dict:
    cfg = res.cfg
    name = cfg.filter_kind + ("+shield" if cfg.shielded else "")
    return {
        "filter": name,
        "adversary": cfg.adversary_kind,
        "n": cfg.params.n,
        "eps": repr(cfg.params.eps),
        "t": cfg.params.t,
        "trials": res.trials,
        "success_rate": f"{res.success_rate:.6f}",
        "ci_half_width": f"{res.ci_half_width:.6f}",
        "fp_rate_baseline": f"{res.fp_rate_baseline:.6f}",
        "memory_bits": res.memory_bits,
        "mean_bit_comparisons":
            "" if res.mean_bit_comparisons is None else f"{res.mean_bit_comparisons:.4f}",
        "wall_time_ms": res.wall_time_ms,
        "master_seed": res.master_seed,
    }


def audit_memory(rep: Representation) -> dict:
    """Cross-check the bits formula against the serialized payload size."""
    data, bit_length = rep.serialize()
    return {
        "declared_bits": rep.bits,
        "serialized_bits": bit_length,
        "serialized_bytes": len(data),
        "match": bit_length == rep.bits,
    }
