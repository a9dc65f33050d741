"""Command-line harness.

Subcommands:
  experiment    run a configured Monte-Carlo campaign, write CSV or JSON
  selftest      run the acceptance criteria, write a report
  audit-memory  build one filter and print its exact bit accounting

Exit codes: 0 success, 1 criterion/experiment failure, 2 config error.
The FILTERLAB_SEED environment variable overrides the default master seed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import acceptance, experiments
from .core import FilterParams, sample_set
from .experiments import GameConfig, RESULT_COLUMNS

DEFAULT_SEED = acceptance.DEFAULT_SEED


class ConfigError(Exception):
    """Invalid experiment config; message carries file:line context."""


def _parse_scalar(raw: str):
    low = raw.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    try:
        return int(low, 0)
    except ValueError:
        pass
    try:
        return float(low)
    except ValueError:
        pass
    # powers of two are common for eps; accept the 2^-k shorthand
    if low.startswith("2^"):
        try:
            return 2.0 ** float(low[2:])
        except ValueError:
            pass
    return low


def parse_config(path: str) -> dict[str, dict[str, tuple[object, int]]]:
    """Parse the key/typed-value section format, keeping line numbers.

    Sections are [name] headers; entries are `key = value` lines; `#` and
    `;` start comments.  Values parse as bool, int, float, 2^k shorthand,
    or bare string.
    """
    sections: dict[str, dict[str, tuple[object, int]]] = {}
    current: str | None = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if current is None:
            raise ConfigError(f"{path}:{lineno}: entry outside any [section]")
        key, _, val = line.partition("=")
        sections[current][key.strip()] = (_parse_scalar(val), lineno)
    return sections


def _require(section: dict, name: str, key: str, path: str, kind=None):
    if key not in section:
        raise ConfigError(f"{path}: missing required key '{key}' in [{name}]")
    value, lineno = section[key]
    if kind is int and isinstance(value, bool):
        raise ConfigError(f"{path}:{lineno}: '{key}' must be an integer")
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"{path}:{lineno}: '{key}' must be {kind.__name__}")
    return value, lineno


def config_to_campaign(path: str) -> tuple[GameConfig, int, int, int]:
    """Validate a config file into (game config, trials, seed, fp_samples)."""
    sections = parse_config(path)
    for required in ("experiment", "filter", "adversary"):
        if required not in sections:
            raise ConfigError(f"{path}: missing required section [{required}]")
    exp, flt, adv = sections["experiment"], sections["filter"], sections["adversary"]

    trials, trials_line = _require(exp, "experiment", "trials", path, int)
    if trials < 1:
        raise ConfigError(f"{path}:{trials_line}: trials must be >= 1")
    seed = exp.get("seed", (int(os.environ.get("FILTERLAB_SEED", DEFAULT_SEED)), 0))[0]
    if not isinstance(seed, int):
        raise ConfigError(f"{path}: seed must be an integer")
    fp_samples = exp.get("fp_samples", (10_000, 0))[0]

    kind, kind_line = _require(flt, "filter", "kind", path, str)
    n, _ = _require(flt, "filter", "n", path, int)
    eps_val, eps_line = _require(flt, "filter", "eps", path)
    if not isinstance(eps_val, (int, float)) or not (0 < float(eps_val) < 1):
        raise ConfigError(f"{path}:{eps_line}: eps must be a probability in (0,1)")
    t, t_line = _require(flt, "filter", "t", path, int)
    if t < 0:
        raise ConfigError(f"{path}:{t_line}: t must be >= 0")
    u_bits, _ = _require(flt, "filter", "u_bits", path, int)
    lambda_bits = flt.get("lambda_bits", (128, 0))[0]
    try:
        params = FilterParams(n=n, eps=float(eps_val), t=t, u_bits=u_bits,
                              lambda_bits=lambda_bits)
    except ValueError as e:
        raise ConfigError(f"{path}: [filter] {e}") from None

    shielded = bool(flt.get("shield", (False, 0))[0])
    bloom_bits = flt.get("m", (None, 0))[0]
    adv_kind, adv_line = _require(adv, "adversary", "kind", path, str)
    expose = str(adv.get("expose", ("none", 0))[0])
    adv_opts = {k: v for k, (v, _) in adv.items() if k not in ("kind", "expose")}
    try:
        cfg = GameConfig(
            filter_kind=kind, adversary_kind=adv_kind, params=params,
            shielded=shielded, bloom_bits=bloom_bits, expose=expose,
            adversary_opts=adv_opts,
        )
    except ValueError as e:
        line = adv_line if "adversary" in str(e) else kind_line
        raise ConfigError(f"{path}:{line}: {e}") from None
    return cfg, trials, seed, fp_samples


def write_results(records: list[dict], out_path: str, fmt: str) -> None:
    if fmt == "json":
        payload = {"schema_version": 1, "columns": list(RESULT_COLUMNS),
                   "records": records}
        Path(out_path).write_text(json.dumps(payload, indent=2) + "\n")
        return
    lines = [",".join(RESULT_COLUMNS)]
    for rec in records:
        lines.append(",".join(str(rec[c]) for c in RESULT_COLUMNS))
    Path(out_path).write_text("\n".join(lines) + "\n")


def cmd_experiment(args: argparse.Namespace) -> int:
    try:
        cfg, trials, seed, fp_samples = config_to_campaign(args.config)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.seed is not None:
        seed = args.seed
    res = experiments.run_campaign(cfg, trials, seed, parallel=args.parallel,
                                   fp_samples=fp_samples)
    rec = experiments.result_record(res)
    write_results([rec], args.out, args.format)
    print(f"wrote 1 record to {args.out} "
          f"(success_rate={res.success_rate:.4f} +- {res.ci_half_width:.4f})")
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    numbers = None
    if args.criteria:
        numbers = sorted(int(x) for x in args.criteria.split(","))
    seed = args.seed if args.seed is not None else int(
        os.environ.get("FILTERLAB_SEED", DEFAULT_SEED))
    results = []
    for n in numbers or sorted(acceptance.CRITERIA):
        res = acceptance.run_criterion(n, seed)
        print(res.line(), flush=True)
        results.append(res)
    report = "\n".join(r.line() for r in results) + "\n"
    if args.out:
        Path(args.out).write_text(report)
        print(f"report written to {args.out}")
    failed = [r.number for r in results if not r.passed]
    if failed:
        print(f"FAILED criteria: {failed}")
        return 1
    print("all criteria passed")
    return 0


def cmd_audit_memory(args: argparse.Namespace) -> int:
    params = FilterParams(n=args.n, eps=args.eps, t=args.t, u_bits=args.u_bits,
                          lambda_bits=args.lambda_bits)
    cfg = GameConfig(filter_kind=args.filter, adversary_kind="random_probe",
                     params=params, shielded=args.shield)
    rng = random.Random(args.seed)
    S = sample_set(params, rng)
    rep = experiments.build_filter(cfg, S, params, rng.getrandbits(63))
    audit = experiments.audit_memory(rep)
    print(json.dumps({
        "filter": args.filter + ("+shield" if args.shield else ""),
        "params": {"n": params.n, "eps": params.eps, "t": params.t,
                   "u_bits": params.u_bits, "lambda_bits": params.lambda_bits},
        **audit,
    }, indent=2))
    return 0 if audit["match"] else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="filterlab",
        description="membership filters under adaptive adversaries: "
                    "experiments, self-tests, memory audits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("experiment", help="run a configured campaign")
    p_exp.add_argument("--config", required=True)
    p_exp.add_argument("--out", required=True)
    p_exp.add_argument("--format", choices=("csv", "json"), default="csv")
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--parallel", type=int, default=1)
    p_exp.set_defaults(fn=cmd_experiment)

    p_self = sub.add_parser("selftest", help="run the acceptance criteria")
    p_self.add_argument("--out", default=None)
    p_self.add_argument("--criteria", default=None,
                        help="comma-separated criterion numbers (default all)")
    p_self.add_argument("--seed", type=int, default=None)
    p_self.set_defaults(fn=cmd_selftest)

    p_audit = sub.add_parser("audit-memory", help="bit-exact memory accounting")
    p_audit.add_argument("--filter", required=True,
                         choices=experiments.FILTER_KINDS)
    p_audit.add_argument("--shield", action="store_true")
    p_audit.add_argument("--n", type=int, required=True)
    p_audit.add_argument("--eps", type=float, required=True)
    p_audit.add_argument("--t", type=int, required=True)
    p_audit.add_argument("--u-bits", dest="u_bits", type=int, required=True)
    p_audit.add_argument("--lambda-bits", dest="lambda_bits", type=int, default=128)
    p_audit.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_audit.set_defaults(fn=cmd_audit_memory)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
