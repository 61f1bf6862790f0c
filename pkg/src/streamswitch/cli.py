"""Command-line front end.

Subcommands::

    bounds            tabulate every bound over a grid of (N, q, memory)
    oracle            exact enumeration and per-lemma verdicts
    simulate          Monte Carlo acceptance estimates
    verify-functions  grid checks of the entropy-function properties

Output is CSV (header row, one line per result) or JSON
(``{"schema": 1, "command", "config", "results", "verdicts", "passed"}``).
Exit status is 0 iff every verification in the run passed, 1 on a failed
verification and 2 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import properties
from .bounds import bound_report
from .collision import analytic_accept_probability, build_collision_algorithm
from .montecarlo import estimate_accept, estimate_tv_advantage
from .oracle import DEFAULT_ENUMERATION_CAP, enumerate_distributions, verify_lemma1, verify_lemma2
from .streaming import (
    CapExceededError,
    ConstantAlgorithm,
    MemoryProfile,
    normalize_profile,
    parse_profile,
    random_algorithm,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _profile(n: int, q: int, memory: str) -> MemoryProfile:
    try:
        return parse_profile(memory, n, q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _widths(s) -> str:
    """Memory column text; constant profiles keep their compact form."""
    if len(s) > 1 and len(set(s)) == 1:
        return f"const:{s[0]}"
    return ",".join(map(str, s))


def _build_algorithm(kind: str, profile: MemoryProfile, seed: int):
    if kind == "collision":
        return build_collision_algorithm(profile)
    if kind == "constant":
        return ConstantAlgorithm(profile)
    return random_algorithm(profile, seed)


def cmd_bounds(args) -> tuple[list[dict], dict]:
    rows = []
    for n in args.n:
        for q in args.q:
            profile = _profile(n, q, args.memory)
            try:
                rows.append(bound_report(profile, args.epsilon).row())
            except (ValueError, ZeroDivisionError) as exc:
                raise UsageError(f"N={n} q={q}: {exc}") from None
    return rows, {}


def _oracle_row(alg, seed) -> tuple[dict, list]:
    result = enumerate_distributions(alg, cap=DEFAULT_ENUMERATION_CAP)
    l1 = verify_lemma1(result)
    l2 = verify_lemma2(result) + verify_lemma2(result, use_memory=True)
    row = {
        "algorithm": type(alg).__name__,
        "seed": seed,
        "n": result.n,
        "q": result.q,
        "memory": _widths(result.widths),
        "normalized_memory": _widths(normalize_profile(alg.profile).s),
        "kl_exact": result.kl_exact,
        "kl_exact_unit": "nats",
        "kl_bit": result.kl_bit,
        "tv_exact": result.tv_exact,
        "lemma1_rhs": l1.rhs,
        "lemma1_slack": l1.slack,
        "lemma1_passed": l1.passed,
    }
    for i, v in enumerate(result.mi_per_step, start=1):
        row[f"mi_step_{i}"] = v
    for i, v in enumerate(result.mi_state[1:], start=1):
        row[f"mi_state_{i}"] = v
    for v in l2:
        row[f"{v.name}_slack"] = v.slack
    row["lemma2_passed"] = all(v.passed for v in l2)
    return row, [l1, *l2]


def cmd_oracle(args) -> tuple[list[dict], dict]:
    n, q = args.n[0], args.q[0]
    profile = _profile(n, q, args.memory)
    rows, verdicts = [], []
    seeds = range(args.seed, args.seed + args.suite) if args.suite else [args.seed]
    try:
        for seed in seeds:
            alg = _build_algorithm("random" if args.suite else args.algorithm, profile, seed)
            row, vs = _oracle_row(alg, seed)
            rows.append(row)
            verdicts.extend(vs)
    except CapExceededError as exc:
        raise UsageError(f"{exc}; use 'simulate' for instances this large") from None
    passed = sum(r["lemma1_passed"] and r["lemma2_passed"] for r in rows)
    return rows, {"instances": len(rows), "passed": passed, "failed": len(rows) - passed,
                  "all_passed": all(v.passed for v in verdicts)}


def cmd_simulate(args) -> tuple[list[dict], dict]:
    n, q = args.n[0], args.q[0]
    if args.samples < 1 or args.workers < 1:
        raise UsageError("--samples and --workers must be at least 1")
    profile = _profile(n, q, args.memory)
    alg = _build_algorithm(args.algorithm, profile, args.seed)
    sources = ["P", "Q"] if args.source == "both" else [args.source]
    rows = []
    for source in sources:
        est = estimate_accept(alg, source, args.samples, args.seed, workers=args.workers)
        row = {
            "algorithm": args.algorithm,
            "source": source,
            "n": n,
            "q": q,
            "memory": _widths(profile.s),
            "value": est.value,
            "stderr": est.stderr,
            "samples": est.samples,
            "hits": est.hits,
            "seed": args.seed,
            "analytic": None,
            "z_score": None,
        }
        if args.algorithm == "collision":
            exact = 0.0 if source == "P" else analytic_accept_probability(n, alg.capacities)
            row["analytic"] = exact
            row["z_score"] = (est.value - exact) / est.stderr if est.stderr else 0.0
        rows.append(row)
    if args.tv:
        tv = estimate_tv_advantage(alg, args.samples, args.seed, workers=args.workers)
        rows.append({"algorithm": args.algorithm, "source": "TV", "n": n, "q": q,
                     "memory": _widths(profile.s), "value": tv.value,
                     "stderr": tv.stderr, "samples": tv.samples, "hits": None,
                     "seed": args.seed, "analytic": None, "z_score": None})
    ok = all(
        r["z_score"] is None or (abs(r["z_score"]) <= 5 if r["source"] == "Q" else r["hits"] == 0)
        for r in rows
    )
    return rows, {"all_passed": ok}


def cmd_verify_functions(args) -> tuple[list[dict], dict]:
    try:
        checks = properties.run_all(args.grid, args.stirling_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return [c.row() for c in checks], {"all_passed": all(c.passed for c in checks)}


COMMANDS = {
    "bounds": cmd_bounds,
    "oracle": cmd_oracle,
    "simulate": cmd_simulate,
    "verify-functions": cmd_verify_functions,
}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(command: str, config: dict, rows: list[dict], verdicts: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "schema": SCHEMA_VERSION,
            "command": command,
            "config": config,
            "results": rows,
            "verdicts": verdicts,
            "passed": verdicts.get("all_passed", True),
        }
        return json.dumps(doc, indent=2, allow_nan=False, default=_json_default) + "\n"
    buf = io.StringIO()
    fields: list[str] = []
    for row in rows:
        fields.extend(k for k in row if k not in fields)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(row.get(k)) for k in fields})
    return buf.getvalue()


def _json_default(value):
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="streamswitch", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, memory_default="const:1"):
        p.add_argument("--n", type=_int_list, default=[16], help="alphabet size(s), comma separated")
        p.add_argument("--q", type=_int_list, default=[4], help="stream length(s), comma separated")
        p.add_argument("--memory", default=memory_default, help="'const:<s>' or 's1,s2,...,sq'")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("bounds", help="tabulate bounds")
    common(p)
    p.add_argument("--epsilon", type=float, default=None, help="also evaluate the q <= N^(1-eps) bound")

    p = sub.add_parser("oracle", help="exact enumeration with lemma verdicts")
    common(p)
    p.add_argument("--algorithm", choices=("collision", "random", "constant"), default="collision")
    p.add_argument("--suite", type=int, default=0, help="run this many random algorithms (seeds from --seed)")

    p = sub.add_parser("simulate", help="Monte Carlo acceptance estimates")
    common(p)
    p.add_argument("--algorithm", choices=("collision", "random", "constant"), default="collision")
    p.add_argument("--source", choices=("P", "Q", "both"), default="both")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tv", action="store_true", help="also estimate the total-variation advantage")

    p = sub.add_parser("verify-functions", help="grid checks of f, phi, h2 and the Stirling sandwich")
    p.add_argument("--grid", type=int, default=properties.DEFAULT_GRID)
    p.add_argument("--stirling-max", type=int, default=1000)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k != "command"}
    try:
        rows, verdicts = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"streamswitch {args.command}: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(args.command, config, rows, verdicts, args.format))
    return 0 if verdicts.get("all_passed", True) else 1


if __name__ == "__main__":
    sys.exit(main())
