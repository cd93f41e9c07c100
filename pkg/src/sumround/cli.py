"""Command line front end.

Every subcommand reads one instance (CSV or JSON array, from a file or
``-`` for stdin) and writes a JSON report to stdout. Exit status is 0 on
success, 2 on invalid input and 3 when the requested target is infeasible.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from . import applications, core, methods, oracle
from .errors import InfeasibleTarget, RoundingError, TooManyComponents

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3


class InputError(RoundingError):
    pass


def parse_instance(text: str) -> list:
    """Entries of a CSV or JSON instance.

    CSV tokens and JSON strings come back as strings (exact decimal path),
    JSON numbers as ``int``/``float``.
    """
    text = text.strip()
    if not text:
        raise InputError("empty input")
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, list):
            raise InputError("JSON input must be an array")
        entries = data
    else:
        entries = [tok.strip() for line in text.splitlines() for tok in line.split(",")]
        entries = [tok for tok in entries if tok]
    if not entries:
        raise InputError("no values in input")
    for e in entries:
        if isinstance(e, bool) or not isinstance(e, (str, int, float)):
            raise InputError(f"unsupported entry {e!r}")
        if isinstance(e, str):
            applications.parse_decimal(e)
        elif not math.isfinite(e) or e < 0:
            raise InputError(f"entries must be finite and non-negative, got {e!r}")
    return entries


def _as_floats(entries: Sequence) -> list[float]:
    return [float(applications.parse_decimal(e)) if isinstance(e, str) else float(e) for e in entries]


def _read(path: str) -> list:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_instance(text)


def _encode(obj: Any) -> str:
    """Compact JSON with floats at 17 significant digits and keys in
    insertion order."""
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray, core.IntegerAllocation)):
        return "[" + ", ".join(_encode(v) for v in list(obj)) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _table(rows: list[tuple], header: tuple) -> str:
    cells = [tuple(str(c) for c in header)] + [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def cmd_round(args) -> tuple[dict, str]:
    x = _as_floats(_read(args.input))
    if args.target is None:
        problem = core.snap_and_validate(x, args.tolerance)
        dec = core.decompose(problem)
        target = problem.target
    else:
        dec = core.decompose_values(x, args.tolerance)
        target = args.target
    allocation = core.round_to_target(dec.values, target, args.tolerance)
    short = core.shortfall(dec, target)
    rel = core.error_report(dec.values, allocation, args.q)
    report = {
        "allocation": allocation.tolist(),
        "target": target,
        "shortfall": short,
        "errors": {
            "l1": core.lq_error(dec.values, allocation, 1),
            "l2": core.lq_error(dec.values, allocation, 2),
            "lq": rel.lq_error,
            "relative_sum": rel.relative_sum,
            "relative_product": rel.relative_product,
        },
        "order": core.oric_order(dec).tolist(),
    }
    rows = [(i, float(v), int(a)) for i, (v, a) in enumerate(zip(dec.values, allocation))]
    text = _table(rows, ("index", "value", "rounded"))
    text += f"\n\ntarget {target}, shortfall {short}, L{args.q:g} error {rel.lq_error:.6g}"
    return report, text


def cmd_decimal(args) -> tuple[dict, str]:
    entries = _read(args.input)
    result = applications.decimal_round(entries, args.precision, args.q, args.tolerance)
    strings = result.to_strings()
    report = {
        "values": strings,
        "precision": args.precision,
        "sum": applications._format_scaled(int(result.scaled.sum()), args.precision),
    }
    rows = [(e, s) for e, s in zip(entries, strings)]
    return report, _table(rows, ("input", "rounded")) + f"\n\nsum {report['sum']}"


def cmd_apportion(args) -> tuple[dict, str]:
    votes = _as_floats(_read(args.input))
    problem = applications.ApportionmentProblem(votes, args.seats)
    quotas = problem.quotas()
    seats = applications.apportion(problem)
    report = {
        "seats": args.seats,
        "quotas": quotas.tolist(),
        "remainders": (quotas - np.floor(quotas)).tolist(),
        "allocation": seats.tolist(),
    }
    rows = [(i, v, f"{q:.6f}", s) for i, (v, q, s) in enumerate(zip(votes, quotas, seats))]
    return report, _table(rows, ("party", "votes", "quota", "seats"))


def _bias_dict(r: methods.BiasReport) -> dict:
    return {
        "exact_mean": r.exact_mean.tolist(),
        "optimal": r.optimal.tolist(),
        "bias_signs": r.bias_signs,
        "empirical_mean": r.empirical_mean.tolist(),
        "feasibility_rate": r.feasibility_rate,
        "optimality_rate": r.optimality_rate,
        "trials": r.trials,
        "seed": r.seed,
    }


def cmd_compare(args) -> tuple[dict, str]:
    problem = core.snap_and_validate(_as_floats(_read(args.input)), args.tolerance)
    dec = core.decompose(problem)
    optimal = core.oric_round(problem)
    frac = methods.fractional_round(problem, args.threshold)
    try:
        exact = methods.exact_distribution(problem, optimal)
        exact_report = {
            "feasibility_probability": exact.feasibility_probability,
            "optimality_probability": exact.optimality_probability,
            "conditional_non_optimality": exact.conditional_non_optimality,
            "wrong_roundup_probability": exact.wrong_roundup_probability,
            "expected_wrong_roundups": exact.expected_wrong_roundups,
        }
    except TooManyComponents:
        exact_report = None
    mc = methods.monte_carlo_report(problem, args.trials, args.seed)
    report = {
        "optimal": optimal.tolist(),
        "target": problem.target,
        "shortfall": core.shortfall(dec, problem.target),
        "fractional": {
            "threshold": args.threshold,
            "allocation": frac.allocation.tolist(),
            "sum_deviation": frac.sum_deviation,
            "below_count": frac.below_count,
        },
        "feasible_threshold": methods.feasible_threshold(problem),
        "exact": exact_report,
        "monte_carlo": _bias_dict(mc),
    }
    rows = [
        (i, float(v), int(o), int(f), f"{m:.4f}", s)
        for i, (v, o, f, m, s) in enumerate(
            zip(dec.values, optimal, frac.allocation, mc.empirical_mean, mc.bias_signs)
        )
    ]
    text = _table(rows, ("index", "value", "optimal", "fractional", "mc mean", "bias"))
    text += (
        f"\n\nfractional sum deviation {frac.sum_deviation}, "
        f"feasible threshold {report['feasible_threshold']}, "
        f"MC feasibility {mc.feasibility_rate:.4f}, optimality {mc.optimality_rate:.4f}"
    )
    return report, text


def cmd_oracle(args) -> tuple[dict, str]:
    x = _as_floats(_read(args.input))
    target = args.target
    if target is None:
        target = core.snap_and_validate(x, args.tolerance).target
    result = oracle.brute_force_optima(x, target, args.q, args.tolerance)
    report = {
        "q": args.q,
        "target": target,
        "min_value": result.min_value,
        "argmins": [m.tolist() for m in result.argmins],
        "evaluated": result.evaluated,
    }
    rows = [(i, m.tolist()) for i, m in enumerate(result.argmins)]
    text = _table(rows, ("#", "argmin"))
    text += f"\n\nminimum L{args.q:g} error {result.min_value:.6g} over {result.evaluated} points"
    return report, text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sumround", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="CSV or JSON file, or - for stdin")
        p.add_argument("--pretty", action="store_true", help="print a table instead of JSON")
        p.add_argument("--tolerance", type=float, default=core.DEFAULT_SNAP_TOLERANCE)
        p.set_defaults(func=func)
        return p

    p = add("round", cmd_round, "optimal sum-preserving rounding")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--target", type=int)

    p = add("decimal", cmd_decimal, "round to k decimals keeping the total")
    p.add_argument("--precision", type=int, required=True)
    p.add_argument("--q", type=float, default=2.0)

    p = add("apportion", cmd_apportion, "largest remainder seat allocation")
    p.add_argument("--seats", type=int, required=True)

    p = add("compare", cmd_compare, "fractional and randomized rounding against the optimum")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threshold", type=float, default=0.5)

    p = add("oracle", cmd_oracle, "exhaustive search over the floor/ceil box")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--target", type=int)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, text = args.func(args)
    except InfeasibleTarget as exc:
        print(f"sumround: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (RoundingError, ValueError, TypeError) as exc:
        print(f"sumround: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(text if args.pretty else _encode(report))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
