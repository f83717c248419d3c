"""Command-line surface: every capability with machine-readable output.

JSON goes to standard output; `--format csv` is available for the tabular
simulate report.  Exact rationals are serialized as "num/den".  Exit status is
0 on success, 1 on validation errors, 2 when a verification suite fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Sequence

from . import closedform, enumeration, montecarlo, verify
from .graphs import CircuitMultigraph, DoubleCircuitMultigraph, parse_route
from .weights import AffineAlpha, MomentSequence, preset_alpha, preset_moments


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to status 2
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(ValueError):
    pass


def _frac(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _affine(x: AffineAlpha) -> dict:
    return {"c0": _frac(x.c0), "c1": _frac(x.c1)}


def _resolve_alpha(args) -> Fraction | None:
    if getattr(args, "alpha", None) is not None:
        return Fraction(args.alpha)
    if getattr(args, "dist", None) is not None:
        return preset_alpha(args.dist)
    return None


def _resolve_moments(args, order: int) -> MomentSequence:
    if getattr(args, "moments", None) is not None:
        moments = MomentSequence.parse(args.moments)
        if moments.order < order:
            raise ValueError(
                f"moment list covers order {moments.order}, need {order}"
            )
        return moments
    if getattr(args, "dist", None) is not None:
        return preset_moments(args.dist, max(4, order))
    raise ValueError("provide --dist or --moments")


def _emit(payload: dict, args) -> None:
    if not args.no_timestamp:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat()
    print(json.dumps(payload))


def _cmd_mean_closed(args) -> int:
    value, terms = closedform.theorem1_mean(args.l, args.p, args.n)
    alpha = _resolve_alpha(args)
    payload = {
        "op": "mean-closed",
        "l": args.l,
        "p": args.p,
        "n": args.n,
        "coeff": _affine(value),
        "terms": [
            {
                "b": t.b,
                "tree_part": _frac(t.tree_part),
                "ring_part": _affine(t.ring_part),
                "error_order": t.error_order,
            }
            for t in terms
        ],
    }
    if alpha is not None:
        payload["alpha"] = _frac(alpha)
        payload["value"] = _frac(value.evaluate(alpha))
    _emit(payload, args)
    return 0


def _cmd_mean_oracle(args) -> int:
    moments = _resolve_moments(args, 2 * args.l)
    result = enumeration.exact_trace_moment(
        args.l, args.p, args.n, moments,
        allow_large=args.allow_large, workers=args.workers,
    )
    payload = {
        "op": "mean-oracle",
        "l": args.l,
        "p": args.p,
        "n": args.n,
        "value": _frac(result.value),
        "terms": [
            {
                "r": t.r,
                "b": t.b,
                "multiplicity": _frac(t.multiplicity),
                "inner_sum": _frac(t.inner_sum),
            }
            for t in result.terms
        ],
    }
    _emit(payload, args)
    return 0


def _cmd_cov_closed(args) -> int:
    value, terms = closedform.theorem2_cov(args.l1, args.l2, args.p, args.n)
    alpha = _resolve_alpha(args)
    payload = {
        "op": "cov-closed",
        "l1": args.l1,
        "l2": args.l2,
        "p": args.p,
        "n": args.n,
        "coeff": _affine(value),
        "terms": [
            {"b": t.b, "coeff": _affine(t.coeff), "error_order": t.error_order}
            for t in terms
        ],
    }
    if alpha is not None:
        payload["alpha"] = _frac(alpha)
        payload["value"] = _frac(value.evaluate(alpha))
    _emit(payload, args)
    return 0


def _cmd_cov_oracle(args) -> int:
    moments = _resolve_moments(args, 2 * (args.l1 + args.l2))
    value = enumeration.exact_trace_covariance(
        args.l1, args.l2, args.p, args.n, moments, allow_large=args.allow_large
    )
    payload = {
        "op": "cov-oracle",
        "l1": args.l1,
        "l2": args.l2,
        "p": args.p,
        "n": args.n,
        "value": _frac(value),
    }
    _emit(payload, args)
    return 0


def _cmd_census(args) -> int:
    if args.l is not None:
        if args.l1 is not None or args.l2 is not None:
            raise ValueError("--l and --l1/--l2 are mutually exclusive")
        buckets = enumeration.census_by_seed(args.l, args.b, allow_large=args.allow_large)
        rows = [
            {"seed_class": cls.kind, "ring_length": cls.ring_length, "count": count}
            for cls, count in buckets.items()
        ]
        rows.sort(key=lambda r: (r["seed_class"], r["ring_length"] or 0))
        payload = {"op": "census", "l": args.l, "b": args.b, "buckets": rows}
    elif args.l1 is not None and args.l2 is not None:
        buckets = enumeration.census_double(
            args.l1, args.l2, args.b, allow_large=args.allow_large
        )
        rows = [
            {
                "seed_class": cls.kind,
                "ring_length": cls.ring_length,
                "split": list(split),
                "count": count,
            }
            for (cls, split), count in buckets.items()
        ]
        rows.sort(key=lambda r: (r["seed_class"], r["ring_length"] or 0, r["split"]))
        payload = {
            "op": "census",
            "l1": args.l1,
            "l2": args.l2,
            "b": args.b,
            "buckets": rows,
        }
    else:
        raise ValueError("provide --l for a single census or both --l1 and --l2")
    _emit(payload, args)
    return 0


def _cmd_simulate(args) -> int:
    config = montecarlo.SimulationConfig(
        p=args.p,
        n=args.n,
        l_list=tuple(int(part) for part in args.l.split(",")),
        replications=args.reps,
        distribution=args.dist,
        rng_seed=args.seed,
    )
    reference = None
    if not args.no_reference:
        reference = montecarlo.oracle_references(config, allow_large=args.allow_large)
    report = montecarlo.simulate(config, reference)
    if args.format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        writer.writerows(report.csv_rows())
        sys.stdout.write(buffer.getvalue())
    else:
        _emit({"op": "simulate", **report.to_dict()}, args)
    return 0


def _cmd_verify(args) -> int:
    report = verify.run_suite(args.suite, args.max_l, allow_large=args.allow_large)
    _emit({"op": "verify", **report}, args)
    return 2 if report["failures"] else 0


def _cmd_mp(args) -> int:
    value = closedform.mp_moment(args.l, Fraction(args.y))
    _emit({"op": "mp", "l": args.l, "y": _frac(Fraction(args.y)), "value": _frac(value)}, args)
    return 0


def _cmd_bs_check(args) -> int:
    mean_report = verify.run_suite("bs-mean", args.max_l)
    cov_report = verify.run_suite("bs-cov", args.max_l)
    payload = {
        "op": "bs-check",
        "mean": {"cases": mean_report["cases"], "failures": mean_report["failures"]},
        "cov": {"cases": cov_report["cases"], "failures": cov_report["failures"]},
    }
    _emit(payload, args)
    return 2 if mean_report["failures"] or cov_report["failures"] else 0


def _cmd_graph(args) -> int:
    route = parse_route(args.route)
    if args.second is not None:
        double = DoubleCircuitMultigraph(route, parse_route(args.second))
        payload = {"op": "graph", **double.record()}
    else:
        payload = {"op": "graph", **CircuitMultigraph(route).record()}
    _emit(payload, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracemoments", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(handler=handler)
        p.add_argument("--no-timestamp", action="store_true",
                       help="omit the timestamp field for byte-identical reruns")
        return p

    p = add("mean-closed", _cmd_mean_closed, help="mean expansion by the closed form")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", help="fourth moment as a rational, e.g. 3 or 9/5")
    p.add_argument("--dist", help="distribution tag providing the fourth moment")

    p = add("mean-oracle", _cmd_mean_oracle, help="exact mean by enumeration")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", help="preset moment sequence")
    p.add_argument("--moments", help="explicit comma-separated rational moments")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--workers", type=int, default=None)

    p = add("cov-closed", _cmd_cov_closed, help="covariance expansion by the closed form")
    p.add_argument("--l1", type=int, required=True)
    p.add_argument("--l2", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha")
    p.add_argument("--dist")

    p = add("cov-oracle", _cmd_cov_oracle, help="exact covariance by enumeration")
    p.add_argument("--l1", type=int, required=True)
    p.add_argument("--l2", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist")
    p.add_argument("--moments")
    p.add_argument("--allow-large", action="store_true")

    p = add("census", _cmd_census, help="seed-class censuses by enumeration")
    p.add_argument("--l", type=int)
    p.add_argument("--l1", type=int)
    p.add_argument("--l2", type=int)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--allow-large", action="store_true")

    p = add("simulate", _cmd_simulate, help="Monte Carlo check against exact values")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--l", required=True, help="comma-separated trace powers")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--no-reference", action="store_true",
                   help="skip the exact reference computation")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = add("verify", _cmd_verify, help="run a named verification suite")
    p.add_argument("--suite", required=True, choices=sorted(verify.SUITES))
    p.add_argument("--max-l", type=int, default=None)
    p.add_argument("--allow-large", action="store_true")

    p = add("mp", _cmd_mp, help="Marchenko-Pastur moment")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--y", required=True, help="ratio as a rational, e.g. 1/2")

    p = add("bs-check", _cmd_bs_check, help="comparison identities for the classical limits")
    p.add_argument("--max-l", type=int, default=20)

    p = add("graph", _cmd_graph, help="inspect the graph of a route")
    p.add_argument("--route", required=True, help="comma-separated labels, e.g. 2,4,4,3,1,3")
    p.add_argument("--second", help="second route, making it a double graph")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
