"""Command-line front end: ``renyi-lab {eval,sweep-alpha,limit,verify-suite,search}``.

Exit codes: 0 success, 1 a verification FAIL, 2 usage or parameter error,
3 domain error (input not positive definite, not a density, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import oracle
from .algebra import load_element, load_spec
from .divergence import (
    ALPHA_GUARD,
    FIVE_FAMILIES,
    PARAMETRIC,
    DivergenceKind,
    alpha_limit,
    canonical_family,
    d_value,
    q_value,
)
from .errors import (
    CrossCheckFailure,
    DomainError,
    InvalidInput,
    NumericalFailure,
    ParameterError,
    RenyiLabError,
)
from .report import WitnessReport
from .suites import DEFAULT_SPEC, SUITES, SuiteContext, run_suites
from .symmetry import StandardFormMap

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
Z_DEFAULT = 1.7


class UsageError(RenyiLabError):
    pass


def fmt(x) -> str:
    """17 significant digits, locale independent; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row[h]) for h in header])
    return buf.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _render(rows: list[dict], header: list[str], form: str) -> str:
    if form == "json":
        return json.dumps(rows, indent=1) + "\n"
    return _csv(header, rows)


# argument handling


def _kinds_from_args(kind: str, alpha, z) -> list[DivergenceKind]:
    if kind == "all":
        names = list(FIVE_FAMILIES)
    else:
        names = [canonical_family(k) for k in kind.split(",")]
    out = []
    for name in names:
        if name in PARAMETRIC and alpha is None:
            raise UsageError(f"--alpha is required for {name}")
        out.append(DivergenceKind(name, alpha if name in PARAMETRIC else None,
                                  z if name == "alpha_z" else None))
    return out


def _grid(args) -> list[float]:
    if args.alphas:
        grid = [float(x) for x in args.alphas.split(",") if x.strip()]
    elif args.start is not None and args.stop is not None and args.step:
        n = int(np.floor((args.stop - args.start) / args.step + 1e-9)) + 1
        grid = [round(args.start + k * args.step, 12) for k in range(max(n, 0))]
    else:
        grid = []
    skipped = [a for a in grid if abs(a - 1.0) < ALPHA_GUARD]
    grid = [a for a in grid if abs(a - 1.0) >= ALPHA_GUARD]
    if skipped:
        print("note: alpha=1 omitted from the grid; use `limit`", file=sys.stderr)
    if not grid:
        raise UsageError("the alpha grid is empty")
    return grid


def _load_pair(args):
    spec = load_spec(args.algebra)
    return spec, load_element(spec, args.a), load_element(spec, args.b)


def _row(kind: DivergenceKind, a, b) -> dict:
    return {
        "alpha": kind.alpha,
        "kind": kind.family,
        "z": kind.z,
        "d_value": d_value(kind, a, b),
        "q_value": q_value(kind, a, b) if kind.parametric else None,
        "theorem_applicable": kind.theorem_applicable,
    }


# commands


def cmd_eval(args) -> int:
    kinds = _kinds_from_args(args.kind, args.alpha, args.z)
    _, a, b = _load_pair(args)
    rows = [_row(k, a, b) for k in kinds]
    _emit(_render(rows, ["kind", "alpha", "z", "d_value", "q_value"], args.format), args.output)
    return EXIT_OK


def cmd_sweep(args) -> int:
    grid = _grid(args)
    for alpha in grid:
        _kinds_from_args(args.kind, alpha, args.z)
    _, a, b = _load_pair(args)
    rows = [_row(k, a, b) for alpha in grid for k in _kinds_from_args(args.kind, alpha, args.z)]
    header = ["alpha", "kind", "z", "d_value", "q_value", "theorem_applicable"]
    _emit(_render(rows, header, args.format), args.output)
    return EXIT_OK


def cmd_limit(args) -> int:
    schedule = [float(x) for x in args.schedule.split(",")]
    families = list(FIVE_FAMILIES) if args.family == "all" else [canonical_family(f) for f in args.family.split(",")]
    for f in families:
        if f not in PARAMETRIC:
            raise UsageError(f"{f} is not a parametric family")
    _, a, b = _load_pair(args)
    rows = []
    for f in families:
        est = alpha_limit(f, a, b, schedule, z=args.z if f == "alpha_z" else None)
        rows.append({"kind": est.family, "z": est.z, "estimate": est.estimate,
                     "target": est.target_name, "target_value": est.target, "error": est.error})
    header = ["kind", "z", "estimate", "target", "target_value", "error"]
    _emit(_render(rows, header, args.format), args.output)
    return EXIT_OK


def cmd_verify_suite(args) -> int:
    names = args.suite or []
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
    spec = load_spec(args.algebra) if args.algebra else DEFAULT_SPEC
    phi = None
    if args.map:
        try:
            data = json.loads(Path(args.map).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"{args.map}: {exc}") from exc
        phi = StandardFormMap.from_json(data, spec)
        names = names or ["invariance"]
    ctx = SuiteContext(spec=spec, seed=args.seed, samples=args.samples,
                       search_samples=args.search_samples, phi=phi)
    t0 = time.perf_counter()
    results = run_suites(names, ctx)
    elapsed = time.perf_counter() - t0
    failed = [r for r in results if not r.passed]
    summary = {
        "verdict": "FAIL" if failed else "PASS",
        "algebra": spec.to_json(),
        "seed": args.seed,
        "suites": names or list(SUITES),
        "checks": len(results),
        "failed": len(failed),
        "runtime_s": round(elapsed, 3),
        "results": [r.to_json() for r in results],
    }
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        print(f"{mark}  {r.suite:<12} {r.name}  value={r.value:.3e}", file=sys.stderr)
    _emit(json.dumps(summary, indent=1) + "\n", args.output)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_search(args) -> int:
    if args.replay:
        stored = WitnessReport.load(args.replay)
        fresh = oracle.replay(stored)
        same = fresh.to_json() == stored.to_json()
        _emit(fresh.dumps() + "\n", args.output)
        print(f"replay: {fresh.verdict} ({'identical' if same else 'DIFFERS from stored report'})",
              file=sys.stderr)
        return EXIT_OK if same else EXIT_FAIL
    if args.mode is None:
        raise UsageError("choose a search mode (distinct, order, power) or pass --replay")
    if args.seed is None:
        raise UsageError("--seed is required for searches")
    spec = load_spec(args.algebra)
    if args.mode == "distinct":
        k1 = _kinds_from_args(args.kind1, args.alpha, args.z)[0]
        k2 = _kinds_from_args(args.kind2, args.alpha, args.z)[0]
        report = oracle.distinctness_search(spec, k1, k2, args.samples, args.seed)
    elif args.mode == "order":
        char = oracle.Characterization(args.characterization, args.alpha)
        a, b = load_element(spec, args.a), load_element(spec, args.b)
        report = oracle.order_witness_search(a, b, char, args.samples, args.seed)
    else:
        report = oracle.power_order_falsifier(spec, args.gamma, args.samples, args.seed)
    _emit(report.dumps() + "\n", args.output)
    print(f"{report.verdict}: {report.message}", file=sys.stderr)
    return EXIT_OK


# parser


def _add_pair(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algebra", required=True, help="algebra JSON ({'blocks': [...], 'weights': [...]})")
    p.add_argument("--a", required=True, help="element JSON for A")
    p.add_argument("--b", required=True, help="element JSON for B")


def _add_output(p: argparse.ArgumentParser, formats: bool = True) -> None:
    if formats:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renyi-lab",
        description="Quantum Renyi divergences on finite-dimensional C*-algebras.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate divergences of a pair")
    _add_pair(p)
    p.add_argument("--kind", required=True,
                   help="family name, comma list, or 'all' (the five parametric families)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--z", type=float, default=Z_DEFAULT, help="z for alpha_z (default %(default)s)")
    _add_output(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep-alpha", help="evaluate over a grid of alpha values")
    _add_pair(p)
    p.add_argument("--kind", default="all")
    p.add_argument("--alphas", help="comma separated alpha values")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--z", type=float, default=Z_DEFAULT)
    _add_output(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("limit", help="extrapolated alpha -> 1 limits")
    _add_pair(p)
    p.add_argument("--family", default="all")
    p.add_argument("--schedule", default="1.1,1.01,1.001")
    p.add_argument("--z", type=float, default=Z_DEFAULT)
    _add_output(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("verify-suite", help="run seeded verification suites")
    p.add_argument("--suite", action="append", help=f"one of {', '.join(SUITES)} (repeatable; default all)")
    p.add_argument("--algebra", help="algebra JSON (default M_2 + M_1)")
    p.add_argument("--map", help="standard-form map JSON to check instead of the built-in maps")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=50, help="pairs per property check")
    p.add_argument("--search-samples", type=int, default=1000, help="samples per witness search")
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_verify_suite)

    p = sub.add_parser("search", help="randomized witness searches")
    p.add_argument("mode", nargs="?", choices=("distinct", "order", "power"))
    p.add_argument("--replay", help="re-run the search stored in a report JSON")
    p.add_argument("--algebra")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--kind1", default="conventional")
    p.add_argument("--kind2", default="minimal")
    p.add_argument("--alpha", type=float)
    p.add_argument("--z", type=float, default=Z_DEFAULT)
    p.add_argument("--characterization", default="power_trace",
                   choices=("power_trace", "exp_trace", "max_quantity", "umegaki_order", "bs_order"))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--gamma", type=float, default=2.0)
    _add_output(p, formats=False)
    p.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "search" and not args.replay and args.mode is not None:
            if args.algebra is None:
                raise UsageError("--algebra is required")
            if args.mode == "order" and (args.a is None or args.b is None):
                raise UsageError("order search needs --a and --b")
        return args.func(args)
    except (UsageError, ParameterError, InvalidInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (NumericalFailure, CrossCheckFailure) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
