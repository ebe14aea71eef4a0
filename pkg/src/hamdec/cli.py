"""Command-line surface: construct, verify, audit, certify.

Exit codes are stable across subcommands: 0 on success, 1 on a verification
or certificate failure, 2 on usage or schema errors.  The environment
variable HAMDEC_BUDGET overrides the default step budget.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import certio
from .errors import HamdecError, ResourceLimit, SchemaError, UnsupportedParameters
from .synthesis import from_recipe, plan, synthesize
from .verify import (
    DEFAULT_BUDGET,
    budget_from_env,
    verify_decomposition,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _print_recipe(node: dict, indent: int = 0) -> None:
    pad = "  " * indent
    kind = node.get("kind")
    keys = [k for k in ("d", "m", "a", "b", "family") if k in node]
    detail = ", ".join(f"{k}={node[k]}" for k in keys)
    print(f"{pad}{kind}({detail})")
    for child in node.get("children", []):
        _print_recipe(child, indent + 1)
    for key in ("child", "base"):
        if key in node and isinstance(node[key], dict):
            _print_recipe(node[key], indent + 1)


def _report_lines(report) -> None:
    params = report.params
    target = params.n_vertices
    if report.mode == "exhaustive":
        print(f"arc partition = {report.arc_partition_ok}")
        for color in sorted(report.cycle_lengths):
            length = report.cycle_lengths[color]
            print(
                f"m={params.m}, color={color}: return single cycle = "
                f"{length == target}, length target={target}"
            )
    else:
        for name, ok, detail in report.checks:
            print(f"check {name}: {ok} ({detail})")
    print(f"verification mode = {report.mode}, pass = {report.passed}")


def cmd_construct(args) -> int:
    budget = args.budget
    try:
        tree = plan(args.d, args.m, alternate_base=args.alt_base)
    except UnsupportedParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_recipe(tree)
    dec = synthesize(args.d, args.m, budget=budget, alternate_base=args.alt_base)
    report = verify_decomposition(dec, "auto", budget, jobs=args.jobs)
    _report_lines(report)
    if args.out:
        kind = "explicit" if args.explicit else "recipe"
        certio.export_decomposition(dec, args.out, kind=kind, budget=budget)
        print(f"wrote {kind} file: {args.out}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        doc = certio._load(args.file)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    tag = certio.detect_format(doc)
    budget = args.budget
    if tag == certio.FORMAT_DECOMPOSITION:
        loaded = certio.import_decomposition(doc)
        dec = loaded if not isinstance(loaded, dict) else from_recipe(loaded, budget)
        mode = args.mode or "auto"
        report = verify_decomposition(dec, mode, budget, jobs=args.jobs)
        _report_lines(report)
        if not report.passed and report.violation is not None:
            print(f"violated vertex index: {report.violation}")
        return EXIT_PASS if report.passed else EXIT_FAIL
    if tag == certio.FORMAT_ZEROSET:
        from .d7boundary import boundary_schedule, mc7_check
        from .rootflat import verify_rf

        overall = True
        for key in sorted(doc.get("certificates", {})):
            m = int(key)
            comp = certio.import_zero_set(doc, m)
            ok = mc7_check(m, comp)
            rf = verify_rf(boundary_schedule(m, comp), "all", budget)
            print(f"m={m}: exact cover = {ok}, rf suite = {rf.ok}")
            overall = overall and ok and rf.ok
        return EXIT_PASS if overall else EXIT_FAIL
    if tag == certio.FORMAT_RANK:
        from .d7boundary import boundary_schedule, verify_rank

        overall = True
        for key in sorted(doc.get("certificates", {})):
            m = int(key)
            cert = certio.import_rank(doc, m)
            ok = verify_rank(cert, boundary_schedule(m))
            print(f"m={m}: rank certificate verified = {ok}")
            overall = overall and ok
        return EXIT_PASS if overall else EXIT_FAIL
    print(f"error: cannot re-verify format {tag}", file=sys.stderr)
    return EXIT_USAGE


def cmd_audit(args) -> int:
    budget = args.budget
    failures = 0
    rows = []
    for d in range(2, args.dmax + 1):
        moduli = range(2, args.mmax + 1) if d == 2 else range(3, args.mmax + 1, 2)
        for m in moduli:
            try:
                dec = synthesize(d, m, budget=budget)
                report = verify_decomposition(dec, "auto", budget, jobs=args.jobs)
            except ResourceLimit:
                rows.append((d, m, "skipped (budget)", None))
                continue
            mode = report.mode + (" (downgraded)" if report.downgraded else "")
            rows.append((d, m, mode, report.passed))
            if not report.passed:
                failures += 1
    width = max(len(r[2]) for r in rows)
    print(f"{'d':>3} {'m':>4} {'mode':<{width}} result")
    for d, m, mode, passed in rows:
        verdict = "skipped" if passed is None else ("pass" if passed else "FAIL")
        print(f"{d:>3} {m:>4} {mode:<{width}} {verdict}")
    print(f"{len(rows)} points, {failures} failures")
    return EXIT_PASS if failures == 0 else EXIT_FAIL


def cmd_certify(args) -> int:
    if args.target != "d7":
        print(f"error: unknown certify target {args.target!r}", file=sys.stderr)
        return EXIT_USAGE
    if args.m not in (3, 5):
        print(f"error: boundary compilers exist for m in {{3, 5}}", file=sys.stderr)
        return EXIT_USAGE
    from .d7boundary import (
        boundary_compiler,
        boundary_schedule,
        generate_rank,
        mc7_check,
        verify_rank,
    )
    from .rootflat import verify_rf

    m = args.m
    comp = boundary_compiler(m)
    sched = boundary_schedule(m, comp)
    cover_ok = mc7_check(m, comp)
    print(f"m={m}: exact cover and outgoing Latin = {cover_ok}")
    rf = verify_rf(sched, "all", args.budget)
    target = m**6
    ok = cover_ok and rf.rf1_ok and rf.rf2_ok
    for color in range(7):
        single, length = rf.rf3[color]
        print(
            f"m={m}, color={color}: return single cycle = {single}, "
            f"length target={target}"
        )
        ok = ok and single and length == target
    cert = generate_rank(m, comp)
    rank_ok = verify_rank(cert, sched)
    for color in range(7):
        print(
            f"m={m}, color={color}: rank permutation = {rank_ok}, "
            f"rank increment = {rank_ok}"
        )
    ok = ok and rank_ok
    if args.rank_out:
        certio.export_rank(cert, args.rank_out)
        values = 7 * m**6
        print(f"wrote rank certificate ({values} values): {args.rank_out}")
    if ok:
        print(f"m={m}: rank certificate verified")
        print("ALL REQUESTED ZERO-SET AND RANK CHECKS PASSED")
        return EXIT_PASS
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamdec",
        description="Hamilton decompositions of equal-side directed tori",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    default_budget = budget_from_env(DEFAULT_BUDGET)
    default_jobs = os.cpu_count() or 1

    def common(p):
        p.add_argument("--budget", type=int, default=default_budget,
                       help="maximum enumeration steps per check")
        p.add_argument("--jobs", type=int, default=default_jobs,
                       help="verification worker count")

    p = sub.add_parser("construct", help="build and verify one decomposition")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", help="output file path")
    p.add_argument("--explicit", action="store_true",
                   help="export the full direction table instead of the recipe")
    p.add_argument("--alt-base", action="store_true",
                   help="use the 2^a*3^b base selector for odd d >= 29")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-verify a decomposition or certificate file")
    p.add_argument("--file", required=True)
    p.add_argument("--mode", choices=["exhaustive", "structural"])
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="synthesize and verify a grid of parameters")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--mmax", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("certify", help="regenerate and check boundary certificates")
    p.add_argument("target", choices=["d7"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rank-out", help="write the regenerated rank certificate here")
    common(p)
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_PASS
    if args.budget <= 0 or args.jobs < 1:
        print("error: budget must be positive and jobs >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedParameters, ResourceLimit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HamdecError as exc:
        print(f"verification error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
