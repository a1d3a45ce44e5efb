"""
Main Controller — iterfix
Command-line front end for fixed points and multipliers of iterated complex
polynomials, the trace identity, multiplier bound checks, family scans, the
counterexample search and the built-in verification suites.

Usage:
    python main.py fixpoints --poly "0,0,1" --n 2
    python main.py trace     --poly "0,0,1" --n 2 [--w "0,1+1i,-2"]
    python main.py cyclesum  --poly "-1,0,1"
    python main.py check     --poly "-1,0,1" --flavor theorem3
    python main.py strict    --poly "-1,0,1" --n-max 3
    python main.py scan      --d 2 --n 2 --flavor theorem3 --samples 1000 --seed 42
    python main.py search    --d 2 --n 2 --starts 64 --iters 400 --seed 1
    python main.py verify    --suite all --seed 0

Every subcommand accepts --format {json,csv,text} and the tolerance flags.
Exit codes: 0 success, 1 mathematical violation or suite failure,
2 input error, 3 numerical failure.
"""

import argparse
import logging
import sys

import config
from bounds.bound_checks import Flavor, check_bound, scan_family, strictness_probe
from dynamics.periodic_points import fixed_points
from errors import (
    BadLength,
    CInconsistent,
    DegreeOverflow,
    DegreeTooLow,
    DerivativeVanishes,
    IdentityMismatch,
    NoConvergence,
    PolynomialParseError,
)
from identities.trace_identity import check_trace_identity, quadratic_cycle_sum_check
from poly.polynomial import format_polynomial, parse_complex, parse_polynomial
from report import serializers
from rootfind.aberth import RootFindConfig
from search.multiplier_search import SearchConfig, minimize
from verify.suites import SUITES, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

_INPUT_ERRORS = (PolynomialParseError, DegreeTooLow, DegreeOverflow, BadLength, ValueError)
_NUMERICAL_ERRORS = (NoConvergence, CInconsistent, IdentityMismatch, DerivativeVanishes)


def _configure_logging(level: str) -> None:
    """Configure the root logger on stderr with the format specified in config."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=config.LOG_FORMAT,
        datefmt=config.LOG_DATE_FORMAT,
        stream=sys.stderr,
    )


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--format", choices=serializers.FORMATS, default="json",
                        help="Output format (default: json)")
    parent.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
                        default=config.LOG_LEVEL,
                        help=f"Logging verbosity on stderr (default: {config.LOG_LEVEL})")
    parent.add_argument("--residual-tol", type=float, default=config.RESIDUAL_TOL,
                        help=f"Root residual tolerance (default: {config.RESIDUAL_TOL})")
    parent.add_argument("--cluster-radius", type=float, default=config.CLUSTER_RADIUS,
                        help=f"Root clustering radius (default: {config.CLUSTER_RADIUS})")
    parent.add_argument("--polish-steps", type=int, default=config.NEWTON_POLISH_STEPS,
                        help=f"Newton polish steps (default: {config.NEWTON_POLISH_STEPS})")
    parent.add_argument("--max-iterations", type=int, default=config.MAX_ITERATIONS,
                        help=f"Aberth sweeps per attempt (default: {config.MAX_ITERATIONS})")
    parent.add_argument("--max-degree", type=int, default=config.MAX_DEGREE,
                        help=f"Largest iterated degree allowed (default: {config.MAX_DEGREE})")
    return parent


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iterfix",
        description="Fixed points and multipliers of iterated complex polynomials",
    )
    common = _common_flags()
    sub = parser.add_subparsers(dest="command", required=True)

    fix = sub.add_parser("fixpoints", parents=[common], help="Fixed points of p^n")
    fix.add_argument("--poly", required=True, help='Coefficients, constant first (e.g. "-1,0,1")')
    fix.add_argument("--n", type=int, default=1, help="Iterate index (default: 1)")

    trace = sub.add_parser("trace", parents=[common], help="Check the multiplier trace identity")
    trace.add_argument("--poly", required=True)
    trace.add_argument("--n", type=int, default=1)
    trace.add_argument("--w", default=None,
                       help="Comma-separated w samples for c (default: 0,1+1i,-2)")

    cyclesum = sub.add_parser("cyclesum", parents=[common],
                              help="Check the period-two multiplier sum of a quadratic")
    cyclesum.add_argument("--poly", required=True)

    check = sub.add_parser("check", parents=[common], help="Check a multiplier bound")
    check.add_argument("--poly", required=True)
    check.add_argument("--n", type=int, default=2, help="Iterate index; theorem3 uses 2")
    check.add_argument("--flavor", choices=[f.value for f in Flavor], default=Flavor.THEOREM3.value)

    strict = sub.add_parser("strict", parents=[common], help="Check M_n(p) > d^n for n = 2..n_max")
    strict.add_argument("--poly", required=True)
    strict.add_argument("--n-max", type=int, default=3)

    scan = sub.add_parser("scan", parents=[common], help="Randomized family scan")
    scan.add_argument("--d", type=int, required=True)
    scan.add_argument("--n", type=int, default=2)
    scan.add_argument("--flavor", choices=[f.value for f in Flavor], default=Flavor.THEOREM3.value)
    scan.add_argument("--samples", type=int, default=100)
    scan.add_argument("--seed", type=int, default=0)
    scan.add_argument("--radius", type=float, default=config.SCAN_RADIUS,
                      help=f"Free-coefficient disk radius (default: {config.SCAN_RADIUS})")

    search = sub.add_parser("search", parents=[common], help="Minimise M_n over monic centered p")
    search.add_argument("--d", type=int, required=True)
    search.add_argument("--n", type=int, default=2)
    search.add_argument("--flavor", choices=[Flavor.B.value, Flavor.C.value], default=Flavor.C.value)
    search.add_argument("--starts", type=int, default=config.SEARCH_STARTS)
    search.add_argument("--iters", type=int, default=config.SEARCH_ITERS)
    search.add_argument("--seed", type=int, default=0)

    verify = sub.add_parser("verify", parents=[common], help="Run built-in invariant suites")
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--scale", type=float, default=1.0,
                        help="Multiplier on the suite sample counts (default: 1.0)")
    return parser


def _root_config(args: argparse.Namespace) -> RootFindConfig:
    return RootFindConfig(
        max_iterations=args.max_iterations,
        residual_tol=args.residual_tol,
        cluster_radius=args.cluster_radius,
        newton_polish_steps=args.polish_steps,
    )


def _emit(doc: dict, fmt: str, table: str | None = None) -> None:
    sys.stdout.write(serializers.render(doc, fmt, table))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_fixpoints(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    report = fixed_points(parse_polynomial(args.poly), args.n, cfg)
    _emit(serializers.fixed_point_report_to_dict(report), args.format, table="points")
    return EXIT_OK


def cmd_trace(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    w_samples = None
    if args.w:
        w_samples = [parse_complex(tok) for tok in args.w.split(",")]
    report = check_trace_identity(parse_polynomial(args.poly), args.n, w_samples, cfg)
    _emit(serializers.trace_report_to_dict(report), args.format)
    return EXIT_OK if report.rel_residual < config.TRACE_PASS_TOL else EXIT_VIOLATION


def cmd_cyclesum(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    check = quadratic_cycle_sum_check(parse_polynomial(args.poly), cfg)
    _emit(serializers.cycle_sum_to_dict(check), args.format)
    return EXIT_OK


def cmd_check(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    report = check_bound(parse_polynomial(args.poly), args.n, args.flavor, cfg)
    _emit(serializers.bound_report_to_dict(report), args.format)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_strict(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    p = parse_polynomial(args.poly)
    entries = strictness_probe(p, args.n_max, cfg)
    doc = {
        "polynomial": format_polynomial(p),
        "entries": [
            {"n": n, "observed_max": observed, "threshold": floor, "strict": strict}
            for n, observed, floor, strict in entries
        ],
    }
    _emit(doc, args.format, table="entries")
    return EXIT_OK


def cmd_scan(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    summary = scan_family(args.d, args.n, args.flavor, args.samples, args.seed, cfg, args.radius)
    _emit(serializers.scan_summary_to_dict(summary), args.format)
    return EXIT_VIOLATION if summary.violations else EXIT_OK


def cmd_search(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    search_cfg = SearchConfig(
        d=args.d,
        n=args.n,
        starts=args.starts,
        iters_per_start=args.iters,
        seed=args.seed,
        flavor=args.flavor,
    )
    result = minimize(search_cfg, cfg)
    _emit(serializers.search_result_to_dict(result), args.format)
    if result.below_floor:
        poly = format_polynomial(result.best_polynomial)
        print(
            f"candidate below the conjectured floor {result.conjecture_floor:g}; re-verify with:\n"
            f'  python main.py check --poly "{poly}" --n {args.n} --flavor {args.flavor} '
            f"--residual-tol {config.REVERIFY_RESIDUAL_TOL:g} "
            f"--polish-steps {config.REVERIFY_POLISH_STEPS}",
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, cfg: RootFindConfig) -> int:
    results = run_suite(args.suite, args.seed, args.scale)
    passed = all(r.passed for r in results)
    doc = {
        "suite": args.suite,
        "seed": args.seed,
        "scale": args.scale,
        "passed": passed,
        "checks": [
            {
                "name": r.name,
                "samples": r.samples,
                "worst": r.worst,
                "threshold": r.threshold,
                "failures": r.failures,
                "passed": r.passed,
            }
            for r in results
        ],
    }
    _emit(doc, args.format, table="checks")
    return EXIT_OK if passed else EXIT_VIOLATION


_COMMANDS = {
    "fixpoints": cmd_fixpoints,
    "trace": cmd_trace,
    "cyclesum": cmd_cyclesum,
    "check": cmd_check,
    "strict": cmd_strict,
    "scan": cmd_scan,
    "search": cmd_search,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    """Parse *argv*, run the subcommand and return its exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT_ERROR

    _configure_logging(args.log_level)
    logger.debug("running %s", args.command)

    # --max-degree applies to this invocation only
    saved_max_degree = config.MAX_DEGREE
    config.MAX_DEGREE = args.max_degree
    try:
        cfg = _root_config(args)
        return _COMMANDS[args.command](args, cfg)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_FAILURE
    finally:
        config.MAX_DEGREE = saved_max_degree


if __name__ == "__main__":
    sys.exit(main())
