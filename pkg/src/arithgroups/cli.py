"""Command line interface: ``arithgroups run|gen|bench|example|verify``."""
from __future__ import annotations

import argparse
import sys
import time

from .arithmetic import compute_generators, verify, verify_generators
from .errors import InconsistencyError, InvalidLieAlgebraError, NotNilpotentError, ProblemFormatError
from .examples import worked_example_problem
from .families import family
from .nilpotent import check_flag, check_rep, compute_flag
from .problem import ProblemFile, ResultFile, dumps, read_problem, read_result

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_INTERNAL = 4


def run_problem(problem, support_optimization=None, do_verify=None):
    """Check, build the flag, compute generators and optionally verify.

    Returns ``(ResultFile, TSequenceResult)``.
    """
    if support_optimization is None:
        support_optimization = problem.support_optimization
    if do_verify is None:
        do_verify = problem.verify
    timing = {}

    t0 = time.perf_counter()
    g = problem.algebra()
    L = problem.lattice_object()
    diag = check_rep(g)
    if not all(diag.nilpotent):
        raise NotNilpotentError("; ".join(diag.problems))
    if diag.problems:
        raise InvalidLieAlgebraError("; ".join(diag.problems))
    timing["check"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    flag = problem.flag_object()
    if flag is None:
        flag = compute_flag(g)
    else:
        check_flag(g, flag)
    timing["flag"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = compute_generators(L, g, flag, support_optimization=support_optimization, validate=False)
    timing["generators"] = time.perf_counter() - t0

    report = None
    if do_verify:
        t0 = time.perf_counter()
        report = verify(result).as_dict()
        timing["verify"] = time.perf_counter() - t0

    levels = [
        {"depth": lv.depth, "dim": lv.dim, "dims": list(lv.dims), "k": lv.k, "l": lv.l}
        for lv in result.levels
    ]
    out = ResultFile(
        problem=problem,
        generators=result.generators,
        levels=levels,
        verification=report,
        timing={k: round(v, 6) for k, v in timing.items()},
    )
    return out, result


def verify_result_file(res):
    """Re-check the generators stored in a result file against its problem."""
    p = res.problem
    groups = []
    if res.levels:
        groups.append((res.generators, res.levels[0].get("k", len(res.generators))))
    return verify_generators(res.generators, p.lattice_object(), p.algebra(), groups)


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _summary(res, stream):
    print(f"hirsch length: {res.hirsch_length}", file=stream)
    print("levels (k, l): " + ", ".join(f"({lv['k']}, {lv['l']})" for lv in res.levels), file=stream)
    if res.verification is not None:
        v = res.verification
        status = "all checks passed" if v["passed"] else "FAILED: " + "; ".join(v["details"])
        print(f"verification: {status}", file=stream)
    print("timing: " + ", ".join(f"{k} {v:.3f}s" for k, v in res.timing.items()), file=stream)


def cmd_run(args):
    problem = read_problem(args.file)
    res, _ = run_problem(
        problem,
        support_optimization=False if args.no_support_opt else None,
        do_verify=True if args.verify else None,
    )
    _write(dumps(res), args.output)
    _summary(res, sys.stderr)
    if res.verification is not None and not res.verification["passed"]:
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_gen(args):
    g = family(args.family, args.n)
    problem = ProblemFile(dimension=g.dim, lie_algebra=g.basis, name=f"{args.family} n={args.n}")
    _write(dumps(problem), args.output)
    return EXIT_OK


def _bench_one(name, n, support_optimization):
    g = family(name, n)
    t0 = time.perf_counter()
    result = compute_generators(None, g, support_optimization=support_optimization)
    elapsed = time.perf_counter() - t0
    return n, result.hirsch_length, len(g), elapsed, verify(result).passed


def bench_rows(name, start, stop, support_optimization=True, jobs=1):
    ns = list(range(start, stop + 1))
    if jobs > 1 and len(ns) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_bench_one, name, n, support_optimization) for n in ns]
            return [f.result() for f in futures]
    return [_bench_one(name, n, support_optimization) for n in ns]


def cmd_bench(args):
    rows = bench_rows(args.family, args.start, args.stop, not args.no_support_opt, args.jobs)
    print(f"{'n':>3} {'hirsch':>6} {'dim':>4} {'time (s)':>10} {'verified':>8}")
    for n, h, d, secs, ok in rows:
        print(f"{n:>3} {h:>6} {d:>4} {secs:>10.3f} {'yes' if ok else 'NO':>8}")
    return EXIT_OK if all(r[1] == r[2] and r[4] for r in rows) else EXIT_VERIFY_FAILED


def cmd_example(args):
    _write(dumps(worked_example_problem()), args.output)
    return EXIT_OK


def cmd_verify(args):
    res = read_result(args.file)
    report = verify_result_file(res)
    for key in ("lattice_preserved", "hirsch_length", "log_span", "central"):
        print(f"{key}: {'pass' if getattr(report, key) else 'FAIL'}")
    for line in report.details:
        print(f"  {line}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="arithgroups",
        description="Generators of arithmetic subgroups of unipotent matrix groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="compute a T-sequence for a problem file")
    p.add_argument("file")
    p.add_argument("--no-support-opt", action="store_true", help="use the full space of error maps")
    p.add_argument("--verify", action="store_true", help="verify the output")
    p.add_argument("-o", "--output", help="result file (default: stdout)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("gen", help="write a problem file for g_n or h_n")
    p.add_argument("--family", choices=["gn", "hn"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the algorithm on a range of a family")
    p.add_argument("--family", choices=["gn", "hn"], required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="stop", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-support-opt", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("example", help="write the builtin 4-dimensional example")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("verify", help="re-check the generators in a result file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProblemFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidLieAlgebraError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        # out-of-range family size and similar argument problems
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistencyError as exc:
        print(f"error: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
