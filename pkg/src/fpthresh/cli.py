"""Command-line entry point: ``fpthresh <subcommand> [options]``.

Exit codes: 0 success, 1 invalid arguments, 2 property-suite failure.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

import numpy as np

from . import experiments as ex
from . import instances
from .selftest import run_oracle_check, run_prox_selftest

EXIT_OK, EXIT_USAGE, EXIT_CHECK_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_range(text: str) -> tuple[int, ...]:
    """``"50:370:20"`` (inclusive stop) or ``"30,40,60"``."""
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise ValueError
            return tuple(range(start, stop + 1, step))
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}; use start:stop:step or a,b,c") from None


def parse_algorithms(text: str) -> tuple[str, ...]:
    algs = tuple(a.strip() for a in text.split(",") if a.strip())
    bad = [a for a in algs if a not in ex.ALGORITHMS]
    if bad or not algs:
        raise argparse.ArgumentTypeError(f"unknown algorithm(s) {bad}; choose from {', '.join(ex.ALGORITHMS)}")
    return algs


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--m", type=int, default=128)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, default=2.0)
    p.add_argument("--algorithms", type=parse_algorithms, default=ex.DEFAULT_ALGORITHMS)
    p.add_argument("--lambda0", type=float, default=0.5, help="fixed weight for FP-Scheme1 and Soft")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--step-tol", type=float, default=1e-8)
    p.add_argument("--max-iter", type=int, default=20000)
    p.add_argument("--success-threshold", type=float, default=1e-5)


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="records CSV (default: stdout)")
    p.add_argument("--aggregate-out", help="per-point summary CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fpthresh", description="Fraction-penalty thresholding experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="write a seeded problem to a text file")
    _common(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("solve", help="solve one problem with each algorithm")
    _common(p)
    _solver_flags(p)
    p.add_argument("--problem", help="problem file written by 'gen' (overrides --m/--n/--k/--sigma/--seed)")
    p.add_argument("--support-eps", type=float, default=0.0)
    p.add_argument("--out", help="records CSV")
    p.add_argument("--trace-out", help="per-iteration trace CSV; '{alg}' is replaced by the algorithm name")

    p = sub.add_parser("sweep-m", help="success rate against number of measurements")
    _common(p)
    _solver_flags(p)
    _sweep_flags(p)
    p.add_argument("--m-range", type=parse_range, default=parse_range("50:370:20"))
    p.set_defaults(k=100)

    p = sub.add_parser("sweep-k", help="success rate against sparsity")
    _common(p)
    _solver_flags(p)
    _sweep_flags(p)
    p.add_argument("--k-range", type=parse_range, default=parse_range("5:70:5"))
    p.add_argument("--fixed-matrix", action="store_true", help="one matrix for all trials")

    p = sub.add_parser("prox-selftest", help="property suite for the thresholding operator")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=2000, help="random samples per property")

    p = sub.add_parser("oracle-check", help="optimality conditions and exhaustive checks on tiny problems")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--a", type=float, default=2.0)
    return parser


def spec_from_args(args, kind: ex.Kind) -> ex.ExperimentSpec:
    spec = ex.ExperimentSpec(
        kind=kind,
        n=args.n,
        m=args.m,
        k=args.k,
        sigma=args.sigma,
        seed=args.seed,
        algorithms=tuple(args.algorithms),
        a=args.a,
        lambda0=args.lambda0,
        epsilon=args.epsilon,
        step_tol=args.step_tol,
        max_iter=args.max_iter,
        success_threshold=args.success_threshold,
        trials=getattr(args, "trials", 1),
        jobs=getattr(args, "jobs", 1),
        m_range=getattr(args, "m_range", ()),
        k_range=getattr(args, "k_range", ()),
        fixed_matrix=getattr(args, "fixed_matrix", False),
    )
    try:
        spec.validate()
    except ValueError as err:
        raise UsageError(str(err)) from None
    return spec


@contextmanager
def _open_out(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _cmd_gen(args) -> int:
    if not 1 <= args.k <= args.n:
        raise UsageError("need 1 <= k <= n")
    problem = instances.make_problem(args.m, args.n, args.k, args.sigma, args.seed)
    instances.save_problem(problem, args.out)
    print(f"wrote {args.m}x{args.n} problem (k={args.k}, sigma={args.sigma}, seed={args.seed}) to {args.out}")
    return EXIT_OK


def _cmd_solve(args) -> int:
    problem = None
    if args.problem:
        try:
            problem = instances.load_problem(args.problem)
        except (OSError, ValueError) as err:
            raise UsageError(f"cannot read problem file: {err}") from None
        args.m, args.n, args.sigma, args.seed = problem.m, problem.n, problem.sigma, problem.seed
        args.k = problem.k if 1 <= problem.k < problem.n else 1
    spec = spec_from_args(args, ex.Kind.SINGLE)
    run = ex.run_single(spec, problem)
    truth = None
    if run.problem.x_true is not None and np.any(run.problem.x_true):
        truth = ex.support_of(run.problem.x_true, args.support_eps)
    for alg, res in zip(spec.algorithms, run.results):
        supp = ex.support_of(res.x_final, args.support_eps)
        line = (
            f"{alg:<11} iterations={res.iterations} converged={res.converged} "
            f"objective={res.objective_trace[-1]:.6g} |support|={len(supp)} residual={res.fixed_point_residual:.3g}"
        )
        if truth is not None:
            line += f" rel_sq_error={ex.rel_sq_error(res.x_final, run.problem.x_true):.3e}"
            line += f" support_dist={ex.support_distance(supp, truth):.3f}"
        print(line)
        for w in res.warnings:
            print(f"  warning: {w}")
        if args.trace_out:
            with open(args.trace_out.replace("{alg}", alg), "w", newline="") as fh:
                ex.write_trace(res, fh)
    if args.out and run.records:
        with open(args.out, "w", newline="") as fh:
            ex.write_records(run.records, fh, ex.metadata_lines(spec))
    return EXIT_OK


def _cmd_sweep(args, kind: ex.Kind) -> int:
    spec = spec_from_args(args, kind)
    records = ex.run_sweep_m(spec) if kind is ex.Kind.SWEEP_M else ex.run_sweep_k(spec)
    meta = ex.metadata_lines(spec)
    with _open_out(args.out) as fh:
        ex.write_records(records, fh, meta)
    if args.aggregate_out:
        with open(args.aggregate_out, "w", newline="") as fh:
            ex.write_aggregate(ex.aggregate(records), fh, meta)
    return EXIT_OK


def _report(rep) -> int:
    for line in rep.lines():
        print(line)
    return EXIT_OK if rep.ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep-m":
            return _cmd_sweep(args, ex.Kind.SWEEP_M)
        if args.command == "sweep-k":
            return _cmd_sweep(args, ex.Kind.SWEEP_K)
        if args.command == "prox-selftest":
            return _report(run_prox_selftest(seed=args.seed, samples=args.trials))
        return _report(run_oracle_check(seed=args.seed, trials=args.trials, a=args.a))
    except UsageError as err:
        print(f"fpthresh: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
