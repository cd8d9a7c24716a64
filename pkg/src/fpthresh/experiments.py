"""Recovery experiments: measurement sweeps, sparsity sweeps, single solves.

Every run is a pure function of its :class:`ExperimentSpec`. Trial ``i`` uses
the problem seed ``trial_seed(spec.seed, i)`` at every sweep point, so the
signal is shared across the sweep and, for measurement sweeps, the
``m x n`` matrix at a smaller ``m`` is the leading block of the one at a
larger ``m``.
"""

from __future__ import annotations

import csv
import enum
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np

from . import instances
from .metrics import DEFAULT_SUCCESS_THRESHOLD, rel_sq_error, support_distance, support_of
from .solver import Scheme, SolveResult, SolverConfig, solve

RECORD_FIELDS = [
    "experiment", "algorithm", "m", "n", "k", "sigma", "trial", "seed",
    "success", "rel_sq_error", "support_dist", "iterations", "runtime_ms",
]
AGGREGATE_FIELDS = [
    "experiment", "algorithm", "m", "n", "k", "sigma", "trials", "success_rate",
    "mean_rel_sq_error", "mean_support_dist", "median_rel_sq_error", "median_support_dist",
]
ALGORITHMS = tuple(s.value for s in Scheme)
DEFAULT_ALGORITHMS = ("FP-Scheme2", "Soft", "Half")


class Kind(enum.Enum):
    SWEEP_M = "sweep-m"
    SWEEP_K = "sweep-k"
    SINGLE = "single"
    PROX_SELFTEST = "prox-selftest"
    ORACLE_CHECK = "oracle-check"


@dataclass
class ExperimentSpec:
    kind: Kind = Kind.SINGLE
    n: int = 512
    m: int = 128
    k: int = 20
    m_range: tuple[int, ...] = ()
    k_range: tuple[int, ...] = ()
    sigma: float = 0.0
    trials: int = 1
    seed: int = 0
    algorithms: tuple[str, ...] = DEFAULT_ALGORITHMS
    a: float = 2.0
    lambda0: float = 0.5
    success_threshold: float = DEFAULT_SUCCESS_THRESHOLD
    epsilon: float = 0.01
    step_tol: float = 1e-8
    max_iter: int = 20000
    fixed_matrix: bool = False
    jobs: int = 1

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown or not self.algorithms:
            raise ValueError(f"algorithms must be a nonempty subset of {ALGORITHMS}, got {self.algorithms}")
        ms = self.m_range if self.kind is Kind.SWEEP_M else (self.m,)
        ks = self.k_range if self.kind is Kind.SWEEP_K else (self.k,)
        if not ms or not ks:
            raise ValueError(f"{self.kind.value} needs a nonempty range")
        if any(m < 1 for m in ms):
            raise ValueError("m must be positive")
        if any(not 1 <= k < self.n for k in ks):
            raise ValueError(f"k must satisfy 1 <= k < n={self.n}")


@dataclass
class ExperimentRecord:
    experiment: str
    algorithm: str
    m: int
    n: int
    k: int
    sigma: float
    trial: int
    seed: int
    success: int
    rel_sq_error: float
    support_dist: float
    iterations: int
    runtime_ms: float

    def row(self) -> list[str]:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(repr(float(v)) if isinstance(v, float) else str(v))
        return out


def trial_seed(master: int, trial: int) -> int:
    return int(np.random.SeedSequence([int(master), int(trial)]).generate_state(1, dtype=np.uint64)[0])


def solver_config(spec: ExperimentSpec, algorithm: str, k: int) -> SolverConfig:
    scheme = Scheme(algorithm)
    cfg = SolverConfig(
        scheme=scheme, a=spec.a, epsilon=spec.epsilon, max_iter=spec.max_iter, step_tol=spec.step_tol
    )
    if scheme in (Scheme.FP_SCHEME1, Scheme.SOFT):
        cfg.lambda0 = spec.lambda0
    else:
        cfg.k = k
    return cfg


def run_algorithms(spec: ExperimentSpec, problem: instances.SensingProblem, experiment: str, trial: int):
    """Solve one problem with each selected algorithm; returns ``(records, results)``."""
    records, results = [], []
    norm_cache = None
    truth = support_of(problem.x_true)
    for alg in spec.algorithms:
        cfg = solver_config(spec, alg, problem.k)
        t0 = time.perf_counter()
        res = solve(problem.A, problem.b, cfg, norm_A=norm_cache)
        elapsed = (time.perf_counter() - t0) * 1e3
        norm_cache = res.norm_A
        err = rel_sq_error(res.x_final, problem.x_true)
        records.append(
            ExperimentRecord(
                experiment=experiment,
                algorithm=alg,
                m=problem.m,
                n=problem.n,
                k=problem.k,
                sigma=float(problem.sigma),
                trial=trial,
                seed=problem.seed,
                success=int(err <= spec.success_threshold),
                rel_sq_error=err,
                support_dist=support_distance(support_of(res.x_final), truth),
                iterations=res.iterations,
                runtime_ms=elapsed,
            )
        )
        results.append(res)
    return records, results


def _sweep_task(args):
    spec, experiment, m, k, trial = args
    seed = trial_seed(spec.seed, trial)
    A = None
    if spec.fixed_matrix:
        A = instances.gen_gaussian_matrix(m, spec.n, spec.seed)
    problem = instances.make_problem(m, spec.n, k, spec.sigma, seed, A=A)
    return run_algorithms(spec, problem, experiment, trial)[0]


def _run_sweep(spec: ExperimentSpec, points: list[tuple[int, int]], experiment: str) -> list[ExperimentRecord]:
    spec.validate()
    tasks = [(spec, experiment, m, k, t) for (m, k) in points for t in range(spec.trials)]
    if spec.jobs > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            chunks = list(pool.map(_sweep_task, tasks))
    else:
        chunks = [_sweep_task(t) for t in tasks]
    order = {alg: i for i, alg in enumerate(spec.algorithms)}
    point_index = {p: i for i, p in enumerate(points)}
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (point_index[(r.m, r.k)], order[r.algorithm], r.trial))
    return records


def run_sweep_m(spec: ExperimentSpec) -> list[ExperimentRecord]:
    spec = replace(spec, kind=Kind.SWEEP_M, fixed_matrix=False)
    return _run_sweep(spec, [(m, spec.k) for m in spec.m_range], "sweep-m")


def run_sweep_k(spec: ExperimentSpec) -> list[ExperimentRecord]:
    spec = replace(spec, kind=Kind.SWEEP_K)
    return _run_sweep(spec, [(spec.m, k) for k in spec.k_range], "sweep-k")


@dataclass
class SingleRun:
    problem: instances.SensingProblem
    records: list[ExperimentRecord]
    results: list[SolveResult] = field(default_factory=list)


def run_single(spec: ExperimentSpec, problem: instances.SensingProblem | None = None) -> SingleRun:
    """One problem (generated from ``spec`` unless given), one solve per algorithm."""
    spec = replace(spec, kind=Kind.SINGLE)
    spec.validate()
    if problem is None:
        problem = instances.make_problem(spec.m, spec.n, spec.k, spec.sigma, spec.seed)
    if problem.x_true is None or not np.any(problem.x_true):
        # no ground truth to score against; report solver output only
        results = [solve(problem.A, problem.b, solver_config(spec, alg, max(problem.k, 1))) for alg in spec.algorithms]
        return SingleRun(problem, [], results)
    records, results = run_algorithms(spec, problem, "single", 0)
    return SingleRun(problem, records, results)


def aggregate(records: list[ExperimentRecord]) -> list[dict]:
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault((r.experiment, r.algorithm, r.m, r.n, r.k, r.sigma), []).append(r)
    rows = []
    for (exp, alg, m, n, k, sigma), rs in groups.items():
        errs = np.array([r.rel_sq_error for r in rs])
        dists = np.array([r.support_dist for r in rs])
        rows.append(
            dict(
                experiment=exp, algorithm=alg, m=m, n=n, k=k, sigma=sigma, trials=len(rs),
                success_rate=float(np.mean([r.success for r in rs])),
                mean_rel_sq_error=float(errs.mean()),
                mean_support_dist=float(dists.mean()),
                median_rel_sq_error=float(np.median(errs)),
                median_support_dist=float(np.median(dists)),
            )
        )
    return rows


def metadata_lines(spec: ExperimentSpec) -> list[str]:
    return [
        f"# prng: {instances.PRNG_NAME}",
        f"# a={spec.a!r} lambda0={spec.lambda0!r} (FP-Scheme1, Soft) epsilon={spec.epsilon!r} "
        f"step_tol={spec.step_tol!r} max_iter={spec.max_iter} success_threshold={spec.success_threshold!r}",
        f"# seed={spec.seed} trials={spec.trials} fixed_matrix={spec.fixed_matrix}",
    ]


def write_records(records: list[ExperimentRecord], fh, meta: list[str] = ()) -> None:
    for line in meta:
        fh.write(line + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(RECORD_FIELDS)
    for r in records:
        w.writerow(r.row())


def write_aggregate(rows: list[dict], fh, meta: list[str] = ()) -> None:
    for line in meta:
        fh.write(line + "\n")
    w = csv.DictWriter(fh, fieldnames=AGGREGATE_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def records_to_csv(records: list[ExperimentRecord], meta: list[str] = ()) -> str:
    buf = io.StringIO()
    write_records(records, buf, meta)
    return buf.getvalue()


def read_records(fh) -> list[dict]:
    return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def write_trace(result: SolveResult, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["iteration", "objective", "step_diff", "lambda"])
    for i, (o, d, lam) in enumerate(zip(result.objective_trace, result.step_diffs, result.lambda_trace), start=1):
        w.writerow([i, repr(float(o)), repr(float(d)), repr(float(lam))])
