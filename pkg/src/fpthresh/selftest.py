"""Seeded property suites behind the ``prox-selftest`` and ``oracle-check`` commands."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import instances, oracle
from .prox import active_threshold, g_lambda, prox_scalar, thresholds
from .solver import Scheme, SolverConfig, fp_objective, solve


@dataclass
class CheckReport:
    counts: dict[str, list[int]] = field(default_factory=dict)  # name -> [passed, failed]

    def record(self, name: str, ok: bool) -> None:
        c = self.counts.setdefault(name, [0, 0])
        c[0 if ok else 1] += 1

    @property
    def ok(self) -> bool:
        return all(failed == 0 for _, failed in self.counts.values())

    def lines(self) -> list[str]:
        out = []
        for name, (passed, failed) in self.counts.items():
            status = "PASS" if failed == 0 else "FAIL"
            out.append(f"{status} {name}: {passed} passed, {failed} failed")
        return out


def _sample(rng):
    return rng.uniform(0.01, 10.0), rng.uniform(0.5, 10.0)


def run_prox_selftest(
    seed: int = 0,
    samples: int = 2000,
    oracle_samples: int = 300,
    prox_fn: Callable[[float, float, float], float] = prox_scalar,
) -> CheckReport:
    """Property suite for the scalar thresholding operator.

    ``prox_fn`` is the operator under test; passing a deliberately broken one
    is how fault detection is exercised.
    """
    rng = np.random.default_rng(seed)
    rep = CheckReport()

    for _ in range(samples):
        lam, a = _sample(rng)
        tt = thresholds(lam, a)
        rep.record("ordering t1 <= t3 <= t2", tt.t1 <= tt.t3 + 1e-12 and tt.t3 <= tt.t2 + 1e-12)
        eq = thresholds(1.0 / a**2, a)
        rep.record(
            "equal thresholds at lambda = 1/a^2",
            max(abs(eq.t1 - 0.5 / a), abs(eq.t2 - 0.5 / a), abs(eq.t3 - 0.5 / a)) <= 1e-12,
        )

        t = tt.t1 + rng.exponential(3.0) + 1e-9
        y = g_lambda(t, lam, a)
        rep.record("cubic root residual", oracle.cubic_residual(y, t, lam, a) <= 1e-9 * max(1.0, lam * a))
        # only where the prox applies g; just above t1 the largest root can be negative
        ts = max(t, tt.t)
        rep.record("shrinkage |g(t)| <= |t| beyond the threshold", abs(g_lambda(ts, lam, a)) <= ts)
        rep.record("odd resolvent", g_lambda(-t, lam, a) == -y)

        x = rng.uniform(-20, 20)
        rep.record("odd prox", prox_fn(-x, lam, a) == -prox_fn(x, lam, a))

        th = active_threshold(lam, a)
        delta = 1e-6 * max(1.0, th)
        rep.record(
            "dead zone boundary",
            prox_fn(th, lam, a) == 0.0 and prox_fn(th - delta, lam, a) == 0.0 and prox_fn(th + delta, lam, a) != 0.0,
        )

    for _ in range(oracle_samples):
        lam, a = _sample(rng)
        x = rng.uniform(-20, 20)
        y = prox_fn(x, lam, a)
        yo = oracle.prox_grid_oracle(x, lam, a)
        fy = float(oracle.scalar_objective(y, x, lam, a))
        fo = float(oracle.scalar_objective(yo, x, lam, a))
        rep.record("grid oracle agreement", fy <= fo + 1e-8 and abs(y - yo) <= 1e-4)
    return rep


def run_oracle_check(seed: int = 0, trials: int = 10, a: float = 2.0) -> CheckReport:
    """Optimality conditions and small-instance claims on seeded tiny problems."""
    rep = CheckReport()
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        s = int(rng.integers(2**63))

        # zero solution above lambda_bar, from random starts
        p = instances.make_problem(10, 30, 3, 0.0, s)
        bb = float(p.b @ p.b)
        lbar = oracle.lambda_bar(p.A, p.b, a)
        worst = math.inf
        for _ in range(3):
            x0 = rng.standard_normal(30)
            res = solve(p.A, p.b, SolverConfig(scheme=Scheme.FP_SCHEME1, a=a, lambda0=lbar, x0=x0, max_iter=3000))
            worst = min(worst, fp_objective(res.x_final, p.A, p.b, lbar, a))
        rep.record("no objective below ||b||^2 at lambda_bar", worst >= bb * (1 - 1e-9))

        # stationarity of a converged fixed-lambda run
        p = instances.make_problem(20, 40, 3, 0.0, s)
        lam = 5.0
        res = solve(p.A, p.b, SolverConfig(scheme=Scheme.FP_SCHEME1, a=a, lambda0=lam, max_iter=200000, step_tol=1e-12))
        rep.record("first-order condition at fixed point", res.converged and oracle.check_first_order(res.x_final, p.A, p.b, lam, a, 1e-6))
        rep.record(
            "objective nonincreasing",
            bool(np.all(np.diff(res.objective_trace) <= 1e-10 * np.maximum(1.0, res.objective_trace[:-1]))),
        )

        # exhaustive l0 vs the adaptive scheme on a tiny problem
        p = instances.make_problem(6, 12, 2, 0.0, s)
        size, _ = oracle.exhaustive_l0(p.A, p.b)
        rep.record("exhaustive l0 finds the planted sparsity", size == 2)
        report = oracle.tiny_constants(p.A, p.b, a=a)
        rep.record("vertex constants ordered and finite", 0 < report.r_const <= report.R_const < math.inf)
    return rep
