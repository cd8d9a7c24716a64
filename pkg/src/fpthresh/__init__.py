"""Sparse recovery with the fraction penalty ``a|t| / (1 + a|t|)``."""

from .instances import SensingProblem, gen_gaussian_matrix, gen_sparse_signal, make_problem, measure
from .metrics import SupportSet, is_success, rel_sq_error, support_distance, support_of
from .penalty import P_a, PenaltyParams, p_a
from .prox import ProxConfig, Regime, ThresholdTriple, g_lambda, prox, prox_scalar, prox_vector, thresholds
from .solver import (
    Scheme,
    SolveResult,
    SolverConfig,
    b_mu,
    fp_iterate_scheme1,
    fp_iterate_scheme2,
    half_iterate,
    soft_iterate,
    solve,
)

__version__ = "0.1.0"
