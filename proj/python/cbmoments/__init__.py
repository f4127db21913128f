"""Exact trace moments of Dyson's circular beta-ensembles.

Everything exact is computed over arbitrary-precision rationals and crosses
into Python as fractions.Fraction; partitions are tuples of ints. The
Metropolis sampler provides an independent statistical cross-check.
"""

from ._core import (
    CapacityError,
    SampleBatch,
    ab_bounds,
    big_theta,
    c_lambda,
    closed_forms,
    coe_trace_second_moment,
    conjugate,
    corollary_bound,
    cross_moment_bound_check,
    cue_expected,
    dirichlet_moment,
    dominance,
    enumerate_partitions,
    estimate_i,
    estimate_moment,
    exact_moment,
    gamma_bounds,
    i_of,
    jack_table,
    k_max,
    limit_check,
    log_density_unnormalized,
    moment_report,
    n_factor,
    power_sum_eval,
    run_chain,
    sandwich_check,
    save_batch_csv,
    set_k_max,
    tail_rate_check,
    theta,
    verify_orthogonality,
    z,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "SampleBatch",
    "ab_bounds",
    "big_theta",
    "c_lambda",
    "closed_forms",
    "coe_trace_second_moment",
    "conjugate",
    "corollary_bound",
    "cross_moment_bound_check",
    "cue_expected",
    "dirichlet_moment",
    "dominance",
    "enumerate_partitions",
    "estimate_i",
    "estimate_moment",
    "exact_moment",
    "gamma_bounds",
    "i_of",
    "jack_table",
    "k_max",
    "limit_check",
    "log_density_unnormalized",
    "moment_report",
    "n_factor",
    "power_sum_eval",
    "run_chain",
    "sandwich_check",
    "save_batch_csv",
    "set_k_max",
    "tail_rate_check",
    "theta",
    "verify_orthogonality",
    "z",
]
