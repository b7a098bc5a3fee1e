"""Fredholm determinants of the confluent hypergeometric kernel.

The package evaluates det(I - K) for the confluent hypergeometric kernel
restricted to a union of intervals with per-interval weights, by three
independent routes (direct Nystrom discretization, a coupled Painleve-V
Hamiltonian flow, and closed-form large-gap asymptotics), plus the
counting-statistics layer built on top of them.
"""

from .asymptotics import (
    AsymptoticReport,
    MomentAsymptotics,
    b_from_gamma,
    c_from_gamma,
    h_from_gamma,
    large_gap_lnF,
    moment_asymptotics,
    small_t_lnF,
    symmetric_counting_asymptotics,
)
from .errors import DomainError, NonConvergenceError, RegimeError
from .fredholm import (
    QuadratureGrid,
    build_grid,
    default_grading_levels,
    log_det,
    log_det_series_oracle,
)
from .kernel import (
    Configuration,
    KernelParams,
    bessel_kernel,
    chf_kernel,
    chf_kernel_diagonal,
    sigma_step,
    sine_kernel,
)
from .painleve import (
    CPVRates,
    CPVState,
    IdentityReport,
    LargeTPrediction,
    cpv_init,
    cpv_integrate,
    cpv_large_t_prediction,
    cpv_rhs,
    default_t0,
    hamiltonian,
    pv5_weighted_hamiltonian,
    verify_identities,
)
from .stats import (
    MomentEstimate,
    numeric_covariance,
    numeric_mean,
    numeric_variance,
)

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "RegimeError",
    "KernelParams",
    "Configuration",
    "chf_kernel",
    "chf_kernel_diagonal",
    "sigma_step",
    "sine_kernel",
    "bessel_kernel",
    "QuadratureGrid",
    "build_grid",
    "default_grading_levels",
    "log_det",
    "log_det_series_oracle",
    "AsymptoticReport",
    "MomentAsymptotics",
    "b_from_gamma",
    "c_from_gamma",
    "h_from_gamma",
    "large_gap_lnF",
    "small_t_lnF",
    "moment_asymptotics",
    "symmetric_counting_asymptotics",
    "CPVState",
    "CPVRates",
    "IdentityReport",
    "LargeTPrediction",
    "cpv_rhs",
    "hamiltonian",
    "pv5_weighted_hamiltonian",
    "cpv_init",
    "default_t0",
    "cpv_integrate",
    "verify_identities",
    "cpv_large_t_prediction",
    "MomentEstimate",
    "numeric_mean",
    "numeric_variance",
    "numeric_covariance",
]

__version__ = "0.1.0"
