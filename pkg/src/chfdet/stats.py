"""Numerical counting statistics from the log determinant.

The deformed determinant is the moment generating function of the particle
counts: its exponent parameter enters every interval weight, and
differentiating ln det at the undeformed point produces the mean, variance,
and covariance of the counts. Derivatives are taken along the substitution
path that keeps every weight real (weights leave [0, 1) for negative probe
values, which the non-symmetrized determinant accepts) with central finite
differences and one level of Richardson extrapolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NonConvergenceError
from .fredholm import log_det
from .kernel import Configuration, KernelParams

__all__ = [
    "MomentEstimate",
    "numeric_mean",
    "numeric_variance",
    "numeric_covariance",
]

_DEFAULT_FD_STEP = 1e-3
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MomentEstimate:
    """A finite-difference moment value together with its stencil metadata:
    the base step of the probe parameter and the order of accuracy after
    Richardson extrapolation."""

    value: float
    fd_step: float
    richardson_order: int

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonConvergenceError("MomentEstimate: value is not finite")
        if not self.fd_step > 0.0:
            raise DomainError("MomentEstimate: fd_step must be positive")


def _single_weight(s: float) -> float:
    """Interval weight 1 - e^(-2 pi s) of the real probe path."""
    return -math.expm1(-_TWO_PI * s)


def _double_weight(s: float) -> float:
    """Interval weight 1 - e^(-4 pi s) carried by a doubly-counted interval."""
    return -math.expm1(-2.0 * _TWO_PI * s)


def _validate_probe(t: float, fd_step: float) -> None:
    if not (math.isfinite(t) and t > 0.0):
        raise DomainError("counting statistics require finite t > 0")
    if not (0.0 < fd_step <= 0.1):
        raise DomainError("fd_step must lie in (0, 0.1]")


def numeric_mean(
    params: KernelParams, t: float, r1: float, fd_step: float = _DEFAULT_FD_STEP
) -> MomentEstimate:
    """Expected particle count on the interval between 0 and t*r1.

    The first derivative of ln det along the probe path, scaled by -1/(2 pi);
    central differences at the base step and its half, Richardson-combined to
    fourth order."""
    t, r1, fd_step = float(t), float(r1), float(fd_step)
    _validate_probe(t, fd_step)
    if not (math.isfinite(r1) and r1 != 0.0):
        raise DomainError("numeric_mean: requires nonzero finite r1")
    r = (0.0, r1) if r1 > 0.0 else (r1, 0.0)
    base = Configuration(t=t, r=r, gamma=(0.0,))

    def lnf(s: float) -> float:
        return log_det(params, base.replace_gamma((_single_weight(s),)))

    h = fd_step
    d_h = (lnf(h) - lnf(-h)) / (2.0 * h)
    d_half = (lnf(0.5 * h) - lnf(-0.5 * h)) / h
    value = -(4.0 * d_half - d_h) / (3.0 * _TWO_PI)
    return MomentEstimate(value=value, fd_step=h, richardson_order=4)


def numeric_variance(
    params: KernelParams, t: float, r1: float, fd_step: float = _DEFAULT_FD_STEP
) -> MomentEstimate:
    """Variance of the particle count on the interval between 0 and t*r1.

    The second derivative of ln det along the probe path, scaled by
    +1/(4 pi^2). The stencil center is the undeformed determinant, whose log
    is exactly zero, so only the four offset evaluations are performed."""
    t, r1, fd_step = float(t), float(r1), float(fd_step)
    _validate_probe(t, fd_step)
    if not (math.isfinite(r1) and r1 != 0.0):
        raise DomainError("numeric_variance: requires nonzero finite r1")
    r = (0.0, r1) if r1 > 0.0 else (r1, 0.0)
    base = Configuration(t=t, r=r, gamma=(0.0,))

    def lnf(s: float) -> float:
        return log_det(params, base.replace_gamma((_single_weight(s),)))

    h = fd_step
    d2_h = (lnf(h) + lnf(-h)) / (h * h)
    d2_half = (lnf(0.5 * h) + lnf(-0.5 * h)) / (0.25 * h * h)
    value = (4.0 * d2_half - d2_h) / (3.0 * _TWO_PI**2)
    return MomentEstimate(value=value, fd_step=h, richardson_order=4)


def numeric_covariance(
    params: KernelParams,
    t: float,
    r1: float,
    r2: float,
    sign: str = "+",
    fd_step: float = _DEFAULT_FD_STEP,
) -> MomentEstimate:
    """Covariance of two particle counts at radii r1 and r2.

    sign "+" correlates the counts up to t*r1 and t*r2 on the same side of
    the origin; sign "-" places the larger radius on the negative axis and
    correlates the counts on (-t*r_hi, 0) and (0, t*r_lo). The value is
    +1/(8 pi^2) times the second probe derivative of the log of the
    three-determinant ratio (joint over the product of the marginals); the
    arguments are sorted first, so swapping r1 and r2 reproduces the result
    bit for bit."""
    t, fd_step = float(t), float(fd_step)
    _validate_probe(t, fd_step)
    lo, hi = sorted((float(r1), float(r2)))
    if not (math.isfinite(lo) and 0.0 < lo < hi):
        raise DomainError("numeric_covariance: requires two distinct positive radii")
    if sign == "+":
        pair = Configuration(t=t, r=(0.0, lo, hi), gamma=(0.0, 0.0))
        one = Configuration(t=t, r=(0.0, lo), gamma=(0.0,))
        two = Configuration(t=t, r=(0.0, hi), gamma=(0.0,))

        def ln_ratio(s: float) -> float:
            g1, g2 = _double_weight(s), _single_weight(s)
            return (
                log_det(params, pair.replace_gamma((g1, g2)))
                - log_det(params, one.replace_gamma((g2,)))
                - log_det(params, two.replace_gamma((g2,)))
            )

    elif sign == "-":
        pair = Configuration(t=t, r=(-hi, 0.0, lo), gamma=(0.0, 0.0))
        one = Configuration(t=t, r=(-hi, 0.0), gamma=(0.0,))
        two = Configuration(t=t, r=(0.0, lo), gamma=(0.0,))

        def ln_ratio(s: float) -> float:
            g = _single_weight(s)
            return (
                log_det(params, pair.replace_gamma((g, g)))
                - log_det(params, one.replace_gamma((g,)))
                - log_det(params, two.replace_gamma((g,)))
            )

    else:
        raise DomainError('numeric_covariance: sign must be "+" or "-"')

    h = fd_step
    d2_h = (ln_ratio(h) + ln_ratio(-h)) / (h * h)
    d2_half = (ln_ratio(0.5 * h) + ln_ratio(-0.5 * h)) / (0.25 * h * h)
    value = (4.0 * d2_half - d2_h) / (6.0 * _TWO_PI**2)
    return MomentEstimate(value=value, fd_step=h, richardson_order=4)
