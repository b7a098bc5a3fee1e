"""Tests for the closed-form expansion module."""

import cmath
import math

import numpy as np
import pytest

from chfdet.asymptotics import (
    b_from_gamma,
    c_from_gamma,
    h_from_gamma,
    large_gap_lnF,
    moment_asymptotics,
    small_t_lnF,
    symmetric_counting_asymptotics,
)
from chfdet.errors import DomainError
from chfdet.fredholm import build_grid, log_det
from chfdet.kernel import Configuration, KernelParams
from chfdet.specialfn import EULER_GAMMA, log_barnes_g, log_barnes_g_d2


def _cfg(r, gamma, t):
    return Configuration(r=r, gamma=gamma, t=t)


class TestExponentMaps:
    def test_zero_weights_give_zero_b_and_side_c(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        cfg = _cfg((-1.0, 0.0, 1.0), (0.0, 0.0), 2.0)
        bs = b_from_gamma(cfg)
        assert all(b == 0.0 for b in bs)
        cs = c_from_gamma(cfg, params)
        assert cs[0] == 0.0 and cs[2] == 0.0
        # the middle coefficient couples the unit weights and stays nonzero
        a, b = params.alpha, params.beta
        expected_cm = cmath.exp((a + b) * math.pi * 1j) - cmath.exp(-(a + b) * math.pi * 1j)
        assert cs[1] == pytest.approx(expected_cm, abs=1e-15)

    def test_single_interval_b_telescopes(self):
        g = 0.37
        cfg = _cfg((0.0, 1.0), (g,), 1.0)
        bs = b_from_gamma(cfg)
        two_pi_i = 2j * math.pi
        assert bs[0] == pytest.approx(cmath.log(1.0 / (1.0 - g)) / two_pi_i, abs=1e-16)
        assert bs[1] == pytest.approx(cmath.log(1.0 - g) / two_pi_i, abs=1e-16)
        assert bs[0] + bs[1] == pytest.approx(0.0, abs=1e-16)

    def test_b_sum_vanishes_and_is_purely_imaginary(self):
        cfg = _cfg((-1.0, 0.0, 1.0), (0.3, 0.6), 2.0)
        bs = b_from_gamma(cfg)
        assert all(b.real == 0.0 for b in bs)
        assert abs(sum(bs)) <= 1e-15

    def test_unit_weight_rejected(self):
        cfg = _cfg((0.0, 1.0), (1.0,), 1.0)
        with pytest.raises(DomainError):
            b_from_gamma(cfg)
        with pytest.raises(DomainError):
            c_from_gamma(cfg, KernelParams(alpha=0.0, beta_im=0.0))

    def test_side_coefficients_match_weight_differences(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        b = params.beta
        cfg = _cfg((-1.0, 0.0, 1.0), (0.3, 0.6), 2.0)
        cs = c_from_gamma(cfg, params)
        two_pi_i = 2j * math.pi
        assert cs[0] == pytest.approx(
            (0.0 - 0.3) / two_pi_i * cmath.exp(b * math.pi * 1j), abs=1e-16
        )
        assert cs[2] == pytest.approx(
            (0.0 - 0.6) / two_pi_i * cmath.exp(-b * math.pi * 1j), abs=1e-16
        )
        assert cs[1] == pytest.approx(
            (1.0 - 0.3) * cmath.exp((0.25 + b) * math.pi * 1j)
            - (1.0 - 0.6) * cmath.exp(-(0.25 + b) * math.pi * 1j),
            abs=1e-15,
        )

    def test_counting_exponents_flip_sign_left_of_origin(self):
        cfg = _cfg((-2.0, -1.0, 0.0, 1.0), (0.2, 0.5, 0.4), 2.0)
        bs = b_from_gamma(cfg)
        hs = h_from_gamma(cfg)
        m = cfg.m
        for j in range(len(cfg.r)):
            expected = -bs[j] if j <= m else bs[j]
            assert hs[j] == expected


def _corollary_closed_form(g, t, alpha, beta_im):
    c = -math.log(1.0 - g) / (2.0 * math.pi)
    barnes = log_barnes_g(1j * c) + log_barnes_g(-1j * c)
    return (
        -4.0 * c * t
        + 2.0 * c * c * math.log(4.0 * t)
        + 2.0 * alpha * math.pi * c
        + 2.0 * barnes.real
    )


class TestLargeGap:
    def test_zero_weights_give_zero_report(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        rep = large_gap_lnF(params, _cfg((-1.0, 0.0, 1.0), (0.0, 0.0), 5.0))
        assert rep.linear_term == 0.0
        assert rep.log_term == 0.0
        assert rep.constant_term == 0.0
        assert rep.total == 0.0
        assert all(v == 0.0 for _, v in rep.breakdown)

    def test_symmetric_two_interval_closed_form(self):
        rng = np.random.default_rng(20260815)
        for _ in range(50):
            g = float(rng.uniform(0.05, 0.95))
            t = float(rng.uniform(1.0, 30.0))
            alpha = float(rng.uniform(-0.4, 1.5))
            beta_im = float(rng.uniform(-0.8, 0.8))
            params = KernelParams(alpha=alpha, beta_im=beta_im)
            rep = large_gap_lnF(params, _cfg((-1.0, 0.0, 1.0), (g, g), t))
            assert rep.total == pytest.approx(
                _corollary_closed_form(g, t, alpha, beta_im), abs=1e-12
            )

    def test_pure_sine_limit_closed_form(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        t = 7.0
        cfg = _cfg((-1.0, 0.0, 1.0), (0.3, 0.5), t)
        rep = large_gap_lnF(params, cfg)
        bs = b_from_gamma(cfg)
        r = cfg.r
        expected = 0.0
        for k in (0, 2):
            expected += (2j * bs[k] * r[k] * t).real
            expected += (-2.0 * bs[k] * bs[k]).real * math.log(abs(2.0 * r[k] * t))
        expected += (-2.0 * bs[0] * bs[2]).real * math.log(
            abs(2.0 * r[0] * r[2] * t / (r[2] - r[0]))
        )
        for k in (0, 1, 2):
            expected += (log_barnes_g(bs[k]) + log_barnes_g(-bs[k])).real
        assert rep.total == pytest.approx(expected, abs=1e-12)

    def test_breakdown_sums_to_reported_terms(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        rep = large_gap_lnF(params, _cfg((-1.5, 0.0, 0.7, 2.0), (0.3, 0.6, 0.2), 9.0))
        total_breakdown = math.fsum(v for _, v in rep.breakdown)
        reported = math.fsum((rep.linear_term, rep.log_term, rep.constant_term))
        assert abs(total_breakdown - reported) <= 8.0 * math.ulp(max(1.0, abs(reported)))
        names = [name for name, _ in rep.breakdown]
        assert names == [
            "linear",
            "interval_log",
            "pair_log",
            "interval_const",
            "pair_const",
            "weight_factor",
            "barnes_center",
            "barnes_jumps",
        ]

    def test_fields_are_real_floats(self):
        params = KernelParams(alpha=-0.25, beta_im=0.4)
        rep = large_gap_lnF(params, _cfg((-2.0, -1.0, 0.0, 1.0), (0.2, 0.7, 0.4), 6.0))
        for value in (rep.linear_term, rep.log_term, rep.constant_term, rep.total):
            assert isinstance(value, float)
            assert math.isfinite(value)

    def test_narrow_gap_warns(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        rep = large_gap_lnF(params, _cfg((-0.01, 0.0, 1.0), (0.3, 0.3), 5.0))
        assert rep.warnings and "gap" in rep.warnings[0]
        rep_wide = large_gap_lnF(params, _cfg((-1.0, 0.0, 1.0), (0.3, 0.3), 5.0))
        assert rep_wide.warnings == ()

    def test_zero_t_rejected(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        with pytest.raises(DomainError):
            large_gap_lnF(params, _cfg((-1.0, 0.0, 1.0), (0.3, 0.3), 0.0))

    def test_residual_against_determinant_decays(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        deltas = {}
        for t in (8.0, 16.0):
            cfg = _cfg((-1.0, 0.0, 1.0), (0.3, 0.3), t)
            pred = large_gap_lnF(params, cfg).total
            exact = log_det(params, cfg, grid=build_grid(cfg, order_per_panel=96))
            deltas[t] = abs(exact - pred)
        assert deltas[8.0] <= 0.02
        assert deltas[16.0] <= 0.6 * deltas[8.0]


class TestSmallT:
    def test_zero_weights_and_zero_t(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        assert small_t_lnF(params, _cfg((-1.0, 0.0, 1.0), (0.0, 0.0), 1.0), 0.01) == 0.0
        assert small_t_lnF(params, _cfg((-1.0, 0.0, 1.0), (0.3, 0.6), 1.0), 0.0) == 0.0

    def test_sine_single_interval_value(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        cfg = _cfg((0.0, 1.0), (0.5,), 1.0)
        t = 0.01
        assert small_t_lnF(params, cfg, t) == pytest.approx(-0.5 * t / math.pi, rel=1e-14)

    def test_matches_determinant_at_small_t(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        t = 1e-3
        cfg = _cfg((-1.0, 0.0, 1.0), (0.3, 0.6), t)
        predicted = small_t_lnF(params, cfg, t)
        exact = log_det(params, cfg)
        assert predicted == pytest.approx(exact, rel=0.05)

    def test_negative_t_rejected(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        with pytest.raises(DomainError):
            small_t_lnF(params, _cfg((0.0, 1.0), (0.5,), 1.0), -1.0)


class TestMoments:
    def test_plain_sine_mean_and_variance(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        t, r1 = 10.0, 1.0
        mom = moment_asymptotics(params, t, r1, 2.0)
        assert mom.mean_right == pytest.approx(t * r1 / math.pi, abs=1e-14)
        assert mom.mean_left == pytest.approx(t * r1 / math.pi, abs=1e-14)
        expected_var = (math.log(2.0 * t * r1) + 1.0 + EULER_GAMMA) / math.pi**2
        assert mom.var == pytest.approx(expected_var, rel=1e-14)

    def test_mean_sum_recovers_symmetric_count(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            alpha = float(rng.uniform(-0.4, 1.5))
            beta_im = float(rng.uniform(-0.8, 0.8))
            t = float(rng.uniform(2.0, 40.0))
            params = KernelParams(alpha=alpha, beta_im=beta_im)
            mom = moment_asymptotics(params, t, 1.0, 1.5)
            mean0, _ = symmetric_counting_asymptotics(params, t)
            assert mom.mean_right + mom.mean_left == pytest.approx(mean0, abs=1e-12)
            assert mean0 == pytest.approx(2.0 * t / math.pi - alpha, abs=1e-13)

    def test_variance_covariance_combination_is_parameter_free(self):
        t, r1, r2 = 12.0, 1.0, 1.7
        base = moment_asymptotics(KernelParams(alpha=0.0, beta_im=0.0), t, r1, r2)
        reference = base.var + base.var + 2.0 * base.cov_opposite
        rng = np.random.default_rng(11)
        for _ in range(20):
            params = KernelParams(
                alpha=float(rng.uniform(-0.4, 1.5)), beta_im=float(rng.uniform(-0.8, 0.8))
            )
            mom = moment_asymptotics(params, t, r1, r2)
            combined = mom.var + mom.var + 2.0 * mom.cov_opposite
            assert combined == pytest.approx(reference, abs=1e-12)

    def test_covariance_sum_reflects_pair_distances(self):
        # same-side intervals sit |x - y| apart, opposite-side ones x + y
        # apart; the constant terms cancel in the sum, leaving the distance
        # ratio
        params = KernelParams(alpha=0.25, beta_im=0.3)
        t, r1, r2 = 8.0, 1.0, 2.0
        mom = moment_asymptotics(params, t, r1, r2)
        x, y = t * r1, t * r2
        expected = math.log((x + y) / (y - x)) / (2.0 * math.pi**2)
        assert mom.cov_same + mom.cov_opposite == pytest.approx(expected, rel=1e-14)
        assert mom.cov_same + mom.cov_opposite > 0.0

    def test_coincident_limit_recovers_symmetric_count_variance(self):
        # as r2 -> r1 the pair N(t r1) + N(-t r2) fills a symmetric interval;
        # variance plus opposite-side covariance must close onto the
        # symmetric-count variance with no singular remainder
        params = KernelParams(alpha=0.25, beta_im=0.3)
        t = 10.0
        mom = moment_asymptotics(params, t, 1.0, 1.0 + 1e-9)
        combined = 2.0 * mom.var + 2.0 * mom.cov_opposite
        _, var0 = symmetric_counting_asymptotics(params, t)
        assert combined == pytest.approx(var0, abs=1e-8)

    def test_symmetric_count_closed_form(self):
        params = KernelParams(alpha=0.25, beta_im=0.3)
        t = 10.0
        mean, var = symmetric_counting_asymptotics(params, t)
        assert mean == pytest.approx(2.0 * t / math.pi - 0.25, abs=1e-14)
        assert var == pytest.approx(
            (math.log(4.0 * t) + 1.0 + EULER_GAMMA) / math.pi**2, rel=1e-14
        )
        assert log_barnes_g_d2(0.0).real == pytest.approx(-1.0 - EULER_GAMMA, abs=1e-14)

    def test_invalid_positions_rejected(self):
        params = KernelParams(alpha=0.0, beta_im=0.0)
        with pytest.raises(DomainError):
            moment_asymptotics(params, 5.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            moment_asymptotics(params, 5.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            moment_asymptotics(params, 0.0, 1.0, 2.0)
        with pytest.raises(DomainError):
            symmetric_counting_asymptotics(params, 0.0)
