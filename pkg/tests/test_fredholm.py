"""Tests for the Nystrom determinant and its trace-series oracle."""

import math

import numpy as np
import pytest

from chfdet.errors import DomainError, RegimeError
from chfdet.fredholm import (
    build_grid,
    default_grading_levels,
    log_det,
    log_det_series_oracle,
)
from chfdet.kernel import Configuration, KernelParams

SINE = KernelParams(0.0, 0.0)


def single_interval(gamma, t):
    return Configuration(r=(0.0, 1.0), gamma=(gamma,), t=t, m=0)


class TestBuildGrid:
    def test_single_interval_no_grading(self):
        c = single_interval(0.5, 1.0)
        g = build_grid(c, order_per_panel=16, grading_levels=0)
        assert len(g.panels) == 1
        lo, hi, xs, ws = g.panels[0]
        assert (lo, hi) == (0.0, 1.0)
        assert g.total_order == 16

    def test_graded_panel_layout(self):
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.3), t=1.0)
        g = build_grid(c, order_per_panel=8, grading_levels=3)
        spans = [(p[0], p[1]) for p in g.panels]
        assert spans == [
            (-1.0, -0.25),
            (-0.25, -0.0625),
            (-0.0625, 0.0),
            (0.0, 0.0625),
            (0.0625, 0.25),
            (0.25, 1.0),
        ]

    def test_weights_sum_to_total_length(self):
        c = Configuration(r=(-2.0, 0.0, 1.0, 3.0), gamma=(0.1, 0.2, 0.3), t=1.5)
        g = build_grid(c, order_per_panel=24, grading_levels=4)
        assert math.isclose(float(np.sum(g.weights)), 5.0 * 1.5, rel_tol=1e-14)

    def test_nodes_strictly_inside_panels(self):
        c = Configuration(r=(-1.0, 0.0, 2.0), gamma=(0.4, 0.4), t=0.7)
        g = build_grid(c, order_per_panel=12, grading_levels=5)
        for lo, hi, xs, ws in g.panels:
            assert np.all(xs > lo) and np.all(xs < hi)
        assert not np.any(g.nodes == 0.0)

    def test_panels_scale_with_t(self):
        c = Configuration(r=(0.0, 1.0), gamma=(0.5,), t=3.0, m=0)
        g = build_grid(c, order_per_panel=8, grading_levels=2)
        assert g.panels[0][0] == 0.0
        assert g.panels[-1][1] == 3.0

    def test_order_validation(self):
        c = single_interval(0.5, 1.0)
        with pytest.raises(DomainError):
            build_grid(c, order_per_panel=3)

    def test_grading_validation(self):
        c = single_interval(0.5, 1.0)
        with pytest.raises(DomainError):
            build_grid(c, grading_levels=-1)

    def test_empty_domain_rejected(self):
        c = single_interval(0.5, 0.0)
        with pytest.raises(DomainError):
            build_grid(c)

    def test_default_grading_levels(self):
        assert default_grading_levels(KernelParams(0.0, 0.0)) == 0
        assert default_grading_levels(KernelParams(0.0, 0.4)) == 0
        assert default_grading_levels(KernelParams(-0.25, 0.0)) == 23
        assert default_grading_levels(KernelParams(0.5, 0.0)) == 7
        assert default_grading_levels(KernelParams(-0.45, 0.0)) == 60


class TestLogDet:
    def test_zero_weights_give_zero(self):
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.0, 0.0), t=2.0)
        assert log_det(SINE, c) == 0.0

    def test_zero_t_gives_zero(self):
        assert log_det(SINE, single_interval(0.7, 0.0)) == 0.0

    def test_small_t_first_trace(self):
        c = single_interval(0.5, 0.01)
        expected = -0.5 * 0.01 / math.pi
        assert abs(log_det(SINE, c) - expected) < 2e-6

    def test_order_doubling_at_large_t(self):
        c = single_interval(0.5, 10.0)
        v40 = log_det(SINE, c, grid=build_grid(c, order_per_panel=40))
        v80 = log_det(SINE, c, grid=build_grid(c, order_per_panel=80))
        assert abs(v40 - v80) < 1e-10
        assert v80 < log_det(SINE, single_interval(0.5, 0.5)) < 0.0

    def test_self_convergence_geometric(self):
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.6), t=8.0)
        v8 = log_det(SINE, c, grid=build_grid(c, order_per_panel=8))
        v16 = log_det(SINE, c, grid=build_grid(c, order_per_panel=16))
        v32 = log_det(SINE, c, grid=build_grid(c, order_per_panel=32))
        d1 = abs(v8 - v16)
        d2 = abs(v16 - v32)
        assert d1 < 1e-6
        assert d2 <= 0.25 * d1 + 1e-13

    def test_graded_self_convergence_negative_alpha(self):
        p = KernelParams(-0.25, 0.4)
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.6), t=5.0)
        vals = {
            levels: log_det(p, c, grid=build_grid(c, grading_levels=levels))
            for levels in (18, 22, 26)
        }
        d1 = abs(vals[18] - vals[22])
        d2 = abs(vals[22] - vals[26])
        assert d1 < 1e-6
        assert d2 <= 0.25 * d1

    def test_monotone_in_gamma(self):
        vals = [log_det(SINE, single_interval(g, 1.0)) for g in (0.2, 0.5, 0.8)]
        assert vals[0] > vals[1] > vals[2]

    def test_gap_probability_reduction(self):
        p = KernelParams(0.5, 0.4)
        split = Configuration(r=(0.0, 1.0, 2.0), gamma=(0.4, 0.4), t=1.5, m=0)
        merged = Configuration(r=(0.0, 2.0), gamma=(0.4,), t=1.5, m=0)
        assert abs(log_det(p, split) - log_det(p, merged)) < 1e-10

    def test_translation_invariance_of_sine(self):
        centered = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.45, 0.45), t=2.0)
        shifted = Configuration(r=(0.0, 2.0), gamma=(0.45,), t=2.0, m=0)
        assert abs(log_det(SINE, centered) - log_det(SINE, shifted)) < 1e-10

    def test_negative_weight_increases_determinant(self):
        c = single_interval(-0.5, 0.2)
        assert log_det(SINE, c) > 0.0


class TestSeriesOracle:
    def test_zero_weights(self):
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.0, 0.0), t=1.0)
        assert log_det_series_oracle(SINE, c) == 0.0

    def test_one_term_is_diagonal_integral(self):
        c = single_interval(0.5, 0.7)
        v = log_det_series_oracle(SINE, c, terms=1)
        assert abs(v + 0.5 * 0.7 / math.pi) < 1e-13

    def test_terms_validation(self):
        c = single_interval(0.5, 0.1)
        with pytest.raises(DomainError):
            log_det_series_oracle(SINE, c, terms=0)
        with pytest.raises(DomainError):
            log_det_series_oracle(SINE, c, terms=9)

    @pytest.mark.parametrize(
        "params, config, terms",
        [
            (SINE, single_interval(0.3, 0.2), 4),
            (SINE, Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.6), t=0.3), 8),
            (KernelParams(0.5, 0.4), Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.6), t=0.2), 6),
            (SINE, single_interval(-0.5, 0.2), 6),
        ],
    )
    def test_agrees_with_lu_within_bound(self, params, config, terms):
        value, bound = log_det_series_oracle(params, config, terms=terms, return_bound=True)
        lu = log_det(params, config)
        assert abs(value - lu) <= bound
        assert bound < 1e-8

    def test_cross_oracle_example(self):
        c = single_interval(0.3, 0.2)
        v = log_det_series_oracle(SINE, c, terms=4)
        assert abs(v - log_det(SINE, c)) < 1e-9

    def test_negative_alpha_bound_is_honest(self):
        p = KernelParams(-0.25, 0.4)
        c = Configuration(r=(-1.0, 0.0, 1.0), gamma=(0.3, 0.6), t=0.2)
        value, bound = log_det_series_oracle(p, c, terms=6, return_bound=True)
        accurate = log_det(p, c, grid=build_grid(c, grading_levels=26))
        assert abs(value - accurate) <= bound

    def test_norm_gate(self):
        c = single_interval(0.99, 6.0)
        with pytest.raises(RegimeError):
            log_det_series_oracle(SINE, c, terms=8)

    def test_tolerance_gate(self):
        c = single_interval(0.5, 0.3)
        with pytest.raises(RegimeError):
            log_det_series_oracle(SINE, c, terms=3, tol=1e-15)
        value = log_det_series_oracle(SINE, c, terms=5, tol=1e-6)
        assert math.isfinite(value)
