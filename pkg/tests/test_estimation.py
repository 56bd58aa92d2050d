"""Tail estimators: exactness, consistency between variants, reproducibility."""
import math

import numpy as np
import pytest

from ginibrenet.estimation import (TailEstimate, dominating_event_probe,
                                   estimate_count_tail,
                                   estimate_interference_tail,
                                   speed_regression, subexp_sum_ratio)
from ginibrenet.fading import FadingSpec
from ginibrenet.interference import DiskWindow, NetworkModel
from ginibrenet.patterns import RngStream
from ginibrenet.rates import LdpRegime
from ginibrenet.samplers import sample_beta_ginibre
from ginibrenet.spectral import DiskRestriction


def model(kind="exponential", **fkw):
    return NetworkModel(beta=1.0, window=DiskWindow(radius=2.0), receiver=0j,
                        atten_R=1.0, atten_alpha=4.0,
                        fading=FadingSpec(kind=kind, **fkw))


class TestCountTail:
    def test_exact_matches_monte_carlo(self):
        restriction = DiskRestriction(radius=2.0)
        counts = np.array([len(sample_beta_ginibre(1.0, 2.0, RngStream(60, i)))
                           for i in range(10_000)])
        for m in (2, 4, 6):
            exact = estimate_count_tail(restriction, m)
            emp = float(np.mean(counts >= m))
            se = math.sqrt(emp * (1 - emp) / len(counts))
            assert abs(exact.probability - emp) <= 3 * se + 1e-12
            assert exact.stderr == 0.0
            assert exact.diagnostics["exact_spectral"] == 1.0

    def test_trivial_cases(self):
        restriction = DiskRestriction(radius=1.0)
        assert estimate_count_tail(restriction, 0).probability == 1.0
        with pytest.raises(ValueError):
            estimate_count_tail(restriction, -1)


class TestEstimatorConsistency:
    def test_tilt_zero_bit_identical_to_crude(self):
        m = model()
        crude = estimate_interference_tail(m, 3.0, 400, "crude", RngStream(70))
        tilted = estimate_interference_tail(m, 3.0, 400, "tilted", RngStream(70),
                                            tilt=0.0)
        assert tilted.probability == crude.probability
        assert tilted.stderr == crude.stderr

    def test_reproducible_given_seed(self):
        m = model()
        a = estimate_interference_tail(m, 3.0, 300, "tilted", RngStream(71))
        b = estimate_interference_tail(m, 3.0, 300, "tilted", RngStream(71))
        assert a.probability == b.probability and a.stderr == b.stderr

    def test_tilted_matches_crude_within_error(self):
        m = model()
        crude = estimate_interference_tail(m, 4.0, 30_000, "crude", RngStream(72))
        tilted = estimate_interference_tail(m, 4.0, 4000, "tilted", RngStream(73))
        tol = 3 * (crude.stderr + tilted.stderr)
        assert abs(crude.probability - tilted.probability) <= tol

    def test_single_jump_matches_crude_within_error(self):
        m = model(kind="pareto", c=2.0)
        crude = estimate_interference_tail(m, 8.0, 30_000, "crude", RngStream(74))
        sj = estimate_interference_tail(m, 8.0, 8000, "single_jump", RngStream(75))
        tol = 3 * (crude.stderr + sj.stderr)
        assert abs(crude.probability - sj.probability) <= tol

    def test_monotone_in_x_with_ci_widening(self):
        m = model()
        ests = [estimate_interference_tail(m, x, 3000, "tilted", RngStream(76, i))
                for i, x in enumerate((2.0, 4.0, 6.0))]
        for a, b in zip(ests, ests[1:]):
            assert b.probability <= a.probability + 3 * (a.stderr + b.stderr)

    def test_estimator_fading_compatibility(self):
        with pytest.raises(ValueError, match="tilted"):
            estimate_interference_tail(model(kind="pareto", c=2.0), 1.0, 10,
                                       "tilted", RngStream(0))
        with pytest.raises(ValueError, match="single_jump"):
            estimate_interference_tail(model(kind="bounded"), 1.0, 10,
                                       "single_jump", RngStream(0))
        with pytest.raises(ValueError, match="unknown estimator"):
            estimate_interference_tail(model(), 1.0, 10, "mlmc", RngStream(0))

    def test_zero_hit_flagged(self):
        est = estimate_interference_tail(model(), 500.0, 50, "crude", RngStream(77))
        assert est.probability == 0.0
        assert est.log_probability == -math.inf
        assert est.diagnostics.get("zero_hits") == 1.0

    def test_unknown_estimator_name_in_record(self):
        with pytest.raises(ValueError):
            TailEstimate(probability=0.5, stderr=0.0, ci95=(0.5, 0.5),
                         n_reps=1, estimator="bogus", log_probability=-0.7)


class TestSpeedRegression:
    def test_degenerate_grid_rejected(self):
        m = model()
        regime = LdpRegime.from_fading(m.fading, m.atten_R, m.atten_alpha)
        with pytest.raises(ValueError):
            speed_regression(m, regime, [2.0, 3.0], 100, "crude", RngStream(0))
        with pytest.raises(ValueError, match="increasing"):
            speed_regression(m, regime, [3.0, 2.0, 4.0], 100, "crude", RngStream(0))

    def test_zero_hit_points_dropped(self):
        m = model()
        regime = LdpRegime.from_fading(m.fading, m.atten_R, m.atten_alpha)
        report = speed_regression(m, regime, [2.0, 3.0, 4.0, 300.0], 800,
                                  "crude", RngStream(80))
        assert 300.0 in report.dropped_points
        assert len(report.x_grid) == 3

    def test_all_points_dead_is_error(self):
        m = model()
        regime = LdpRegime.from_fading(m.fading, m.atten_R, m.atten_alpha)
        with pytest.raises(ValueError, match="at least 3"):
            speed_regression(m, regime, [200.0, 300.0, 400.0], 50, "crude",
                             RngStream(81))


class TestSubexpRatio:
    def test_requires_subexponential_fading(self):
        with pytest.raises(ValueError, match="subexponential"):
            subexp_sum_ratio(model(), [1.0, 2.0], 100, RngStream(0))

    def test_small_x_diagnostic_only(self):
        # near zero the asymptotic formula is inapplicable; the value is a
        # diagnostic and only its finiteness/positivity is guaranteed
        m = model(kind="pareto", c=2.0)
        ratios = subexp_sum_ratio(m, [0.01], 2000, RngStream(82))
        assert ratios[0] > 0.0 and not (ratios[0] != ratios[0])


class TestDominatingEventProbe:
    def test_receiver_near_boundary_rejected(self):
        m = NetworkModel(beta=1.0, window=DiskWindow(radius=2.0),
                         receiver=1.999 + 0j, atten_R=1.0, atten_alpha=4.0,
                         fading=FadingSpec(kind="exponential", c=1.0))
        with pytest.raises(ValueError, match="boundary"):
            dominating_event_probe(m, 1.0, 1.0, RngStream(0), n_reps=10)

    def test_block_size_precondition(self):
        with pytest.raises(ValueError, match="at least 1"):
            dominating_event_probe(model(), 1.0, 1.0, RngStream(0), n_reps=10,
                                   block_n=0)

    def test_exponential_probe_fields(self):
        probe = dominating_event_probe(model(), 1.0, 1.0, RngStream(83),
                                       n_reps=2000)
        assert probe.block_n == 1
        assert 0.0 < probe.ball_radius <= 0.99
        assert 0.0 <= probe.p_block <= 1.0
        assert 0.0 <= probe.p_single <= 1.0


class TestCrudeUnbiasedness:
    def test_mean_of_crude_estimates_matches_tilted(self):
        m = model()
        x = 4.0
        crude_means = [estimate_interference_tail(m, x, 600, "crude",
                                                  RngStream(84, i)).probability
                       for i in range(100)]
        pooled = float(np.mean(crude_means))
        pooled_se = float(np.std(crude_means) / math.sqrt(len(crude_means)))
        tilted = estimate_interference_tail(m, x, 6000, "tilted", RngStream(85))
        assert abs(pooled - tilted.probability) <= 3 * (pooled_se + tilted.stderr)
