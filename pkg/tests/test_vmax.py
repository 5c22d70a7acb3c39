import math
import unittest

import numpy as np
import pytest

from core.luequiv import canonicalize_maximizer
from core.qstate import AVector
from optimize.critpoint import vandermonde_f
from optimize.vmax import (
    VnConfig,
    _to_params,
    candidate_config,
    canonicalize,
    certified_value,
    criticality_residual_n,
    lambda_n,
    maximize_det_a,
    maximize_vn,
    objective_gradient,
    objective_value,
    snap_config,
    sweep,
    vandermonde_n,
)
from utils.constants import DEFAULT_N7_RESTARTS, MAX_ABS_DET
from utils.errors import DomainError
from utils.helpers import relative_gap


class TestLambda(unittest.TestCase):
    def test_known_values(self):
        self.assertEqual(lambda_n(2), 1.0)
        self.assertAlmostEqual(lambda_n(3), 0.25, places=15)
        self.assertLess(relative_gap(lambda_n(4), 3.0 ** -4.5), 1e-14)
        self.assertLess(relative_gap(lambda_n(7), 6.0 ** -18), 1e-12)

    def test_n_too_small(self):
        with self.assertRaises(ValueError):
            lambda_n(1)

    def test_candidate_reaches_lambda(self):
        """La configuration polygone + origine atteint lambda_n"""
        for n in range(3, 9):
            config = candidate_config(n)
            self.assertLess(config.constraint_residual(), 1e-14)
            self.assertLess(relative_gap(abs(vandermonde_n(config)), lambda_n(n)), 1e-10)

    def test_candidate_is_critical(self):
        for n in range(3, 9):
            self.assertLess(criticality_residual_n(candidate_config(n)), 1e-10)

    def test_candidate_needs_three_points(self):
        with self.assertRaises(ValueError):
            candidate_config(2)


class TestVandermondeN(unittest.TestCase):
    def test_two_points(self):
        self.assertEqual(vandermonde_n([0.5, -0.5]), -1.0)

    def test_single_point_rejected(self):
        with self.assertRaises(ValueError):
            vandermonde_n([1.0])

    def test_config_needs_two_points(self):
        with self.assertRaises(DomainError):
            VnConfig(np.array([1.0]))

    def test_two_point_family(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            z0 = rng.uniform(0.05, 1.0) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            z1 = z0 - z0 / abs(z0)
            self.assertAlmostEqual(abs(z0) + abs(z1), 1.0, places=14)
            self.assertAlmostEqual(abs(vandermonde_n([z0, z1])), 1.0, places=14)

    def test_matches_four_point_f(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            z = rng.normal(size=4) + 1j * rng.normal(size=4)
            self.assertLess(relative_gap(abs(vandermonde_n(z)), abs(vandermonde_f(z))), 1e-12)

    def test_coincident_points_not_critical(self):
        self.assertEqual(criticality_residual_n([0.25, 0.25, -0.5]), float("inf"))


class TestObjective(unittest.TestCase):
    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(41)
        n = 5
        for _ in range(5):
            x = np.concatenate([rng.uniform(0.3, 1.0, size=n), rng.uniform(0, 2 * np.pi, size=n - 1)])
            grad = objective_gradient(x, n)
            h = 1e-6
            numeric = np.zeros_like(x)
            for i in range(x.size):
                step = np.zeros_like(x)
                step[i] = h
                numeric[i] = (objective_value(x + step, n) - objective_value(x - step, n)) / (2 * h)
            np.testing.assert_allclose(grad, numeric, atol=1e-5)

    def test_gradient_vanishes_at_candidate(self):
        x = _to_params(candidate_config(4).points)
        self.assertLess(float(np.linalg.norm(objective_gradient(x, 4))), 1e-8)

    def test_value_is_minus_log(self):
        x = _to_params(candidate_config(4).points)
        self.assertAlmostEqual(objective_value(x, 4), -math.log(lambda_n(4)), places=10)


class TestCanonical(unittest.TestCase):
    def test_snap_zeroes_small_radii(self):
        z = snap_config(np.array([0.5, 1e-12, -0.5]))
        self.assertEqual(z[1], 0)
        self.assertAlmostEqual(float(np.sum(np.abs(z))), 1.0, places=15)

    def test_rotation_invariant(self):
        base = canonicalize(candidate_config(5)).points
        rotated = canonicalize(candidate_config(5).points * np.exp(0.7j)).points
        np.testing.assert_allclose(rotated, base, atol=1e-9)

    def test_permutation_invariant(self):
        """L'ordre et la rotation des points ne changent pas la forme canonique"""
        base = canonicalize(candidate_config(4)).points
        rng = np.random.default_rng(41)
        for _ in range(50):
            moved = rng.permutation(candidate_config(4).points) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            np.testing.assert_allclose(canonicalize(moved).points, base, atol=1e-9)

    def test_largest_point_is_real_positive(self):
        z = canonicalize(np.array([0.1j, -0.5, 0.4j])).points
        self.assertEqual(z[0], 0.5)

    def test_certified_value(self):
        self.assertAlmostEqual(float(certified_value(candidate_config(3))), 0.25, places=14)


class TestMaximize(unittest.TestCase):
    def test_two_points(self):
        report = maximize_vn(2, restarts=4, seed=0)
        self.assertAlmostEqual(report.best_value, 1.0, places=9)

    def test_three_points(self):
        report = maximize_vn(3, restarts=10, seed=1)
        self.assertAlmostEqual(report.best_value, 0.25, places=8)
        self.assertLess(abs(report.ratio - 1.0), 1e-7)

    def test_four_points(self):
        report = maximize_vn(4, restarts=10, seed=2)
        self.assertLess(relative_gap(report.best_value, 3.0 ** -4.5), 1e-6)
        self.assertLess(report.criticality_residual, 1e-5)
        self.assertGreaterEqual(report.converged_restarts, 1)

    def test_deterministic(self):
        """Même graine, même résultat, quel que soit le nombre de threads"""
        a = maximize_vn(4, restarts=6, seed=3)
        b = maximize_vn(4, restarts=6, seed=3)
        c = maximize_vn(4, restarts=6, seed=3, threads=2)
        self.assertEqual(a.best_value, b.best_value)
        self.assertEqual(a.restart_values, c.restart_values)
        np.testing.assert_array_equal(a.best_config.points, c.best_config.points)

    def test_more_restarts_never_worse(self):
        for seed in (0, 5):
            few = maximize_vn(4, restarts=4, seed=seed)
            many = maximize_vn(4, restarts=8, seed=seed)
            self.assertEqual(many.restart_values[:4], few.restart_values)
            self.assertGreaterEqual(many.best_value, few.best_value * (1 - 1e-12))

    def test_near_maximizers_kept(self):
        report = maximize_vn(3, restarts=6, seed=0)
        self.assertGreaterEqual(len(report.restart_configs), 1)
        for config in report.restart_configs:
            self.assertGreaterEqual(abs(vandermonde_n(config)), report.best_value * (1 - 1e-6))

    def test_report_dict(self):
        report = maximize_vn(3, restarts=2, seed=0)
        payload = report.to_dict()
        self.assertEqual(payload["n"], 3)
        self.assertEqual(len(payload["best_config"]), 3)
        self.assertIn("certified_value", payload)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            maximize_vn(1)
        with self.assertRaises(ValueError):
            maximize_vn(3, restarts=0)
        with self.assertRaises(ValueError):
            maximize_vn(3, tol=0)

    def test_det_a_maximum(self):
        z, abs_det, report = maximize_det_a(restarts=20, seed=0)
        self.assertAlmostEqual(z.norm(), 1.0, places=9)
        self.assertLess(relative_gap(abs_det, MAX_ABS_DET), 1e-6)
        self.assertEqual(report.n, 4)
        self.assertGreaterEqual(len(report.restart_configs), 1)
        for found in report.restart_configs:
            _, transcript = canonicalize_maximizer(AVector(np.sqrt(found.points)), tolerance=1e-6)
            self.assertIn(transcript.target, ("L", "Lprime"))

    @pytest.mark.slow
    def test_seven_points_beat_candidate(self):
        report = maximize_vn(7, restarts=DEFAULT_N7_RESTARTS, seed=0)
        self.assertGreater(report.ratio, 1 + 1e-6)


class TestSweep(unittest.TestCase):
    def test_frame(self):
        frame = sweep(2, 4, restarts=4, seed=0)
        self.assertEqual(list(frame["n"]), [2, 3, 4])
        self.assertIn("ratio", frame.columns)
        self.assertTrue((frame["ratio"] > 1 - 1e-6).all())

    def test_invalid_range(self):
        with self.assertRaises(ValueError):
            sweep(4, 3)
        with self.assertRaises(ValueError):
            sweep(1, 3)


if __name__ == '__main__':
    unittest.main()
