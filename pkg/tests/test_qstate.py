import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from core.hyperdet import det_A
from core.qstate import (
    AVector,
    PolarA,
    QuartState,
    basis_u,
    embed_A,
    product_state,
    project_A,
    random_avector,
    random_state,
    square_map,
    state_L,
    state_Lprime,
)
from optimize.critpoint import vandermonde_f
from utils.constants import OMEGA
from utils.errors import DomainError

coordinate = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)


class TestQuartState(unittest.TestCase):
    def test_wrong_length_rejected(self):
        with self.assertRaises(DomainError):
            QuartState(np.zeros(15))

    def test_non_finite_rejected(self):
        amp = np.zeros(16, dtype=complex)
        amp[3] = np.nan
        with self.assertRaises(DomainError):
            QuartState(amp)

    def test_normalize_zero_state(self):
        with self.assertRaises(DomainError):
            QuartState(np.zeros(16)).normalize()

    def test_normalize(self):
        psi = random_state(np.random.default_rng(3), normalized=False).normalize()
        self.assertTrue(psi.check_normalized())
        self.assertTrue(psi.normalized)

    def test_basis_index_range(self):
        self.assertEqual(QuartState.basis(5).amp[5], 1.0)
        with self.assertRaises(DomainError):
            QuartState.basis(16)

    def test_product_state_is_basis_vector(self):
        psi = product_state([[1, 0], [0, 1], [1, 0], [0, 1]])
        np.testing.assert_allclose(psi.amp, QuartState.basis(0b0101).amp)

    def test_amplitudes_are_read_only(self):
        psi = QuartState.basis(0)
        with self.assertRaises(ValueError):
            psi.amp[0] = 2.0


class TestSubspaceA(unittest.TestCase):
    def test_u_basis_orthonormal(self):
        """La base u est orthonormée"""
        for j in range(4):
            for k in range(4):
                expected = 1.0 if j == k else 0.0
                self.assertAlmostEqual(abs(basis_u(j).inner(basis_u(k))), expected, places=14)

    def test_u_basis_index_range(self):
        with self.assertRaises(DomainError):
            basis_u(4)

    def test_u0_amplitudes(self):
        amp = basis_u(0).amp
        for index in (0b0000, 0b0011, 0b1100, 0b1111):
            self.assertAlmostEqual(amp[index], 0.5)
        self.assertAlmostEqual(float(np.sum(np.abs(amp))), 2.0)

    def test_project_recovers_coordinates(self):
        z = AVector([1 + 2j, -0.5, 0.25j, 3.0])
        back, residual = project_A(embed_A(z))
        np.testing.assert_allclose(back.z, z.z, atol=1e-14)
        self.assertLess(residual, 1e-14)

    def test_project_of_outside_state_has_residual(self):
        _, residual = project_A(QuartState.basis(0b0001))
        self.assertAlmostEqual(residual, 1.0, places=12)

    @given(st.lists(coordinate, min_size=8, max_size=8))
    @settings(max_examples=50, deadline=None)
    def test_embedding_is_isometric(self, values):
        z = AVector(np.array(values[:4]) + 1j * np.array(values[4:]))
        self.assertAlmostEqual(embed_A(z).norm(), z.norm(), places=12)


class TestNamedStates(unittest.TestCase):
    def test_L_is_unit(self):
        self.assertAlmostEqual(state_L().norm(), 1.0, places=15)
        self.assertAlmostEqual(state_Lprime().norm(), 1.0, places=15)

    def test_L_squares_on_triangle(self):
        """Les carrés de L forment un triangle équilatéral de rayon 1/3"""
        sq = square_map(state_L())
        np.testing.assert_allclose(sq.z[:3], np.array([1, OMEGA**2, OMEGA**4]) / 3, atol=1e-15)
        self.assertEqual(sq[3], 0)
        self.assertAlmostEqual(sq.radius_sum(), 1.0, places=15)

    def test_L_and_Lprime_differ(self):
        self.assertGreater(float(np.max(np.abs(state_L().z - state_Lprime().z))), 0.5)

    def test_square_map_examples(self):
        sq = square_map([1, 1j, -1, -1j])
        np.testing.assert_allclose(sq.z, [1, -1, 1, -1], atol=1e-15)
        np.testing.assert_array_equal(square_map(np.zeros(4)).z, np.zeros(4))

    def test_det_A_is_square_of_f(self):
        """det_A(z) = f(Q(z))^2"""
        rng = np.random.default_rng(31)
        for _ in range(1000):
            z = random_avector(rng)
            d = det_A(z)
            self.assertLess(abs(d - vandermonde_f(square_map(z)) ** 2), 1e-12 * (1 + abs(d)))

    def test_polar_round_trip(self):
        polar = PolarA([0.1, 0.2, 0.3, 0.4], [0.0, math.pi / 2, math.pi, -math.pi / 3])
        z = polar.to_avector()
        np.testing.assert_allclose(z.polar().r, polar.r, atol=1e-15)
        self.assertAlmostEqual(z[1], 0.2j)

    def test_polar_rejects_negative_radius(self):
        with self.assertRaises(DomainError):
            PolarA([-0.1, 0.2, 0.3, 0.4], [0, 0, 0, 0])


if __name__ == '__main__':
    unittest.main()
