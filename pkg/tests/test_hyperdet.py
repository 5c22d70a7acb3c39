import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from core.hyperdet import (
    BinaryQuartic,
    CubeTensor,
    calibrate,
    calibration_constant,
    cayley_det3,
    det4,
    det_A,
    pencil_quartic,
    quartic_disc,
    quartic_disc_closed_form,
    sylvester_matrix,
    substitute_sl2,
)
from core.orbit import random_sl_operator
from core.qstate import AVector, QuartState, embed_A, product_state, random_avector, random_state, state_L
from utils.constants import MAX_ABS_DET
from utils.errors import DomainError
from utils.helpers import relative_gap


def _permute(psi: QuartState, perm) -> QuartState:
    return QuartState.from_tensor(np.transpose(psi.tensor(), perm))


class TestDetA(unittest.TestCase):
    def test_integer_values(self):
        self.assertEqual(det_A([1, 2, 3, 4]), 22861440000)

    def test_value_at_L(self):
        """Det(L) = -3^-9"""
        d = det_A(state_L())
        self.assertLess(abs(d + MAX_ABS_DET), 1e-14)

    def test_repeated_square_vanishes(self):
        self.assertEqual(det_A([1, 1, 0, 0]), 0)
        self.assertEqual(det_A([1, -1, 0.5, 2]), 0)

    @given(
        st.floats(min_value=0.5, max_value=2.0),
        st.floats(min_value=0.0, max_value=6.28),
    )
    @settings(max_examples=40, deadline=None)
    def test_degree_24(self, modulus, angle):
        c = modulus * np.exp(1j * angle)
        z = AVector([0.3, 0.5j, -0.2 + 0.1j, 0.7])
        self.assertLess(relative_gap(det_A(z.scaled(c)), c**24 * det_A(z)), 1e-9)


class TestCayley(unittest.TestCase):
    def test_ghz(self):
        t = np.zeros(8)
        t[0] = t[7] = 1
        self.assertAlmostEqual(cayley_det3(t), 1.0)

    def test_w_state(self):
        t = np.zeros(8)
        t[1] = t[2] = t[4] = 1
        self.assertEqual(cayley_det3(t), 0)

    def test_wrong_shape(self):
        with self.assertRaises(DomainError):
            CubeTensor(np.zeros(7))

    def test_sl2_cubed_invariance(self):
        """cayley_det3 est invariant sous SL(2) x SL(2) x SL(2)"""
        rng = np.random.default_rng(13)
        for _ in range(100):
            t = rng.normal(size=8) + 1j * rng.normal(size=8)
            a, b, c = random_sl_operator(rng, scale=0.5).m[:3]
            moved = np.einsum("ia,jb,kc,abc->ijk", a, b, c, t.reshape(2, 2, 2))
            self.assertLess(relative_gap(cayley_det3(moved), cayley_det3(t)), 1e-10)


class TestQuarticDiscriminant(unittest.TestCase):
    def test_known_values(self):
        # x^3 y - x y^3 = x y (x - y)(x + y)
        q = BinaryQuartic([0, 1, 0, -1, 0])
        self.assertAlmostEqual(quartic_disc(q), 4.0, places=9)
        self.assertAlmostEqual(quartic_disc_closed_form(q), 4.0, places=12)

    def test_double_root(self):
        q = BinaryQuartic([1, 0, -1, 0, 0])
        self.assertLess(abs(quartic_disc(q)), 1e-12)

    def test_zero_form(self):
        self.assertEqual(quartic_disc(BinaryQuartic(np.zeros(5))), 0)

    def test_resultant_route_matches_closed_form(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            q = BinaryQuartic(rng.normal(size=5) + 1j * rng.normal(size=5))
            self.assertLess(relative_gap(quartic_disc(q), quartic_disc_closed_form(q)), 1e-9)

    def test_sl2_invariance(self):
        """Le discriminant est invariant sous SL(2)"""
        rng = np.random.default_rng(12)
        for _ in range(20):
            q = BinaryQuartic(rng.normal(size=5) + 1j * rng.normal(size=5))
            a, b, c = rng.normal(size=3) * 0.5
            d = (1 + b * c) / a if abs(a) > 0.1 else None
            if d is None:
                continue
            moved = substitute_sl2(q, [[a, b], [c, d]])
            self.assertLess(relative_gap(quartic_disc_closed_form(moved), quartic_disc_closed_form(q)), 1e-8)

    def test_sylvester_shape(self):
        s = sylvester_matrix(np.array([1, 2, 3, 4, 5]), np.array([4, 6, 6, 4]))
        self.assertEqual(s.shape, (7, 7))
        np.testing.assert_array_equal(s[0, :5], [1, 2, 3, 4, 5])
        np.testing.assert_array_equal(s[3, :4], [4, 6, 6, 4])

    def test_evaluation(self):
        q = BinaryQuartic([1, 0, 0, 0, -1])
        self.assertAlmostEqual(q(2, 1), 15)


class TestPencil(unittest.TestCase):
    def test_methods_agree(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            psi = random_state(rng)
            expand = pencil_quartic(psi, "expand").c
            interpolate = pencil_quartic(psi, "interpolate").c
            np.testing.assert_allclose(expand, interpolate, atol=1e-12)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            pencil_quartic(QuartState.basis(0), "bogus")


class TestDet4(unittest.TestCase):
    def test_calibration_constant_nonzero(self):
        self.assertNotEqual(calibration_constant(), 0)

    def test_calibration_is_reproducible(self):
        self.assertLess(relative_gap(calibrate(samples=5), calibration_constant()), 1e-12)

    def test_restriction_to_A(self):
        """det4 restreint à A coïncide avec det_A"""
        rng = np.random.default_rng(21)
        for _ in range(50):
            z = random_avector(rng)
            z = z.scaled(1.0 / z.norm())
            self.assertLess(relative_gap(det4(embed_A(z)), det_A(z)), 1e-9)

    def test_value_at_L(self):
        self.assertLess(abs(det4(embed_A(state_L())) + MAX_ABS_DET), 1e-12)

    def test_product_state_vanishes(self):
        psi = product_state([[1, 2], [0.5, -1], [1j, 1], [3, 1]]).normalize()
        self.assertLess(abs(det4(psi)), 1e-14)

    def test_permutation_invariance(self):
        psi = random_state(np.random.default_rng(8)).scaled(2.0)
        d = det4(psi)
        for perm in ((1, 0, 2, 3), (3, 2, 1, 0), (0, 3, 1, 2), (2, 0, 3, 1)):
            self.assertLess(abs(det4(_permute(psi, perm)) - d), 1e-8 * (1 + abs(d)))

    def test_homogeneity(self):
        rng = np.random.default_rng(9)
        psi = random_state(rng)
        c = 1.1 * np.exp(0.7j)
        self.assertLess(relative_gap(det4(psi.scaled(c)), c**24 * det4(psi)), 1e-8)


if __name__ == '__main__':
    unittest.main()
