import json
import unittest

import pytest
from sympy import I, Rational, expand, sqrt

from analysis.casework import (
    R0,
    R1,
    R2,
    S1,
    S2,
    VerificationResult,
    cleared_w_differences,
    mod_1,
    quarter_branch_readings,
    res_1,
    scan_intermediate_branch,
    verify_branch_values,
    verify_cubic_resultant,
    verify_mod_equations,
    verify_parametrized_radii,
    verify_rat_contradiction,
    verify_resultant_derivation,
)
from analysis.polynomials import make_poly


class TestExactIdentities(unittest.TestCase):
    def test_rat_contradiction(self):
        """Les trois quadriques forcent z0 = z3"""
        result = verify_rat_contradiction()
        self.assertTrue(result.passed, msg=result.details)
        self.assertEqual(result.details["rank"], 3)
        self.assertEqual(result.details["z0_minus_z3_combination"], ["1/2", "1/2", "0"])
        self.assertTrue(result.witness.is_zero)

    def test_mod_equations(self):
        result = verify_mod_equations()
        self.assertTrue(result.passed, msg=result.details)
        self.assertIn(result.details["mod_1_sign"], (1, -1))
        self.assertIn(result.details["mod_2_sign"], (1, -1))
        self.assertEqual(result.details["r0_eq_r1_roots_in_unit_interval"], 0)

    def test_mod_1_sample_value(self):
        # (2, 1, 1): cubic = -16, r0 - r2 = 1
        value = mod_1().eval({R0: 2, R1: 1, R2: 1})
        self.assertEqual(value, -16)

    def test_cubic_resultant(self):
        result = verify_cubic_resultant()
        self.assertTrue(result.passed, msg=result.details)
        self.assertTrue(result.witness.is_zero)

    def test_parametrized_radii(self):
        result = verify_parametrized_radii()
        self.assertTrue(result.passed)
        self.assertEqual(result.details["product_gap"], "0")

    def test_cleared_differences_vanish_at_L(self):
        """Au point L (r = 1/3, s1 = w^2, s2 = w^4) les w_j coïncident"""
        n01, n02 = cleared_w_differences()
        self.assertEqual(n01.gens, (R0, R1, R2, S1, S2))
        third = Rational(1, 3)
        point = {R0: third, R1: third, R2: third, S1: -Rational(1, 2) + sqrt(3) * I / 2, S2: -Rational(1, 2) - sqrt(3) * I / 2}
        for poly in (n01, n02):
            self.assertEqual(expand(poly.as_expr().subs(point)), 0)

    def test_res_1_is_quadratic_in_s2(self):
        self.assertEqual(res_1().degree(S2), 2)
        self.assertEqual(res_1().degree(S1), 0)

    @pytest.mark.slow
    def test_resultant_derivation(self):
        result = verify_resultant_derivation()
        self.assertTrue(result.passed, msg=result.details)


class TestBranchValues(unittest.TestCase):
    def test_all_branches_pass(self):
        results = {r.name: r for r in verify_branch_values()}
        for name in (
            "theta0_branch_a",
            "theta0_branch_b",
            "quarter_equal_radii",
            "quarter_unequal_radii",
            "real_one_zero_maximum",
            "equal_small_radii_real_roots",
            "parametrized_radii",
        ):
            self.assertTrue(results[name].passed, msg=f"{name}: {results[name].details}")

    def test_quarter_readings(self):
        """Seule la lecture A donne 6^-6 avec w0 = w1"""
        readings = quarter_branch_readings()
        self.assertTrue(readings["reading_A"]["matches_6_pow_-6"])
        self.assertLess(readings["reading_A"]["w1_minus_w0"], 1e-10)
        self.assertGreater(readings["reading_B"]["w1_minus_w0"], 1e-6)


class TestScan(unittest.TestCase):
    def test_scan_is_evidence(self):
        result = scan_intermediate_branch(steps=60)
        self.assertTrue(result.passed, msg=result.details)
        self.assertGreater(result.details["admissible_points"], 0)
        self.assertEqual(result.to_dict()["level"], "evidence")

    def test_result_serializes(self):
        result = VerificationResult("sample", "fail", make_poly(R0 - R1, (R0, R1, R2)), {"k": 1})
        payload = json.loads(json.dumps(result.to_dict()))
        self.assertEqual(payload["witness"], "r0 - r1")
        self.assertNotIn("level", payload)
        self.assertFalse(result.passed)


if __name__ == '__main__':
    unittest.main()
