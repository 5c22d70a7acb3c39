"""
Exact replay of the algebra behind the |f|^2 <= 3^-9 case analysis.

Polynomial identities are checked over QQ and must leave the literal zero
polynomial. Branch constants involving sqrt(2), sqrt(3) or sqrt(33) are
evaluated with 50 significant digits.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from mpmath import mp
from sympy import Matrix, Poly, QQ, Rational, cancel, expand, lambdify, symbols

from analysis.polynomials import divide_exact, make_poly, poly_sub, poly_subst, resultant
from optimize.critpoint import angle_pattern, vandermonde_f, w_theta_form
from utils.constants import MAX_ABS_DET, MP_DIGITS, MP_TOLERANCE
from utils.errors import DomainError, InexactDivisionError
from utils.helpers import json_float

logger = logging.getLogger(__name__)

Z = symbols("z0 z1 z2 z3")
R0, R1, R2, S1, S2 = symbols("r0 r1 r2 s1 s2")
R_GENS = (R0, R1, R2)
RS_GENS = (R0, R1, R2, S1, S2)


@dataclass
class VerificationResult:
    name: str
    status: str
    witness: Optional[Poly] = None
    details: Dict = field(default_factory=dict)
    evidence: bool = False

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self):
        out = {"name": self.name, "status": self.status, "details": self.details}
        if self.witness is not None:
            out["witness"] = str(self.witness.as_expr())
        if self.evidence:
            out["level"] = "evidence"
        return out


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _zero(gens) -> Poly:
    return Poly(0, *gens, domain=QQ)


# ----- vanishing w_j -----

def _quadric(j: int) -> Poly:
    """3 z_j^2 - 2 z_j (sum of others) + (pairwise products of others)"""
    others = [Z[k] for k in range(4) if k != j]
    a, b, c = others
    zj = Z[j]
    return make_poly(3 * zj**2 - 2 * zj * (a + b + c) + (a * b + a * c + b * c), Z)


def _cleared_rat_function(j: int) -> Poly:
    """sum_{k != j} 1/(z_j - z_k) times prod_{k != j} (z_j - z_k)"""
    others = [k for k in range(4) if k != j]
    total = 0
    for k in others:
        term = 1
        for l in others:
            if l != k:
                term *= Z[j] - Z[l]
        total += term
    return make_poly(total, Z)


def verify_rat_contradiction() -> VerificationResult:
    """
    The three quadrics from sum_{k != j} 1/(z_j - z_k) = 0, j = 0, 1, 2, force z0 = z3.
    """
    details = {}
    witness = _zero(Z)
    ok = True

    for j in range(3):
        diff = poly_sub(_quadric(j), _cleared_rat_function(j))
        if not diff.is_zero:
            ok = False
            witness = diff
    details["cleared_forms_match"] = ok

    rows = []
    for j, k in ((0, 1), (0, 2), (1, 2)):
        l, m = [x for x in range(4) if x not in (j, k)]
        diff = poly_sub(_quadric(j), _quadric(k))
        try:
            quotient = divide_exact(diff, make_poly(Z[j] - Z[k], Z))
        except InexactDivisionError as e:
            ok = False
            witness = e.remainder
            continue
        expected = make_poly(3 * (Z[j] + Z[k] - Z[l] - Z[m]), Z)
        gap = poly_sub(quotient, expected)
        if not gap.is_zero:
            ok = False
            witness = gap
        details[f"eq{j}-eq{k}"] = str(expand(3 * (Z[j] - Z[k]) * (Z[j] + Z[k] - Z[l] - Z[m])))
        row = [0, 0, 0, 0]
        row[j], row[k], row[l], row[m] = 1, 1, -1, -1
        rows.append(row)

    if len(rows) == 3:
        system = Matrix(rows)
        target = Matrix([1, 0, 0, -1])
        details["rank"] = int(system.rank())
        try:
            solution, _ = system.T.gauss_jordan_solve(target)
            coefficients = [Rational(c) for c in solution]
            details["z0_minus_z3_combination"] = [str(c) for c in coefficients]
        except ValueError:
            ok = False
            details["z0_minus_z3_combination"] = None
        if details["rank"] != 3:
            ok = False
    else:
        ok = False

    return VerificationResult("rat_contradiction", _status(ok), witness, details)


# ----- leading/constant coefficient equations -----

def res_1() -> Poly:
    expr = (
        R2**2 * (5 * R0 - R1 - R2) * (R0 + R1 - R2) * S2**2
        - R0 * R2 * (5 * R0**2 - 3 * R1**2 + 5 * R2**2 + 2 * R0 * R1 + 2 * R1 * R2 - 14 * R0 * R2) * S2
        + R0**2 * (R0 - R1 - R2) * (R0 + R1 - 5 * R2)
    )
    return make_poly(expr, RS_GENS)


def res_2() -> Poly:
    expr = (
        R1**2 * (5 * R0 - R1 - R2) * (R0 - R1 + R2) * S1**2
        - R0 * R1 * (5 * R0**2 + 5 * R1**2 - 3 * R2**2 + 2 * R0 * R2 + 2 * R1 * R2 - 14 * R0 * R1) * S1
        + R0**2 * (R0 - R1 - R2) * (R0 + R2 - 5 * R1)
    )
    return make_poly(expr, RS_GENS)


def mod_cubic_1():
    return R0**3 + 4 * R0 * R1 * R2 + R2**3 - (R0 + R2) * (5 * R0 * R2 + R1**2)


def mod_cubic_2():
    return R0**3 + 4 * R0 * R1 * R2 + R1**3 - (R0 + R1) * (5 * R0 * R1 + R2**2)


def mod_1() -> Poly:
    return make_poly(mod_cubic_1() * (R0 - R2), R_GENS)


def mod_2() -> Poly:
    return make_poly(mod_cubic_2() * (R0 - R1), R_GENS)


def _lead_minus_const(p: Poly, var) -> Poly:
    coeffs = Poly(p.as_expr(), var).all_coeffs()
    return make_poly(coeffs[0] - coeffs[-1], R_GENS)


def _signed_match(candidate: Poly, target: Poly):
    """(+1 | -1 | None, witness) with candidate = sign * target."""
    plus = poly_sub(candidate, target)
    if plus.is_zero:
        return 1, plus
    minus = poly_sub(candidate, -target)
    if minus.is_zero:
        return -1, minus
    return None, plus


def verify_mod_equations() -> VerificationResult:
    """
    Leading minus constant coefficient of each quadratic (in s2, s1) is the
    matching displayed cubic times (r0 - r2), resp. (r0 - r1), up to sign.
    Also replays the r0 = r1 specialization of the first equation.
    """
    details = {}
    ok = True
    witness = _zero(R_GENS)

    for label, quad, var, target in (("mod_1", res_1(), S2, mod_1()), ("mod_2", res_2(), S1, mod_2())):
        sign, diff = _signed_match(_lead_minus_const(quad, var), target)
        details[f"{label}_sign"] = sign
        if sign is None:
            ok = False
            witness = diff
        else:
            details[f"{label}_identity"] = "leading - constant" if sign == 1 else "constant - leading"

    # r1 = r0: r2 (r2^2 - 5 r0 r2 - 2 r0^2) (r0 - r2)
    specialized = poly_subst(mod_1(), {R1: R0})
    expected = make_poly(R2 * (R2**2 - 5 * R0 * R2 - 2 * R0**2) * (R0 - R2), R_GENS)
    gap = poly_sub(specialized, expected)
    if not gap.is_zero:
        ok = False
        witness = gap
    t = symbols("t")
    # r2 = t r0 with 0 < t <= 1 leaves t^2 - 5t - 2, which has no root there
    roots_in_range = Poly(t**2 - 5 * t - 2, t, domain=QQ).count_roots(0, 1)
    details["r0_eq_r1_roots_in_unit_interval"] = int(roots_in_range)
    if roots_in_range != 0:
        ok = False

    return VerificationResult("mod_equations", _status(ok), witness, details)


def verify_cubic_resultant() -> VerificationResult:
    """Res_r0 of the two de-factored cubics against 288 r1 r2 (r1 - r2)^3 (r1 + r2)^4."""
    p = make_poly(mod_cubic_1(), R_GENS)
    q = make_poly(mod_cubic_2(), R_GENS)
    res = resultant(p, q, R0)
    target = make_poly(288 * R1 * R2 * (R1 - R2) ** 3 * (R1 + R2) ** 4, (R1, R2))
    sign, diff = _signed_match(res, target)
    details = {"sign": sign, "resultant": str(res.as_expr().factor())}
    return VerificationResult("cubic_resultant", _status(sign is not None), diff, details)


def cleared_w_differences():
    """
    (w0 - w1) and (w0 - w2) with z3 = 0, theta0 = 0, z1 = r1 s1, z2 = r2 s2,
    multiplied by r0 r1 (r0 - r1 s1)(r0 - r2 s2)(r1 s1 - r2 s2), resp. with r2 in place of r1.
    """
    z0, z1, z2 = R0, R1 * S1, R2 * S2
    w0 = 1 / (z0 - z1) + 1 / (z0 - z2) + 1 / z0
    w1 = S1 * (1 / (z1 - z0) + 1 / (z1 - z2) + 1 / z1)
    w2 = S2 * (1 / (z2 - z0) + 1 / (z2 - z1) + 1 / z2)
    common = (z0 - z1) * (z0 - z2) * (z1 - z2)
    n01 = make_poly(cancel((w0 - w1) * R0 * R1 * common), RS_GENS)
    n02 = make_poly(cancel((w0 - w2) * R0 * R2 * common), RS_GENS)
    return n01, n02


def verify_resultant_derivation() -> VerificationResult:
    """The quadratics in s2 and s1 divide the resultants of the cleared w-differences."""
    n01, n02 = cleared_w_differences()
    details = {}
    ok = True
    witness = None
    for label, var, target in (("res_1", S1, res_1()), ("res_2", S2, res_2())):
        eliminated = resultant(n01, n02, var)
        lifted = make_poly(eliminated.as_expr(), RS_GENS)
        try:
            cofactor = divide_exact(lifted, target)
            details[f"{label}_cofactor"] = str(cofactor.as_expr().factor())
        except InexactDivisionError as e:
            ok = False
            witness = e.remainder
            details[f"{label}_cofactor"] = None
    return VerificationResult("resultant_derivation", _status(ok), witness if witness is not None else _zero(RS_GENS), details)


# ----- branch constants -----

def _mp_f(z) -> "mp.mpc":
    value = mp.mpc(1)
    for j in range(4):
        for k in range(j + 1, 4):
            value *= z[j] - z[k]
    return value


def _mp_pattern(r, theta) -> list:
    thetas = (theta, mp.pi - theta, mp.pi + theta, -theta)
    return [r[j] * mp.expj(thetas[j]) for j in range(4)]


def _numeric_result(name, measured, expected, extra=None) -> VerificationResult:
    gap = abs(measured - expected)
    details = {"measured": mp.nstr(measured, 40), "expected": mp.nstr(expected, 40), "gap": mp.nstr(gap, 5)}
    if extra:
        details.update(extra)
    return VerificationResult(name, _status(gap < MP_TOLERANCE), None, details)


def quarter_branch_readings() -> Dict:
    """
    Both readings of the theta = pi/4 radii with r0 > r1.

    reading_A: r0 = r2 = (3 + sqrt 3)/12, r1 = r3 = (3 - sqrt 3)/12.
    reading_B: r0 = (3 + sqrt 3)/12, r2 = (3 - sqrt 3)/12, r1 = r3 = 1/4.
    """
    out = {}
    with mp.workdps(MP_DIGITS):
        hi = (3 + mp.sqrt(3)) / 12
        lo = (3 - mp.sqrt(3)) / 12
        quarter = mp.mpf(1) / 4
        readings = {"reading_A": (hi, lo, hi, lo), "reading_B": (hi, quarter, lo, quarter)}
        for name, r in readings.items():
            z = _mp_pattern(r, mp.pi / 4)
            f = _mp_f(z)
            w = w_theta_form([float(x) for x in r], math.pi / 4)
            out[name] = {
                "r": [mp.nstr(x, 20) for x in r],
                "abs_f_squared": abs(f) ** 2,
                "w1_minus_w0": abs(w[1] - w[0]),
                "matches_6_pow_-6": abs(abs(f) ** 2 - mp.mpf(6) ** -6) < MP_TOLERANCE,
            }
    return out


def verify_branch_values() -> List[VerificationResult]:
    results = []
    with mp.workdps(MP_DIGITS):
        target = mp.mpf(2) ** -16
        shift = mp.sqrt(2) / 8
        quarter = mp.mpf(1) / 4

        # theta = 0, r0 + r2 = r1 + r3 = 1/2
        r = (quarter + shift, quarter + shift, quarter - shift, quarter - shift)
        z = [r[0], -r[1], -r[2], r[3]]
        results.append(_numeric_result("theta0_branch_a", abs(_mp_f(z)) ** 2, target, {"f": mp.nstr(_mp_f(z).real, 30)}))

        # theta = 0, r0 + r1 = r2 + r3 = 1/2
        r = (quarter + shift, quarter - shift, quarter + shift, quarter - shift)
        z = [r[0], -r[1], -r[2], r[3]]
        results.append(_numeric_result("theta0_branch_b", abs(_mp_f(z)) ** 2, target, {"f": mp.nstr(_mp_f(z).real, 30)}))

        # theta = pi/4, all radii 1/4
        z = _mp_pattern((quarter,) * 4, mp.pi / 4)
        results.append(_numeric_result("quarter_equal_radii", _mp_f(z), mp.mpc(-1) / 256))

        # theta = pi/4, r0 = r2 > r1 = r3
        readings = quarter_branch_readings()
        reading = readings["reading_A"]
        results.append(_numeric_result(
            "quarter_unequal_radii", reading["abs_f_squared"], mp.mpf(6) ** -6,
            {"reading": "reading_A", "reading_B_abs_f_squared": mp.nstr(readings["reading_B"]["abs_f_squared"], 20)},
        ))

        # real coordinates with one zero: x0 x1 x2 (x0 - x1)(x0 + x2)(x1 + x2)
        x0, x1, x2 = mp.mpf(1) / 2, (2 - mp.sqrt(2)) / 4, mp.sqrt(2) / 4
        value = x0 * x1 * x2 * (x0 - x1) * (x0 + x2) * (x1 + x2)
        results.append(_numeric_result("real_one_zero_maximum", value, mp.mpf(2) ** -8))

        # r1 = r2 = (9 - sqrt 33)/24: the quadratic in s2 has real roots
        t = (9 - mp.sqrt(33)) / 24
        a = 1 - 2 * t
        cubic = a**3 + 4 * a * t * t + t**3 - (a + t) * (5 * a * t + t * t)
        coeffs = Poly(res_1().as_expr(), S2).all_coeffs()
        lead, mid, const = (_mp_eval(c, a, t, t) for c in coeffs)
        disc = mid * mid - 4 * lead * const
        results.append(VerificationResult(
            "equal_small_radii_real_roots",
            _status(disc >= 0 and abs(cubic) < MP_TOLERANCE),
            None,
            {"r1": mp.nstr(t, 30), "cubic_residual": mp.nstr(abs(cubic), 5), "discriminant": mp.nstr(disc, 20)},
        ))

    results.append(verify_parametrized_radii())
    return results


def _mp_eval(expr, r0, r1, r2):
    fn = lambdify([R0, R1, R2], expr, modules="mpmath")
    return mp.mpf(fn(r0, r1, r2))


def verify_parametrized_radii() -> VerificationResult:
    """r2 = r1(1 - r0 - r1)/(r0 + r1), r3 = r0(1 - r0 - r1)/(r0 + r1) give r0 r2 = r1 r3 and sum r = 1."""
    r2 = R1 * (1 - R0 - R1) / (R0 + R1)
    r3 = R0 * (1 - R0 - R1) / (R0 + R1)
    product_gap = cancel(R0 * r2 - R1 * r3)
    sum_gap = cancel(R0 + R1 + r2 + r3 - 1)
    ok = product_gap == 0 and sum_gap == 0
    details = {"product_gap": str(product_gap), "sum_gap": str(sum_gap)}
    return VerificationResult("parametrized_radii", _status(ok), None, details)


def scan_intermediate_branch(steps: int = 200, gap_threshold: float = 1e-9) -> VerificationResult:
    """
    Grid scan of the 0 < theta < pi/4 branch.

    r0 >= r1 are sampled, r2 and r3 follow from r0 r2 = r1 r3 and sum r = 1,
    and cos 2 theta = (r0 - r2)(r1 - r3)/(4 r0 r2). Every admissible grid point
    must either be non-critical (some |w_j - w_k| above the threshold) or have
    |f|^2 clearly below 3^-9.
    """
    admissible = 0
    near_critical = []
    w01_coincidences = 0
    min_gap = float("inf")
    ok = True
    grid = np.linspace(0.0, 1.0, steps + 1)[1:-1]
    for r0 in grid:
        for r1 in grid:
            if r1 > r0 or r0 + r1 >= 1.0:
                continue
            r2 = r1 * (1 - r0 - r1) / (r0 + r1)
            r3 = r0 * (1 - r0 - r1) / (r0 + r1)
            if not (r1 > r3 >= r2 > 0):
                continue
            cos2 = (r0 - r2) * (r1 - r3) / (4 * r0 * r2)
            if not 0.0 < cos2 < 1.0:
                continue
            theta = 0.5 * math.acos(cos2)
            try:
                w = w_theta_form((r0, r1, r2, r3), theta)
            except DomainError:
                continue
            admissible += 1
            gap = max(abs(a - b) for i, a in enumerate(w) for b in w[i + 1:])
            min_gap = min(min_gap, gap)
            if abs(w[0] - w[1]) < gap_threshold:
                w01_coincidences += 1
            if gap <= gap_threshold:
                z = np.array([r0, r1, r2, r3]) * np.exp(1j * angle_pattern(theta))
                value = abs(vandermonde_f(z)) ** 2
                near_critical.append({"r0": float(r0), "r1": float(r1), "abs_f_squared": float(value)})
                if value >= MAX_ABS_DET * (1 - 1e-3):
                    ok = False

    details = {
        "steps": steps,
        "admissible_points": admissible,
        "min_pairwise_gap": json_float(min_gap),
        "w0_eq_w1_points": w01_coincidences,
        "near_critical_points": len(near_critical),
        "max_near_critical_abs_f_squared": max((p["abs_f_squared"] for p in near_critical), default=0.0),
    }
    logger.info(f"Intermediate-angle scan: {admissible} admissible points, {len(near_critical)} near-critical")
    return VerificationResult("intermediate_branch_scan", _status(ok and admissible > 0), None, details, evidence=True)


def run_casework(scan_steps: int = 200) -> List[VerificationResult]:
    results = [
        verify_rat_contradiction(),
        verify_mod_equations(),
        verify_cubic_resultant(),
        verify_resultant_derivation(),
    ]
    results.extend(verify_branch_values())
    results.append(scan_intermediate_branch(scan_steps))
    return results
