"""
Hyperdeterminant of 2x2x2x2 tensors.

det_A evaluates the closed product formula on the subspace A. det4 handles an
arbitrary state with the Schlafli construction: slice the tensor along qubit 4,
take the Cayley hyperdeterminant of the pencil x*T0 + y*T1 (a binary quartic)
and return the discriminant of that quartic, rescaled by a constant pinned
once so that det4 restricted to A equals det_A.
"""

import logging
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.qstate import AVector, QuartState, embed_A
from utils.constants import (
    CALIBRATION_MIN_DENOMINATOR,
    CALIBRATION_PROBE,
    CALIBRATION_SAMPLES,
    CALIBRATION_SEED,
    CALIBRATION_TOLERANCE,
)
from utils.errors import CalibrationError, DomainError
from utils.helpers import relative_gap

logger = logging.getLogger(__name__)

# Leading coefficient below this (relative to the largest) triggers a change of variables
LEADING_COEFF_THRESHOLD = 1e-12


@dataclass(frozen=True, eq=False)
class BinaryQuartic:
    """q(x, y) = c4 x^4 + c3 x^3 y + c2 x^2 y^2 + c1 x y^3 + c0 y^4, stored as (c4, ..., c0)."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex).reshape(-1)
        if c.shape != (5,):
            raise DomainError(f"A binary quartic has 5 coefficients, got {c.size}")
        object.__setattr__(self, "c", c)

    def is_zero(self) -> bool:
        return not np.any(self.c)

    def __call__(self, x: complex, y: complex) -> complex:
        powers = np.array([x ** (4 - k) * y ** k for k in range(5)])
        return complex(np.dot(self.c, powers))


@dataclass(frozen=True, eq=False)
class CubeTensor:
    """Eight entries t[i, j, k], flattened as 4*i + 2*j + k."""

    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=complex).reshape(-1)
        if t.shape != (8,):
            raise DomainError(f"A 2x2x2 tensor has 8 entries, got {t.size}")
        if not np.all(np.isfinite(t)):
            raise DomainError("CubeTensor has non-finite entries")
        object.__setattr__(self, "t", t)

    def cube(self) -> np.ndarray:
        return self.t.reshape(2, 2, 2)


def _idx(label: str) -> int:
    return int(label, 2)


# Cayley's degree-4 form as (coefficient, four flat indices)
_CAYLEY_TERMS = tuple(
    (coef, tuple(_idx(s) for s in labels))
    for coef, labels in (
        (1, ("000", "000", "111", "111")),
        (1, ("001", "001", "110", "110")),
        (1, ("010", "010", "101", "101")),
        (1, ("100", "100", "011", "011")),
        (-2, ("000", "001", "110", "111")),
        (-2, ("000", "010", "101", "111")),
        (-2, ("000", "100", "011", "111")),
        (-2, ("001", "010", "101", "110")),
        (-2, ("001", "100", "011", "110")),
        (-2, ("010", "100", "011", "101")),
        (4, ("000", "011", "101", "110")),
        (4, ("001", "010", "100", "111")),
    )
)


def det_A(z) -> complex:
    """prod_{j<k} (z_j^2 - z_k^2)^2"""
    if not isinstance(z, AVector):
        z = AVector(z)
    sq = z.z * z.z
    value = 1.0 + 0j
    for j in range(4):
        for k in range(j + 1, 4):
            d = sq[j] - sq[k]
            value *= d * d
    return complex(value)


def cayley_det3(t) -> complex:
    if not isinstance(t, CubeTensor):
        t = CubeTensor(t)
    a = t.t
    total = 0j
    for coef, (i, j, k, l) in _CAYLEY_TERMS:
        total += coef * a[i] * a[j] * a[k] * a[l]
    return complex(total)


def slices(psi: QuartState):
    """(T0, T1): the two slices of psi along qubit 4."""
    tensor = psi.tensor()
    return CubeTensor(tensor[:, :, :, 0]), CubeTensor(tensor[:, :, :, 1])


def _pencil_expand(t0: np.ndarray, t1: np.ndarray) -> np.ndarray:
    # Each entry of x*T0 + y*T1 is the binary linear form [T0, T1]
    coeffs = np.zeros(5, dtype=complex)
    for coef, indices in _CAYLEY_TERMS:
        form = np.array([1.0 + 0j])
        for i in indices:
            form = np.convolve(form, [t0[i], t1[i]])
        coeffs += coef * form
    return coeffs


def _pencil_interpolate(t0: np.ndarray, t1: np.ndarray) -> np.ndarray:
    # q(1, zeta^k) for the fifth roots of unity, then invert the DFT
    zeta = np.exp(2j * np.pi * np.arange(5) / 5)
    values = np.array([cayley_det3(CubeTensor(t0 + y * t1)) for y in zeta])
    ascending = np.fft.fft(values) / 5.0
    return ascending[::-1]


def pencil_quartic(psi: QuartState, method: str = "expand") -> BinaryQuartic:
    """Binary quartic q(x, y) = cayley_det3(x*T0 + y*T1)."""
    t0, t1 = slices(psi)
    if method == "expand":
        return BinaryQuartic(_pencil_expand(t0.t, t1.t))
    if method == "interpolate":
        return BinaryQuartic(_pencil_interpolate(t0.t, t1.t))
    raise ValueError(f"Unknown pencil method: {method}")


def substitute_sl2(q: BinaryQuartic, m) -> BinaryQuartic:
    """q(a x + b y, c x + d y) for m = [[a, b], [c, d]]."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError("Substitution matrix must be 2x2")
    big_x = np.array([m[0, 0], m[0, 1]])
    big_y = np.array([m[1, 0], m[1, 1]])
    out = np.zeros(5, dtype=complex)
    for k in range(5):
        form = np.array([1.0 + 0j])
        for _ in range(4 - k):
            form = np.convolve(form, big_x)
        for _ in range(k):
            form = np.convolve(form, big_y)
        out += q.c[k] * form
    return BinaryQuartic(out)


def quartic_disc_closed_form(q: BinaryQuartic) -> complex:
    """Degree-6 discriminant polynomial, valid for any leading coefficient."""
    a, b, c, d, e = q.c
    return complex(
        256 * a**3 * e**3
        - 192 * a**2 * b * d * e**2
        - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e
        - 27 * a**2 * d**4
        + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e
        - 80 * a * b * c**2 * d * e
        + 18 * a * b * c * d**3
        + 16 * a * c**4 * e
        - 4 * a * c**3 * d**2
        - 27 * b**4 * e**2
        + 18 * b**3 * c * d * e
        - 4 * b**3 * d**3
        - 4 * b**2 * c**3 * e
        + b**2 * c**2 * d**2
    )


def sylvester_matrix(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two coefficient vectors (highest power first), p-rows first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    s = np.zeros((size, size), dtype=complex)
    for row in range(n):
        s[row, row:row + m + 1] = p
    for row in range(m):
        s[n + row, row:row + n + 1] = q
    return s


def _disc_by_resultant(c: np.ndarray) -> complex:
    derivative = np.array([4 * c[0], 3 * c[1], 2 * c[2], c[3]])
    res = np.linalg.det(sylvester_matrix(c, derivative))
    return complex(res / c[0])


def quartic_disc(q: BinaryQuartic, seed: int = CALIBRATION_SEED) -> complex:
    if q.is_zero():
        return 0j
    scale = float(np.max(np.abs(q.c)))
    if abs(q.c[0]) > LEADING_COEFF_THRESHOLD * scale:
        return _disc_by_resultant(q.c)

    # Leading coefficient vanishes: move a root away from infinity with a
    # determinant-one substitution x -> x, y -> s x + y
    rng = np.random.default_rng(seed)
    for _ in range(8):
        s = complex(rng.normal(), rng.normal())
        moved = substitute_sl2(q, [[1.0, 0.0], [s, 1.0]])
        if abs(moved.c[0]) > LEADING_COEFF_THRESHOLD * float(np.max(np.abs(moved.c))):
            return _disc_by_resultant(moved.c)
    logger.debug("Quartic leading coefficient stayed negligible, using closed form")
    return quartic_disc_closed_form(q)


_kappa: Optional[complex] = None
_kappa_lock = threading.Lock()


def _schlafli_raw(psi: QuartState) -> complex:
    return quartic_disc(pencil_quartic(psi))


def calibrate(samples: int = CALIBRATION_SAMPLES, seed: int = CALIBRATION_SEED) -> complex:
    """
    Constant kappa with det4 = kappa * disc(pencil) normalized so that det4 matches det_A on A.

    The ratio is computed at the probe (1, 2, 3, 4) and must agree at `samples`
    random points of A.

    Raises:
        CalibrationError: degenerate probe or non-constant ratio.
    """
    probe = AVector(CALIBRATION_PROBE)
    denominator = _schlafli_raw(embed_A(probe))
    if abs(denominator) < CALIBRATION_MIN_DENOMINATOR:
        raise CalibrationError(f"Degenerate calibration probe, denominator {abs(denominator):.3e}")
    kappa = det_A(probe) / denominator

    rng = np.random.default_rng(seed)
    checked = 0
    while checked < samples:
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        z = AVector(z / np.linalg.norm(z))
        expected = det_A(z)
        if abs(expected) < 1e-10:
            continue
        raw = _schlafli_raw(embed_A(z))
        if abs(raw) < CALIBRATION_MIN_DENOMINATOR:
            raise CalibrationError("Degenerate calibration sample")
        gap = relative_gap(kappa, expected / raw)
        if gap > CALIBRATION_TOLERANCE:
            raise CalibrationError(f"Calibration ratio drifts by {gap:.3e} at z={z.z}")
        checked += 1

    logger.info(f"Schlafli normalization constant: {kappa:.12g}")
    return complex(kappa)


def calibration_constant() -> complex:
    """kappa, computed once and shared by every thread."""
    global _kappa
    if _kappa is None:
        with _kappa_lock:
            if _kappa is None:
                _kappa = calibrate()
    return _kappa


def det4(psi: QuartState) -> complex:
    return complex(calibration_constant() * _schlafli_raw(psi))
