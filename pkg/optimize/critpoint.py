"""
Critical points of |f|^2 on the constraint set sum_j r_j = 1, where
f(z) = prod_{j<k} (z_j - z_k) and z_j = r_j e^{i theta_j}.
"""

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from core.qstate import AVector
from utils.constants import CONSTRAINT_TOLERANCE, ZERO_RADIUS
from utils.errors import DomainError
from utils.helpers import json_float

logger = logging.getLogger(__name__)

COINCIDENCE_TOLERANCE = 1e-14


class Classification(enum.Enum):
    INTERIOR = "interior"
    ONE_ZERO = "one-zero"
    INVALID = "invalid"


@dataclass(frozen=True)
class WVector:
    w: Tuple[Optional[complex], ...]
    defined_mask: Tuple[bool, ...]

    def defined(self):
        return [(j, w) for j, w in enumerate(self.w) if w is not None]


@dataclass(frozen=True)
class CriticalityReport:
    max_imag: float
    max_pairwise_gap: float
    phase_sum_residual: float
    boundary_residual: float
    classification: Classification

    def worst(self) -> float:
        return max(self.max_imag, self.max_pairwise_gap, self.phase_sum_residual, self.boundary_residual)

    def to_dict(self):
        return {
            "max_imag": json_float(self.max_imag),
            "max_pairwise_gap": json_float(self.max_pairwise_gap),
            "phase_sum_residual": json_float(self.phase_sum_residual),
            "boundary_residual": json_float(self.boundary_residual),
            "classification": self.classification.value,
        }


def _coords(z) -> np.ndarray:
    if isinstance(z, AVector):
        return z.z
    return AVector(z).z


def vandermonde_f(z) -> complex:
    """prod_{0<=j<k<=3} (z_j - z_k)"""
    c = _coords(z)
    value = 1.0 + 0j
    for j in range(4):
        for k in range(j + 1, 4):
            value *= c[j] - c[k]
    return complex(value)


def _check_distinct(c: np.ndarray):
    scale = max(1.0, float(np.max(np.abs(c))))
    for j in range(len(c)):
        for k in range(j + 1, len(c)):
            if abs(c[j] - c[k]) <= COINCIDENCE_TOLERANCE * scale:
                raise DomainError(f"Coordinates {j} and {k} coincide: ({j}, {k})")


def w_vector(z) -> WVector:
    """w_j = e^{i theta_j} sum_{k != j} 1/(z_j - z_k), undefined where r_j = 0."""
    c = _coords(z)
    _check_distinct(c)
    w = []
    for j in range(4):
        r = abs(c[j])
        if r <= ZERO_RADIUS:
            w.append(None)
            continue
        total = sum(1.0 / (c[j] - c[k]) for k in range(4) if k != j)
        w.append(complex((c[j] / r) * total))
    return WVector(tuple(w), tuple(x is not None for x in w))


def angle_pattern(theta: float) -> np.ndarray:
    """(theta, pi - theta, pi + theta, -theta)"""
    return np.array([theta, math.pi - theta, math.pi + theta, -theta])


def w_theta_form(r: Sequence[float], theta: float) -> Tuple[complex, ...]:
    """
    Closed forms of w_0..w_3 on the angle pattern (theta, pi - theta, pi + theta, -theta), u = e^{2 i theta}.
    """
    r0, r1, r2, r3 = (float(x) for x in r)
    if min(r0, r1, r2, r3) <= 0:
        raise DomainError("w_theta_form needs positive radii")
    u = complex(math.cos(2 * theta), math.sin(2 * theta))
    ui = 1.0 / u
    denominators = (
        (r0 + r2, r0 + r1 * ui, r0 - r3 * ui),
        (r1 + r3, r1 + r0 * u, r1 - r2 * u),
        (r0 + r2, r2 - r1 * ui, r2 + r3 * ui),
        (r1 + r3, r3 - r0 * u, r3 + r2 * u),
    )
    out = []
    for j, dens in enumerate(denominators):
        for d in dens:
            if abs(d) < COINCIDENCE_TOLERANCE:
                raise DomainError(f"Vanishing denominator in w_{j}")
        out.append(complex(sum(1.0 / d for d in dens)))
    return tuple(out)


def real_w_chain(r: Sequence[float], theta: float) -> Tuple[float, ...]:
    """
    4 r0 r1 r2 r3 cos 2theta and the four expressions it equals at a critical
    point with 0 < theta < pi/4.
    """
    r0, r1, r2, r3 = (float(x) for x in r)
    return (
        4 * r0 * r1 * r2 * r3 * math.cos(2 * theta),
        r2 * (r1 - r3) * (r0**2 - r1 * r3),
        r3 * (r0 - r2) * (r1**2 - r0 * r2),
        r0 * (r1 - r3) * (r1 * r3 - r2**2),
        r1 * (r0 - r2) * (r0 * r2 - r3**2),
    )


def phase_sum_residual(theta: Sequence[float]) -> float:
    """|sum_j e^{i theta_j}|"""
    theta = np.asarray(theta, dtype=float)
    return float(abs(np.sum(np.exp(1j * theta))))


def _invalid_report() -> CriticalityReport:
    inf = float("inf")
    return CriticalityReport(inf, inf, inf, inf, Classification.INVALID)


def criticality_residual(z) -> CriticalityReport:
    """
    First-order residuals of |f|^2 at a point with sum r_j = 1.

    Interior points must have all w_j equal and real. With one zero radius the
    three remaining w_j must be equal and real, and the boundary identity
    sum_j (w_j - 1/r_j) e^{-i theta_j} = 0 is reported. Two or more zero radii
    (or coincident coordinates) classify as invalid with infinite residuals.
    """
    c = _coords(z)
    r = np.abs(c)
    total = float(np.sum(r))
    if abs(total - 1.0) > CONSTRAINT_TOLERANCE:
        raise DomainError(f"Point is off the constraint set: sum r_j = {total:.12g}")

    zeros = [j for j in range(4) if r[j] <= ZERO_RADIUS]
    if len(zeros) >= 2:
        return _invalid_report()
    try:
        wv = w_vector(c)
    except DomainError:
        return _invalid_report()

    defined = wv.defined()
    values = [w for _, w in defined]
    max_imag = max(abs(w.imag) for w in values)
    max_gap = max(abs(a - b) for i, a in enumerate(values) for b in values[i + 1:])
    phases = np.array([c[j] / r[j] for j, _ in defined])
    phase_sum = float(abs(np.sum(phases)))

    if zeros:
        boundary = abs(sum((w - 1.0 / r[j]) * np.conj(c[j] / r[j]) for j, w in defined))
        classification = Classification.ONE_ZERO
    else:
        boundary = 0.0
        classification = Classification.INTERIOR

    return CriticalityReport(
        max_imag=float(max_imag),
        max_pairwise_gap=float(max_gap),
        phase_sum_residual=phase_sum,
        boundary_residual=float(boundary),
        classification=classification,
    )


def sum_w_residual(z) -> float:
    """|sum_j e^{-i theta_j} w_j| for a point with all radii positive."""
    c = _coords(z)
    wv = w_vector(c)
    if not all(wv.defined_mask):
        raise DomainError("sum_w_residual needs every radius positive")
    return float(abs(sum(np.conj(c[j] / abs(c[j])) * w for j, w in wv.defined())))


def from_polar(r: Sequence[float], theta: Sequence[float]) -> AVector:
    return AVector(np.asarray(r, dtype=float) * np.exp(1j * np.asarray(theta, dtype=float)))
