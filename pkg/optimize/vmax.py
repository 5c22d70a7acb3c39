"""
Multistart maximization of |V_n(z)| = prod_{j<k} |z_k - z_j| subject to sum_j |z_j| = 1.

The constraint is built into the parametrization z_j = (s_j^2 / sum_k s_k^2) e^{i theta_j}
with theta_0 = 0, and -log|V_n| is minimized with BFGS using the analytic gradient.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from mpmath import mp
from scipy.optimize import minimize

from core.hyperdet import det_A
from core.qstate import AVector
from utils.constants import (
    DEFAULT_RESTARTS,
    DEFAULT_SEED,
    DEFAULT_TOL,
    MP_DIGITS,
    RESTART_PERTURBATION,
    ZERO_RADIUS,
)
from utils.errors import DomainError
from utils.helpers import complex_to_pair, derived_rng, json_float

logger = logging.getLogger(__name__)

# A restart counts as converged when the final gradient norm is below this
CONVERGED_GRADIENT = 1e-6
# Values this close (relative) are ties, broken by canonical form
TIE_TOLERANCE = 1e-12
# Digits kept in canonical sort keys
CANONICAL_DIGITS = 12
# Restarts this close (relative) to the best value are kept as near-maximizers
NEAR_MAX_TOLERANCE = 1e-6


@dataclass(frozen=True, eq=False)
class VnConfig:
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex).reshape(-1)
        if pts.size < 2:
            raise DomainError("A configuration needs at least 2 points")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return int(self.points.size)

    def constraint_residual(self) -> float:
        return abs(float(np.sum(np.abs(self.points))) - 1.0)

    def to_pairs(self):
        return [complex_to_pair(p) for p in self.points]


@dataclass
class OptimizerReport:
    n: int
    best_value: float
    best_config: VnConfig
    lambda_n: float
    ratio: float
    restarts: int
    converged_restarts: int
    criticality_residual: float
    seed: int
    tol: float
    certified_value: str = ""
    restart_values: List[float] = field(default_factory=list)
    restart_configs: List[VnConfig] = field(default_factory=list)

    def to_dict(self):
        return {
            "n": self.n,
            "best_value": self.best_value,
            "certified_value": self.certified_value,
            "best_config": self.best_config.to_pairs(),
            "lambda_n": self.lambda_n,
            "ratio": self.ratio,
            "restarts": self.restarts,
            "converged_restarts": self.converged_restarts,
            "criticality_residual": json_float(self.criticality_residual),
            "seed": self.seed,
            "tol": self.tol,
        }


def _points(points) -> np.ndarray:
    if isinstance(points, VnConfig):
        return points.points
    return np.asarray(points, dtype=complex).reshape(-1)


def vandermonde_n(points) -> complex:
    """prod_{0<=j<k<=n-1} (z_k - z_j)"""
    z = _points(points)
    if z.size < 2:
        raise ValueError(f"vandermonde_n needs n >= 2, got {z.size}")
    value = 1.0 + 0j
    for j in range(z.size):
        for k in range(j + 1, z.size):
            value *= z[k] - z[j]
    return complex(value)


def lambda_n(n: int) -> float:
    """(n-1)^{-(n-1)^2/2}"""
    if n < 2:
        raise ValueError(f"lambda_n needs n >= 2, got {n}")
    return math.exp(-((n - 1) ** 2) / 2.0 * math.log(n - 1))


def candidate_config(n: int) -> VnConfig:
    """Regular (n-1)-gon of radius 1/(n-1) plus the origin."""
    if n < 3:
        raise ValueError(f"candidate_config needs n >= 3, got {n}")
    m = n - 1
    pts = [np.exp(2j * np.pi * j / m) / m for j in range(m)]
    pts.append(0.0)
    return VnConfig(np.array(pts, dtype=complex))


def _start_config(n: int) -> np.ndarray:
    if n == 2:
        return np.array([0.5, -0.5], dtype=complex)
    return candidate_config(n).points


def _to_params(z: np.ndarray) -> np.ndarray:
    r = np.abs(z)
    theta = np.where(r > 0, np.angle(z), 0.0)
    theta = theta - theta[0]
    return np.concatenate([np.sqrt(r), theta[1:]])


def _from_params(x: np.ndarray, n: int) -> np.ndarray:
    s = x[:n]
    theta = np.concatenate([[0.0], x[n:]])
    r = s * s / np.sum(s * s)
    return r * np.exp(1j * theta)


def _pair_sums(z: np.ndarray) -> Optional[np.ndarray]:
    """G_j = sum_{k != j} 1/(z_j - z_k), None when two points coincide."""
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0):
        return None
    inv = 1.0 / diff
    np.fill_diagonal(inv, 0.0)
    return inv.sum(axis=1)


def _objective(x: np.ndarray, n: int) -> Tuple[float, np.ndarray]:
    s = x[:n]
    total = float(np.sum(s * s))
    if total == 0.0:
        return float("inf"), np.zeros_like(x)
    z = _from_params(x, n)
    g_sum = _pair_sums(z)
    if g_sum is None:
        return float("inf"), np.zeros_like(x)

    iu = np.triu_indices(n, 1)
    diff = z[:, None] - z[None, :]
    value = -float(np.sum(np.log(np.abs(diff[iu]))))

    r = s * s / total
    theta = np.concatenate([[0.0], x[n:]])
    g = np.real(np.exp(1j * theta) * g_sum)
    grad_s = -(2.0 * s / total) * (g - np.dot(r, g))
    grad_theta = np.imag(z * g_sum)[1:]
    return value, np.concatenate([grad_s, grad_theta])


def objective_gradient(x: np.ndarray, n: int) -> np.ndarray:
    """Analytic gradient of -log|V_n| in the (s, theta_1..theta_{n-1}) parameters."""
    return _objective(np.asarray(x, dtype=float), n)[1]


def objective_value(x: np.ndarray, n: int) -> float:
    return _objective(np.asarray(x, dtype=float), n)[0]


def snap_config(z: np.ndarray) -> np.ndarray:
    """Radii below the zero threshold become exact zeros, the rest rescaled to sum 1."""
    z = np.array(z, dtype=complex)
    r = np.abs(z)
    z[r < ZERO_RADIUS] = 0.0
    return z / np.sum(np.abs(z))


def criticality_residual_n(points) -> float:
    """
    Scale-free first-order residual: with w_j = e^{i theta_j} G_j over points
    with r_j above the zero threshold, max(max |Im w_j|, max |w_j - w_k|) / max |w_j|.
    """
    z = _points(points)
    g_sum = _pair_sums(z)
    if g_sum is None:
        return float("inf")
    r = np.abs(z)
    live = r > ZERO_RADIUS
    if np.count_nonzero(~live) > 1:
        return float("inf")
    w = (z[live] / r[live]) * g_sum[live]
    scale = float(np.max(np.abs(w)))
    if scale == 0.0:
        return float("inf")
    gap = float(np.max(np.abs(w[:, None] - w[None, :])))
    return max(float(np.max(np.abs(w.imag))), gap) / scale


def certified_value(points, digits: int = MP_DIGITS) -> str:
    """|V_n| re-evaluated with `digits` significant digits."""
    z = _points(points)
    with mp.workdps(digits):
        pts = [mp.mpc(float(p.real), float(p.imag)) for p in z]
        value = mp.mpf(1)
        for j in range(len(pts)):
            for k in range(j + 1, len(pts)):
                value *= abs(pts[k] - pts[j])
        return mp.nstr(value, digits)


def _canonical_key(points: np.ndarray):
    return tuple((round(p.real, CANONICAL_DIGITS), round(p.imag, CANONICAL_DIGITS)) for p in points)


def canonicalize(config) -> VnConfig:
    """
    Rotate so a largest-modulus point is real positive and sort by (r, theta) descending.

    Every largest-modulus point is tried as the anchor; the lexicographically
    smallest resulting sequence wins.
    """
    z = _points(config)
    r = np.abs(z)
    top = float(np.max(r))
    if top == 0.0:
        return VnConfig(z.copy())
    anchors = [a for a in range(z.size) if r[a] >= top * (1.0 - 10.0 ** -CANONICAL_DIGITS)]
    best = None
    for a in anchors:
        rotated = z * np.exp(-1j * np.angle(z[a]))
        rotated[a] = r[a]
        theta = np.where(np.abs(rotated) > 0, np.mod(np.angle(rotated), 2 * np.pi), 0.0)
        order = sorted(
            range(z.size),
            key=lambda j: (round(abs(rotated[j]), CANONICAL_DIGITS), round(theta[j], CANONICAL_DIGITS)),
            reverse=True,
        )
        candidate = rotated[order]
        if best is None or _canonical_key(candidate) < _canonical_key(best):
            best = candidate
    return VnConfig(best)


@dataclass(frozen=True)
class _RestartResult:
    index: int
    value: float
    points: np.ndarray
    converged: bool


def _initial_params(n: int, index: int, seed: int, include_candidate: bool) -> np.ndarray:
    base = _to_params(_start_config(n))
    if include_candidate and index == 0:
        return base
    rng = derived_rng(seed, index)
    if index % 2 == 1 or not include_candidate:
        s = rng.uniform(0.2, 1.0, size=n)
        theta = rng.uniform(0.0, 2 * np.pi, size=n - 1)
        return np.concatenate([s, theta])
    return base + RESTART_PERTURBATION * rng.normal(size=base.size)


def _run_restart(n: int, index: int, seed: int, tol: float, include_candidate: bool) -> _RestartResult:
    x0 = _initial_params(n, index, seed, include_candidate)
    res = minimize(
        _objective,
        x0,
        args=(n,),
        jac=True,
        method="BFGS",
        options={"gtol": max(tol, 1e-11), "maxiter": 5000},
    )
    z = snap_config(_from_params(res.x, n))
    value = abs(vandermonde_n(z))
    converged = bool(np.linalg.norm(objective_gradient(res.x, n)) < CONVERGED_GRADIENT)
    return _RestartResult(index, value, z, converged)


def _pick_best(results: Sequence[_RestartResult]) -> _RestartResult:
    top = max(r.value for r in results)
    tied = [r for r in results if r.value >= top * (1.0 - TIE_TOLERANCE)]
    return min(tied, key=lambda r: (_canonical_key(canonicalize(r.points).points), r.index))


def maximize_vn(
    n: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
    include_candidate: bool = True,
) -> OptimizerReport:
    """
    Multistart local ascent of |V_n|.

    Restart 0 starts at the known configuration, odd restarts start at random
    points and even ones perturb the known configuration by 0.3. Without
    include_candidate every restart starts at a random point. Each restart
    draws from its own (seed, index) stream and results are reduced in index
    order. Raw configurations of the restarts within NEAR_MAX_TOLERANCE of
    the best value are kept in restart_configs.
    """
    if n < 2:
        raise ValueError(f"maximize_vn needs n >= 2, got {n}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if tol <= 0:
        raise ValueError("tol must be positive")

    logger.info(f"Maximizing |V_{n}| with {restarts} restarts (seed={seed}, threads={threads})")
    indices = range(restarts)
    if threads <= 1:
        results = [_run_restart(n, i, seed, tol, include_candidate) for i in indices]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda i: _run_restart(n, i, seed, tol, include_candidate), indices))

    best = _pick_best(results)
    config = canonicalize(best.points)
    lam = lambda_n(n)
    report = OptimizerReport(
        n=n,
        best_value=float(best.value),
        best_config=config,
        lambda_n=lam,
        ratio=float(best.value / lam),
        restarts=restarts,
        converged_restarts=sum(1 for r in results if r.converged),
        criticality_residual=criticality_residual_n(config),
        seed=seed,
        tol=tol,
        certified_value=certified_value(config),
        restart_values=[float(r.value) for r in results],
        restart_configs=[VnConfig(r.points) for r in results if r.value >= best.value * (1.0 - NEAR_MAX_TOLERANCE)],
    )
    logger.info(f"|V_{n}| best {report.best_value:.15g}, ratio to lambda_n {report.ratio:.12g}")
    return report


def maximize_det_a(
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
):
    """
    Maximize |det_A| on the unit sphere of A.

    |det_A(z)| = |V_4(z^2)|^2 and ||z|| = 1 means sum |z_j^2| = 1, so the n = 4
    search runs on the squares (without seeding the known maximizer) and the
    principal square roots give the unit A-vector.

    Returns:
        (AVector, abs_det, OptimizerReport)
    """
    report = maximize_vn(4, restarts, seed, tol, threads, include_candidate=False)
    z = AVector(np.sqrt(report.best_config.points))
    return z, abs(det_A(z)), report


def sweep(
    n_min: int,
    n_max: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    threads: int = 1,
) -> pd.DataFrame:
    if n_min < 2 or n_max < n_min:
        raise ValueError(f"Invalid sweep range {n_min}..{n_max}")
    rows = []
    for n in range(n_min, n_max + 1):
        report = maximize_vn(n, restarts, seed, tol, threads)
        rows.append({
            "n": n,
            "lambda_n": report.lambda_n,
            "best_value": report.best_value,
            "ratio": report.ratio,
            "criticality_residual": report.criticality_residual,
            "restarts": report.restarts,
            "seed": report.seed,
        })
    return pd.DataFrame(rows, columns=["n", "lambda_n", "best_value", "ratio", "criticality_residual", "restarts", "seed"])
