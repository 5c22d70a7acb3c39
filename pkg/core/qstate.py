"""
Four-qubit states, the subspace A spanned by u0..u3, and the named states L and L'.

Amplitudes are indexed by bit quadruples b1b2b3b4 in row-major order,
index = 8*b1 + 4*b2 + 2*b3 + b4.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from utils.constants import NORMALIZED_TOLERANCE, OMEGA
from utils.errors import DomainError

logger = logging.getLogger(__name__)

# (index, sign) pairs of each basis vector, all amplitudes are +-1/2
_U_SUPPORT = (
    ((0b0000, 1), (0b0011, 1), (0b1100, 1), (0b1111, 1)),
    ((0b0000, 1), (0b0011, -1), (0b1100, -1), (0b1111, 1)),
    ((0b0101, 1), (0b0110, 1), (0b1001, 1), (0b1010, 1)),
    ((0b0101, 1), (0b0110, -1), (0b1001, -1), (0b1010, 1)),
)


def _as_vector(values, size, label) -> np.ndarray:
    arr = np.asarray(values, dtype=complex).reshape(-1)
    if arr.shape != (size,):
        raise DomainError(f"{label} needs {size} entries, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{label} has non-finite entries")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class QuartState:
    """Sixteen complex amplitudes of a four-qubit state."""

    amp: np.ndarray
    normalized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "amp", _as_vector(self.amp, 16, "QuartState"))

    @classmethod
    def from_tensor(cls, tensor, normalized=False) -> "QuartState":
        return cls(np.asarray(tensor, dtype=complex).reshape(16), normalized)

    @classmethod
    def basis(cls, index: int) -> "QuartState":
        """Computational basis vector e_{b1b2b3b4} for index 0..15."""
        if not 0 <= index < 16:
            raise DomainError(f"Basis index {index} out of range 0..15")
        amp = np.zeros(16, dtype=complex)
        amp[index] = 1.0
        return cls(amp, normalized=True)

    def tensor(self) -> np.ndarray:
        return self.amp.reshape(2, 2, 2, 2)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))

    def normalize(self) -> "QuartState":
        n = self.norm()
        if n == 0.0:
            raise DomainError("Cannot normalize the zero state")
        return QuartState(self.amp / n, normalized=True)

    def check_normalized(self) -> bool:
        """Lazy check of the caller-asserted flag."""
        return abs(self.norm() - 1.0) < NORMALIZED_TOLERANCE

    def inner(self, other: "QuartState") -> complex:
        return complex(np.vdot(self.amp, other.amp))

    def scaled(self, c: complex) -> "QuartState":
        return QuartState(c * self.amp)


@dataclass(frozen=True, eq=False)
class AVector:
    """Coordinates (z0, z1, z2, z3) in the u-basis of A."""

    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", _as_vector(self.z, 4, "AVector"))

    def __getitem__(self, j):
        return complex(self.z[j])

    def __iter__(self):
        return iter(complex(v) for v in self.z)

    def norm(self) -> float:
        return float(np.linalg.norm(self.z))

    def radius_sum(self) -> float:
        return float(np.sum(np.abs(self.z)))

    def polar(self) -> "PolarA":
        return PolarA(np.abs(self.z), np.angle(self.z))

    def scaled(self, c: complex) -> "AVector":
        return AVector(c * self.z)


@dataclass(frozen=True, eq=False)
class PolarA:
    r: np.ndarray
    theta: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float).reshape(-1)
        theta = np.asarray(self.theta, dtype=float).reshape(-1)
        if r.shape != (4,) or theta.shape != (4,):
            raise DomainError("PolarA needs 4 radii and 4 angles")
        if np.any(r < 0) or not np.all(np.isfinite(r)) or not np.all(np.isfinite(theta)):
            raise DomainError(f"Invalid polar coordinates r={r}, theta={theta}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)

    def to_avector(self) -> AVector:
        return AVector(self.r * np.exp(1j * self.theta))


def _build_basis() -> Tuple[np.ndarray, ...]:
    vectors = []
    for support in _U_SUPPORT:
        amp = np.zeros(16, dtype=complex)
        for index, sign in support:
            amp[index] = 0.5 * sign
        vectors.append(amp)
    return tuple(vectors)


_U = _build_basis()
# Columns are u_j
_U_MATRIX = np.vstack(_U).T


def basis_u(j: int) -> QuartState:
    """The normalized basis vector u_j of A, j in 0..3."""
    if j not in (0, 1, 2, 3):
        raise DomainError(f"u-basis index {j} out of range 0..3")
    return QuartState(_U[j], normalized=True)


def embed_A(z) -> QuartState:
    """sum_j z_j u_j"""
    if not isinstance(z, AVector):
        z = AVector(z)
    return QuartState(_U_MATRIX @ z.z)


def project_A(psi: QuartState) -> Tuple[AVector, float]:
    """Orthogonal projection onto A and the norm of what is left over."""
    z = _U_MATRIX.conj().T @ psi.amp
    residual = float(np.linalg.norm(psi.amp - _U_MATRIX @ z))
    return AVector(z), residual


def state_L() -> AVector:
    s = 1.0 / math.sqrt(3.0)
    return AVector([s, s * OMEGA, s * OMEGA.conjugate(), 0.0])


def state_Lprime() -> AVector:
    s = 1.0 / math.sqrt(3.0)
    w2 = OMEGA * OMEGA
    return AVector([s, s * w2, s * w2.conjugate(), 0.0])


def square_map(z) -> AVector:
    if not isinstance(z, AVector):
        z = AVector(z)
    return AVector(z.z * z.z)


def product_state(qubits) -> QuartState:
    """Tensor product of four single-qubit vectors (each a length-2 sequence)."""
    if len(qubits) != 4:
        raise DomainError("A product state needs four single-qubit vectors")
    amp = np.array([1.0 + 0j])
    for q in qubits:
        amp = np.kron(amp, np.asarray(q, dtype=complex))
    return QuartState(amp)


def random_state(rng: np.random.Generator, normalized=True) -> QuartState:
    amp = rng.normal(size=16) + 1j * rng.normal(size=16)
    if normalized:
        amp = amp / np.linalg.norm(amp)
    return QuartState(amp, normalized=normalized)


def random_avector(rng: np.random.Generator, scale=1.0) -> AVector:
    return AVector(scale * (rng.normal(size=4) + 1j * rng.normal(size=4)))
