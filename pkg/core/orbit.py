"""
Slot-wise SL(2)^4 / SU(2)^4 actions on four-qubit states, the 12-dimensional
tangent space of an orbit, the genericity test and the norm-minimality probes
along an orbit through a point of A.
"""

import enum
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from core.hyperdet import det4, det_A
from core.qstate import AVector, QuartState, embed_A
from utils.constants import (
    MAX_ABS_DET,
    RANK_RELATIVE_THRESHOLD,
    SL_PROBE_SCALES,
)
from utils.errors import DomainError
from utils.helpers import derived_rng

logger = logging.getLogger(__name__)

# Accepted drift in the unitary / determinant checks of LocalOperator
OPERATOR_TOLERANCE = 1e-10

_I2 = np.eye(2, dtype=complex)
_E = np.array([[0, 1], [0, 0]], dtype=complex)
_F = np.array([[0, 0], [1, 0]], dtype=complex)
_H = np.array([[1, 0], [0, -1]], dtype=complex)


class OperatorKind(enum.Enum):
    UNITARY = "unitary"
    DETERMINANT_ONE = "determinant-one"
    GENERATOR = "lie-algebra-generator"


@dataclass(frozen=True, eq=False)
class LocalOperator:
    """
    Four 2x2 matrices acting slot-wise.

    For a GENERATOR exactly one slot holds a traceless matrix and the other
    slots are None (the generator acts as X (x) I (x) I (x) I and so on).
    """

    m: Tuple[Optional[np.ndarray], ...]
    kind: OperatorKind

    def __post_init__(self):
        if len(self.m) != 4:
            raise DomainError(f"A local operator has 4 slots, got {len(self.m)}")
        mats = tuple(None if x is None else np.asarray(x, dtype=complex) for x in self.m)
        for x in mats:
            if x is not None and x.shape != (2, 2):
                raise DomainError("Each slot must hold a 2x2 matrix")
        object.__setattr__(self, "m", mats)

        if self.kind is OperatorKind.GENERATOR:
            carried = [x for x in mats if x is not None]
            if len(carried) != 1:
                raise DomainError("A generator carries exactly one slot matrix")
            if abs(np.trace(carried[0])) > OPERATOR_TOLERANCE:
                raise DomainError("Generator matrix must be traceless")
            return

        if any(x is None for x in mats):
            raise DomainError("Group elements need a matrix in every slot")
        for slot, x in enumerate(mats):
            if self.kind is OperatorKind.UNITARY:
                if np.max(np.abs(x.conj().T @ x - _I2)) > OPERATOR_TOLERANCE:
                    raise DomainError(f"Slot {slot} is not unitary")
            elif abs(np.linalg.det(x) - 1.0) > OPERATOR_TOLERANCE:
                raise DomainError(f"Slot {slot} does not have determinant one")

    @classmethod
    def identity(cls) -> "LocalOperator":
        return cls(tuple(_I2.copy() for _ in range(4)), OperatorKind.UNITARY)

    @property
    def slot(self) -> Optional[int]:
        """Slot carrying a generator matrix."""
        if self.kind is not OperatorKind.GENERATOR:
            return None
        return next(i for i, x in enumerate(self.m) if x is not None)

    def full_matrix(self) -> np.ndarray:
        """16x16 Kronecker product, group elements only."""
        self._require_group()
        out = np.array([[1.0 + 0j]])
        for x in self.m:
            out = np.kron(out, x)
        return out

    def compose(self, other: "LocalOperator") -> "LocalOperator":
        """self after other, both of the same kind."""
        self._require_group()
        other._require_group()
        if self.kind is not other.kind:
            raise DomainError(f"Cannot compose {self.kind.value} with {other.kind.value}")
        return LocalOperator(tuple(a @ b for a, b in zip(self.m, other.m)), self.kind)

    def _require_group(self):
        if self.kind is OperatorKind.GENERATOR:
            raise DomainError("A Lie-algebra generator was passed where a group element is required")


def _act(mats: Sequence[np.ndarray], psi: QuartState) -> QuartState:
    a, b, c, d = mats
    out = np.einsum("ai,bj,ck,dl,ijkl->abcd", a, b, c, d, psi.tensor())
    return QuartState.from_tensor(out)


def apply_local(g: LocalOperator, psi: QuartState) -> QuartState:
    g._require_group()
    return _act(g.m, psi)


def apply_generator(x: LocalOperator, psi: QuartState) -> QuartState:
    """Infinitesimal action X.psi of a single-slot generator."""
    if x.kind is not OperatorKind.GENERATOR:
        raise DomainError("Expected a Lie-algebra generator")
    mats = [_I2 if m is None else m for m in x.m]
    return _act(mats, psi)


def sl2_basis() -> List[LocalOperator]:
    """Raising, lowering and diagonal generators for each of the 4 slots."""
    basis = []
    for slot in range(4):
        for mat in (_E, _F, _H):
            slots = [None] * 4
            slots[slot] = mat.copy()
            basis.append(LocalOperator(tuple(slots), OperatorKind.GENERATOR))
    return basis


@dataclass(frozen=True, eq=False)
class TangentMap:
    rows: np.ndarray
    rank: int
    smallest_sv: float
    singular_values: np.ndarray


def tangent_map(psi: QuartState) -> TangentMap:
    rows = np.vstack([apply_generator(x, psi).amp for x in sl2_basis()])
    sv = np.linalg.svd(rows, compute_uv=False)
    largest = float(sv[0]) if sv.size else 0.0
    if largest == 0.0:
        rank = 0
    else:
        rank = int(np.sum(sv > RANK_RELATIVE_THRESHOLD * largest))
    return TangentMap(rows=rows, rank=rank, smallest_sv=float(sv[-1]), singular_values=sv)


def is_generic(psi: QuartState) -> bool:
    return tangent_map(psi).rank == 12


def kempf_ness_residual(z) -> float:
    """max_k |<z, X_k z>| over the 12 generators, z embedded in A."""
    psi = embed_A(z)
    return float(max(abs(psi.inner(apply_generator(x, psi))) for x in sl2_basis()))


def _traceless(rng: np.random.Generator, scale: float) -> np.ndarray:
    x = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    return x - 0.5 * np.trace(x) * _I2


def random_sl_operator(rng: np.random.Generator, scale: float = 1.0) -> LocalOperator:
    """exp of a random traceless matrix in every slot."""
    mats = tuple(expm(_traceless(rng, scale)) for _ in range(4))
    return LocalOperator(mats, OperatorKind.DETERMINANT_ONE)


def random_su_operator(rng: np.random.Generator) -> LocalOperator:
    mats = []
    for _ in range(4):
        x = _traceless(rng, 1.0)
        hermitian = 0.5 * (x + x.conj().T)
        mats.append(expm(1j * hermitian))
    return LocalOperator(tuple(mats), OperatorKind.UNITARY)


def probe_ratios(z, samples: int, seed: int, unitary: bool = False) -> np.ndarray:
    """
    ||g.z|| / ||z|| for `samples` random group elements g.

    Sample i draws from its own stream derived from (seed, i); determinant-one
    samples cycle through the entry scales 0.1, 0.5 and 1.0.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    psi = embed_A(z)
    base = psi.norm()
    if base == 0.0:
        raise DomainError("Norm probe needs a nonzero vector")
    ratios = np.empty(samples)
    for i in range(samples):
        rng = derived_rng(seed, i)
        if unitary:
            g = random_su_operator(rng)
        else:
            g = random_sl_operator(rng, SL_PROBE_SCALES[i % len(SL_PROBE_SCALES)])
        ratios[i] = apply_local(g, psi).norm() / base
    return ratios


def norm_min_probe(z, samples: int, seed: int, unitary: bool = False) -> float:
    return float(np.min(probe_ratios(z, samples, seed, unitary)))


@dataclass(frozen=True)
class InequalityChain:
    abs_det_gz: float
    abs_det_z: float
    scaled_det: float
    bound_z: float
    bound_gz: float
    links: Tuple[bool, bool, bool, bool]

    @property
    def holds(self) -> bool:
        return all(self.links)


def inequality_chain(z, g: LocalOperator, rel_tol: float = 1e-8) -> InequalityChain:
    """
    Terms of |Det(g.z)| = |Det(z)| = ||z||^24 |Det(z/||z||)| <= 3^-9 ||z||^24 <= 3^-9 ||g.z||^24.
    """
    if not isinstance(z, AVector):
        z = AVector(z)
    norm_z = z.norm()
    if norm_z == 0.0:
        raise DomainError("Inequality chain needs a nonzero vector")
    gz = apply_local(g, embed_A(z))

    abs_det_gz = abs(det4(gz))
    abs_det_z = abs(det_A(z))
    scaled_det = norm_z**24 * abs(det_A(z.scaled(1.0 / norm_z)))
    bound_z = MAX_ABS_DET * norm_z**24
    bound_gz = MAX_ABS_DET * gz.norm() ** 24

    def close(a, b):
        return abs(a - b) <= rel_tol * max(abs(a), abs(b), 1e-300)

    links = (
        close(abs_det_gz, abs_det_z),
        close(abs_det_z, scaled_det),
        scaled_det <= bound_z * (1 + rel_tol),
        bound_z <= bound_gz * (1 + rel_tol),
    )
    return InequalityChain(abs_det_gz, abs_det_z, scaled_det, bound_z, bound_gz, links)
