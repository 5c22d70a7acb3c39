"""
Local-unitary equivalence of the maximizers of |Det| on A.

Three slot-wise unitaries U0, U1, U2 swap u_i and u_{i+1} and fix the other
two basis vectors, so every permutation of the u-basis is an LU move. Any
maximizer is brought to L or L' by such permutations and a global phase.
"""

import logging
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from core.hyperdet import det_A
from core.orbit import LocalOperator, OperatorKind, apply_local
from core.qstate import AVector, QuartState, basis_u, embed_A, project_A, state_L, state_Lprime
from utils.constants import MAX_ABS_DET, OMEGA
from utils.errors import DomainError
from utils.helpers import derived_rng

logger = logging.getLogger(__name__)

PHASE_SKIP = 1e-12
CANONICAL_TOLERANCE = 1e-8

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


def _diag(a, b):
    return np.diag([a, b]).astype(complex)


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)

_PERMUTATION_SLOTS = (
    (_diag(1, -1j), _diag(1, -1j), _diag(1, 1j), _diag(1, 1j)),
    (_HADAMARD, _HADAMARD, _HADAMARD, _HADAMARD),
    (_diag(1, 1j), _diag(1, -1j), _diag(1, -1j), _diag(1, 1j)),
)


def permutation_unitary(i: int) -> LocalOperator:
    """U_i, swapping u_i and u_{i+1}."""
    if i not in (0, 1, 2):
        raise DomainError(f"Permutation unitary index {i} out of range 0..2")
    return LocalOperator(tuple(m.copy() for m in _PERMUTATION_SLOTS[i]), OperatorKind.UNITARY)


def u_basis_action(g: LocalOperator) -> np.ndarray:
    """Matrix <u_j, g u_k> of g restricted to the span of the u-basis."""
    out = np.zeros((4, 4), dtype=complex)
    for k in range(4):
        image = apply_local(g, basis_u(k))
        for j in range(4):
            out[j, k] = basis_u(j).inner(image)
    return out


def as_permutation(m: np.ndarray, tol: float = 1e-12) -> Optional[Tuple[int, ...]]:
    """pi with |m[pi(k), k]| = 1 when m is monomial with unit-modulus entries."""
    perm = []
    for k in range(4):
        rows = [j for j in range(4) if abs(m[j, k]) > tol]
        if len(rows) != 1 or abs(abs(m[rows[0], k]) - 1.0) > tol:
            return None
        perm.append(rows[0])
    if len(set(perm)) != 4:
        return None
    return tuple(perm)


def generated_permutations(max_word_length: int = 6) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """
    Breadth-first search over words in U0, U1, U2.

    Returns a map from each reached permutation of the u-basis (up to phases)
    to a shortest word producing it.
    """
    actions = [u_basis_action(permutation_unitary(i)) for i in range(3)]
    identity = np.eye(4, dtype=complex)
    found = {tuple(range(4)): ()}
    queue = deque([((), identity)])
    while queue:
        word, mat = queue.popleft()
        if len(word) >= max_word_length:
            continue
        for i, step in enumerate(actions):
            nxt = step @ mat
            perm = as_permutation(nxt)
            if perm is None:
                raise DomainError(f"Word {word + (i,)} does not act as a permutation")
            if perm not in found:
                found[perm] = word + (i,)
                queue.append((word + (i,), nxt))
    return found


@dataclass(frozen=True)
class MaximizerParams:
    zero_index: int
    phase: float
    orientation: int

    def __post_init__(self):
        if self.zero_index not in (0, 1, 2, 3):
            raise DomainError(f"zero_index {self.zero_index} out of range 0..3")
        if self.orientation not in (1, -1):
            raise DomainError("orientation must be +1 or -1")


def maximizer(params: MaximizerParams) -> AVector:
    """
    Unit A-vector whose squares are (1/3) e^{i(phase + orientation*2*pi*m/3)},
    m = 0, 1, 2, on the slots other than zero_index.

    The roots are taken as e^{i phase/2} (1, w, w*) / sqrt(3) for orientation +1
    and e^{i phase/2} (1, w^2, w*^2) / sqrt(3) for orientation -1, w = e^{i pi/3}.
    """
    if params.orientation == 1:
        roots = (1.0, OMEGA, OMEGA.conjugate())
    else:
        roots = (1.0, OMEGA**2, (OMEGA**2).conjugate())
    scale = complex(math.cos(params.phase / 2), math.sin(params.phase / 2)) / math.sqrt(3.0)
    z = np.zeros(4, dtype=complex)
    slots = [j for j in range(4) if j != params.zero_index]
    for slot, root in zip(slots, roots):
        z[slot] = scale * root
    return AVector(z)


@dataclass
class CanonicalTranscript:
    moves: List[dict] = field(default_factory=list)
    target: str = ""

    def swap(self, i: int):
        self.moves.append({"move": "swap", "unitary": i})

    def phase(self, angle: float):
        self.moves.append({"move": "phase", "angle": angle})

    def __len__(self):
        return len(self.moves)


def _apply_swap(z: AVector, i: int) -> AVector:
    out, _ = project_A(apply_local(permutation_unitary(i), embed_A(z)))
    return out


def _distance(z: AVector, target: AVector) -> float:
    return float(np.max(np.abs(z.z - target.z)))


def canonicalize_maximizer(z, tolerance: float = CANONICAL_TOLERANCE) -> Tuple[AVector, CanonicalTranscript]:
    """
    Bring a maximizer of |det_A| on the unit sphere to L or L'.

    The zero coordinate is moved to slot 3, a global phase makes z0 real
    positive and a U1 swap puts 3*z1^2 at w^2. Four sign patterns of
    (z1, z2) = (+-w, +-w^2)/sqrt(3) remain and each has a fixed finishing move.

    Raises:
        DomainError: z is not a unit maximizer.
    """
    if not isinstance(z, AVector):
        z = AVector(z)
    norm_gap = abs(z.norm() - 1.0)
    if norm_gap > 1e-9:
        raise DomainError(f"Not a unit vector: | ||z|| - 1 | = {norm_gap:.3e}")
    det_gap = abs(abs(det_A(z)) - MAX_ABS_DET) / MAX_ABS_DET
    if det_gap > 1e-6:
        raise DomainError(f"Not a maximizer: relative |det_A| gap {det_gap:.3e}")

    transcript = CanonicalTranscript()

    zero = int(np.argmin(np.abs(z.z)))
    for i in range(zero, 3):
        z = _apply_swap(z, i)
        transcript.swap(i)

    angle = -math.atan2(z[0].imag, z[0].real)
    if abs(angle) > PHASE_SKIP:
        z = z.scaled(complex(math.cos(angle), math.sin(angle)))
        transcript.phase(angle)

    w2, w4 = OMEGA**2, OMEGA**4
    if abs(3 * z[1] ** 2 - w4) < abs(3 * z[1] ** 2 - w2):
        z = _apply_swap(z, 1)
        transcript.swap(1)

    plus1 = (z[1] * OMEGA.conjugate()).real > 0
    plus2 = (z[2] * w2.conjugate()).real > 0
    if plus1 and plus2:
        angle = -math.pi / 3
        z = z.scaled(OMEGA.conjugate())
        transcript.phase(angle)
        for i in (0, 1):
            z = _apply_swap(z, i)
            transcript.swap(i)
    elif not plus1 and not plus2:
        z = z.scaled(OMEGA)
        transcript.phase(math.pi / 3)
        for i in (1, 0):
            z = _apply_swap(z, i)
            transcript.swap(i)
    elif not plus1 and plus2:
        z = _apply_swap(z, 1)
        transcript.swap(1)

    for name, target in (("L", state_L()), ("Lprime", state_Lprime())):
        if _distance(z, target) < tolerance:
            transcript.target = name
            return z, transcript
    raise DomainError(f"Canonicalization ended away from L and L': {z.z}")


def known_lu_witness() -> LocalOperator:
    """U1 after (iZ, iZ, iX, iX); maps L onto L' exactly."""
    flips = (1j * _SZ, 1j * _SZ, 1j * _SX, 1j * _SX)
    return LocalOperator(tuple(_HADAMARD @ f for f in flips), OperatorKind.UNITARY)


def su2_chart(v) -> np.ndarray:
    """cos|v| I + i sin|v| (v/|v|).sigma"""
    v = np.asarray(v, dtype=float)
    a = float(np.linalg.norm(v))
    sinc = np.sinc(a / np.pi)
    return math.cos(a) * _I2 + 1j * sinc * (v[0] * _SX + v[1] * _SY + v[2] * _SZ)


def chart_operator(x) -> LocalOperator:
    x = np.asarray(x, dtype=float).reshape(4, 3)
    return LocalOperator(tuple(su2_chart(v) for v in x), OperatorKind.UNITARY)


def _infidelity(x, psi: QuartState, phi: QuartState) -> float:
    image = apply_local(chart_operator(x), psi)
    return 1.0 - abs(phi.inner(image)) ** 2


def _lu_restart(index: int, psi: QuartState, phi: QuartState, seed: int):
    if index == 0:
        x0 = np.zeros(12)
    else:
        x0 = derived_rng(seed, index).normal(size=12)
    res = minimize(_infidelity, x0, args=(psi, phi), method="BFGS", options={"gtol": 1e-10})
    g = chart_operator(res.x)
    fidelity = min(1.0, abs(phi.inner(apply_local(g, psi))))
    return fidelity, g


def lu_search(psi: QuartState, phi: QuartState, restarts: int = 64, seed: int = 0,
              threads: int = 1) -> Tuple[float, LocalOperator]:
    """
    Best |<phi, U psi>| over slot-wise unitaries U found by multistart BFGS.

    Restart 0 starts at the identity; restart i > 0 draws its start from the
    (seed, i) stream.
    """
    if not psi.check_normalized() or not phi.check_normalized():
        raise DomainError("lu_search needs normalized states")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")

    if threads <= 1:
        results = [_lu_restart(i, psi, phi, seed) for i in range(restarts)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda i: _lu_restart(i, psi, phi, seed), range(restarts)))

    best_index = max(range(restarts), key=lambda i: (results[i][0], -i))
    fidelity, g = results[best_index]
    logger.info(f"LU search best fidelity {fidelity:.12f} (restart {best_index})")
    return fidelity, g
