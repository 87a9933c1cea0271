"""
Single-qubit algebra: Pauli matrices, SU(2) rotations, axis-angle decomposition and Bloch vectors.

Conventions: a rotation by angle theta about the unit axis n is U = exp(-i theta n.sigma / 2), the
right-handed Bloch rotation. Lists of pulses are always given in application order (first pulse
applied first).
"""
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..global_config import GlobalConfig
from .errors import ContractViolation


logger = logging.getLogger(__name__)

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Pauli basis {I, X, Y, Z}, also the operator basis of the chi-matrix
PAULIS = np.stack([IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z])
SIGMAS = PAULIS[1:]


@dataclass(frozen=True)
class AxisAngle:
    """
    A rotation given by a unit axis and an angle.

    Attributes:
        axis: Unit 3-vector.
        angle: Rotation angle in radians.
        indeterminate: True when the rotation is (numerically) the identity and the axis is
            arbitrary.
    """
    axis: np.ndarray
    angle: float
    indeterminate: bool = field(default=False)

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (3,):
            raise ContractViolation(f'Rotation axis must be a 3-vector, got shape {axis.shape}')
        object.__setattr__(self, 'axis', axis)


def is_unitary(u: np.ndarray, atol: float = GlobalConfig.UNITARITY_TOL) -> bool:
    """
    Check whether a 2x2 matrix is unitary within a tolerance.
    """
    u = np.asarray(u)
    return u.shape == (2, 2) and np.allclose(u.conj().T @ u, IDENTITY, rtol=0.0, atol=atol)


def pauli_vector_operator(vec: np.ndarray) -> np.ndarray:
    """
    Return v.sigma for a real 3-vector v.
    """
    return np.tensordot(np.asarray(vec, dtype=float), SIGMAS, axes=1)


def rotation_unitary(rotation: AxisAngle) -> np.ndarray:
    """
    Build the SU(2) matrix of a rotation.

    Args:
        rotation: The axis-angle pair. The axis must have unit norm.

    Returns:
        np.ndarray: The 2x2 unitary cos(theta/2) I - i sin(theta/2) n.sigma.

    Raises:
        ContractViolation: If the axis is not of unit norm.
    """
    axis = rotation.axis
    norm = float(np.linalg.norm(axis))
    if abs(norm - 1.0) > GlobalConfig.AXIS_NORM_TOL:
        raise ContractViolation(f'Rotation axis must have unit norm, got |n| = {norm:.15g}')

    half = 0.5 * rotation.angle
    return np.cos(half) * IDENTITY - 1j * np.sin(half) * pauli_vector_operator(axis)


def rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    """
    Shorthand for rotation_unitary(AxisAngle(axis, angle)).
    """
    return rotation_unitary(AxisAngle(np.asarray(axis, dtype=float), angle))


def axis_angle_of(u: np.ndarray) -> AxisAngle:
    """
    Decompose a unitary into its canonical rotation, ignoring the global phase.

    The canonical form has theta in [0, pi]. When theta is exactly pi the axis sign is fixed so
    that its largest component is positive. When U is within 1e-9 of +/-I the axis is reported
    as (0, 0, 1) and flagged indeterminate.

    Args:
        u: A 2x2 unitary.

    Returns:
        AxisAngle: The decomposition.

    Raises:
        ContractViolation: If u is not a unitary 2x2 matrix.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, atol=1e-9):
        raise ContractViolation('axis_angle_of expects a unitary 2x2 matrix')

    # U = e^{i alpha} (a0 I - i b.sigma), so w = e^{i alpha} (a0, b)
    traces = np.einsum('kij,ji->k', PAULIS, u) / 2.0
    w = np.array([traces[0], 1j * traces[1], 1j * traces[2], 1j * traces[3]])
    largest = int(np.argmax(np.abs(w)))
    w = (w * np.conj(w[largest]) / abs(w[largest])).real
    if w[0] < 0:
        w = -w
    w /= np.linalg.norm(w)

    a0, b = w[0], w[1:]
    b_norm = float(np.linalg.norm(b))
    angle = float(2.0 * np.arctan2(b_norm, a0))
    if b_norm < GlobalConfig.AXIS_INDETERMINATE_TOL:
        return AxisAngle(np.array([0.0, 0.0, 1.0]), angle, indeterminate=True)

    return AxisAngle(b / b_norm, angle)


def compose(unitaries: Sequence[np.ndarray]) -> np.ndarray:
    """
    Multiply pulses given in application order: [U1, U2, U3] -> U3 @ U2 @ U1.

    Raises:
        ContractViolation: If the list is empty.
    """
    if len(unitaries) == 0:
        raise ContractViolation('compose needs at least one unitary')

    total = np.asarray(unitaries[0], dtype=complex)
    for u in unitaries[1:]:
        total = np.asarray(u, dtype=complex) @ total

    return total


def apply_to_up(u: np.ndarray) -> np.ndarray:
    """
    Bloch vector of U|up>, where |up> is the +z eigenstate.
    """
    a, b = np.asarray(u, dtype=complex)[:, 0]
    coherence = np.conj(a) * b
    return np.array([2.0 * coherence.real, 2.0 * coherence.imag, abs(a) ** 2 - abs(b) ** 2])


def sigma_z_expectation(bloch: np.ndarray) -> float:
    """
    The measured signal <sigma_z> of a Bloch vector.
    """
    return float(bloch[2])


def bloch_rotation(u: np.ndarray) -> np.ndarray:
    """
    The SO(3) matrix R with R_ij = Tr(sigma_i U sigma_j U^dag) / 2.
    """
    u = np.asarray(u, dtype=complex)
    rotated = np.einsum('ab,jbc,dc->jad', u, SIGMAS, u.conj())
    return np.einsum('iab,jba->ij', SIGMAS, rotated).real / 2.0


def rodrigues_matrix(rotation_: AxisAngle) -> np.ndarray:
    """
    The 3x3 rotation matrix of an axis-angle pair from Rodrigues' formula.
    """
    n = rotation_.axis
    theta = rotation_.angle
    cross = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.cos(theta) * np.eye(3) + np.sin(theta) * cross + (1.0 - np.cos(theta)) * np.outer(n, n)


def rz_matrix(angle: float) -> np.ndarray:
    """
    3x3 rotation of Bloch vectors about +z.
    """
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
