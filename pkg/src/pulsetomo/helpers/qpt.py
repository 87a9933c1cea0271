"""
Single-qubit quantum process tomography in the chi-matrix representation.

A process is rho -> sum_mn chi_mn E_m rho E_n^dag over the Pauli basis {I, X, Y, Z}. Data come
from four preparations {none, pi_X, pi/2_X, pi/2_Y} of |up> and three readouts
{none, pi/2_X, pi/2_Y} before a sigma_z measurement: twelve signals. The trace-preserving
condition adds four real equations and makes the 16-parameter inversion exactly determined.
"""
import logging
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.linalg import null_space

from ..global_config import GlobalConfig
from . import qubit_algebra as qa
from .errors import ContractViolation
from .pulse_model import PulseErrorParams, PulseId, ideal_unitary, imperfect_unitaries


logger = logging.getLogger(__name__)

PREPARATIONS = ('none', 'pi_x', 'half_pi_x', 'half_pi_y')
READOUTS = ('none', 'half_pi_x', 'half_pi_y')
_PULSE_OF = {'pi_x': PulseId.PI_X, 'half_pi_x': PulseId.HALF_PI_X, 'half_pi_y': PulseId.HALF_PI_Y}
SETTINGS = tuple((prep, readout) for prep in PREPARATIONS for readout in READOUTS)

_UP = np.array([[1, 0], [0, 0]], dtype=complex)


@dataclass(frozen=True)
class ChiMatrix:
    """
    A Hermitian 4x4 process matrix in the Pauli basis.
    """
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (4, 4):
            raise ContractViolation(f'chi must be 4x4, got shape {matrix.shape}')
        if not np.allclose(matrix, matrix.conj().T, rtol=0.0, atol=GlobalConfig.HERMITIAN_TOL):
            raise ContractViolation('chi must be Hermitian')
        object.__setattr__(self, 'matrix', matrix)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @property
    def is_trace_preserving(self) -> bool:
        return bool(np.allclose(tp_operator(self.matrix), qa.IDENTITY, atol=GlobalConfig.TRACE_TOL))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return np.einsum('mn,mab,bc,ndc->ad', self.matrix, qa.PAULIS, rho, qa.PAULIS.conj())

    def to_pairs(self) -> list[list[float]]:
        """
        The sixteen entries, row-major, as [real, imag] pairs.
        """
        return [[float(z.real), float(z.imag)] for z in self.matrix.ravel()]


def tp_operator(chi: np.ndarray) -> np.ndarray:
    """
    sum_mn chi_mn E_n^dag E_m, which equals I for a trace-preserving process.
    """
    return np.einsum('mn,nab,mbc->ac', np.asarray(chi), qa.PAULIS.conj().transpose(0, 2, 1), qa.PAULIS)


@dataclass(frozen=True)
class PrepReadoutModel:
    """
    The unitaries believed to implement the preparation and readout pulses.
    """
    preparations: Mapping[str, np.ndarray]
    readouts: Mapping[str, np.ndarray]

    @classmethod
    def from_unitaries(cls, unitaries: Mapping[PulseId, np.ndarray]) -> 'PrepReadoutModel':
        def pick(names):
            return {
                name: qa.IDENTITY.copy() if name == 'none' else np.asarray(unitaries[_PULSE_OF[name]], dtype=complex)
                for name in names
            }

        return cls(preparations=pick(PREPARATIONS), readouts=pick(READOUTS))

    @classmethod
    def ideal(cls) -> 'PrepReadoutModel':
        return cls.from_unitaries({pulse: ideal_unitary(pulse) for pulse in PulseId})

    @classmethod
    def from_params(cls, params: PulseErrorParams) -> 'PrepReadoutModel':
        return cls.from_unitaries(imperfect_unitaries(params))


@dataclass
class QptData:
    """
    The twelve QPT signals in SETTINGS order (preparation-major), with optional stderrs.

    Predictions for a non-positive chi may leave [-1, 1]; sampled signals are range-checked when
    they are measured.
    """
    values: np.ndarray
    stderr: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.shape != (len(SETTINGS),):
            raise ContractViolation(f'QPT data has {len(SETTINGS)} entries, got {self.values.size}')
        if not np.all(np.isfinite(self.values)):
            raise ContractViolation('QPT signals must be finite')


@dataclass(frozen=True)
class QptReconstruction:
    """
    A reconstructed chi with its fit diagnostics.
    """
    chi: ChiMatrix
    residual: float
    rank: int
    null_space_dim: int
    trace_preserving: bool

    @property
    def rank_deficient(self) -> bool:
        return self.null_space_dim > 0


def _hermitian_basis() -> np.ndarray:
    """
    Sixteen Hermitian 4x4 matrices spanning chi over the reals.
    """
    basis = []
    for m in range(4):
        for n in range(m, 4):
            unit = np.zeros((4, 4), dtype=complex)
            if m == n:
                unit[m, m] = 1.0
                basis.append(unit)
                continue
            unit[m, n] = unit[n, m] = 1.0
            basis.append(unit)
            imag = np.zeros((4, 4), dtype=complex)
            imag[m, n], imag[n, m] = -1j, 1j
            basis.append(imag)

    return np.array(basis)


_HERMITIAN_BASIS = _hermitian_basis()


def _signal_map(model: PrepReadoutModel) -> np.ndarray:
    """
    Complex 12x16 map A with signal_k = sum_mn A[k, 4m + n] chi_mn.
    """
    daggers = qa.PAULIS.conj().transpose(0, 2, 1)
    rows = []
    for prep, readout in SETTINGS:
        u_prep, u_read = model.preparations[prep], model.readouts[readout]
        rho = u_prep @ _UP @ u_prep.conj().T
        observable = u_read.conj().T @ qa.SIGMA_Z @ u_read
        # Tr(O E_m rho E_n^dag)
        rows.append(np.einsum('ab,mbc,cd,nda->mn', observable, qa.PAULIS, rho, daggers).ravel())

    return np.array(rows)


def _real_design(model: PrepReadoutModel) -> np.ndarray:
    return np.einsum('kj,bj->kb', _signal_map(model), _HERMITIAN_BASIS.reshape(16, 16)).real


def _tp_constraints() -> tuple[np.ndarray, np.ndarray]:
    """
    Four real equations Tr(P_k sum_mn chi_mn E_n E_m) / 2 = delta_k0.
    """
    rows = []
    for pauli in qa.PAULIS:
        rows.append([0.5 * np.trace(pauli @ tp_operator(basis)).real for basis in _HERMITIAN_BASIS])

    return np.array(rows), np.array([1.0, 0.0, 0.0, 0.0])


def chi_of_unitary(u: np.ndarray) -> ChiMatrix:
    """
    The chi-matrix of a unitary process: chi = a a^dag with a_m = Tr(E_m^dag U) / 2.
    """
    coefficients = np.einsum('mba,ba->m', qa.PAULIS.conj(), np.asarray(u, dtype=complex)) / 2.0
    return ChiMatrix(np.outer(coefficients, coefficients.conj()))


def predict_signals(chi: ChiMatrix, model: PrepReadoutModel) -> QptData:
    """
    The twelve QPT signals of a process under a preparation/readout model. The map is linear in
    chi and the values are not clipped.
    """
    return QptData((_signal_map(model) @ chi.matrix.ravel()).real)


def qpt_reconstruct(
        data: QptData,
        model: PrepReadoutModel,
        trace_preserving: bool = True
) -> QptReconstruction:
    """
    Linear-inversion reconstruction of chi.

    Args:
        data: The twelve measured signals.
        model: The preparation and readout unitaries assumed in the inversion.
        trace_preserving: Impose the four trace-preservation equations (16 equations for 16
            unknowns). Without them the minimum-norm solution is returned and flagged.

    Returns:
        QptReconstruction: chi with residual, rank and null-space diagnostics.
    """
    design = _real_design(model)
    target = data.values
    if trace_preserving:
        constraints, constants = _tp_constraints()
        design = np.vstack([design, constraints])
        target = np.concatenate([target, constants])

    solution, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    null_dim = null_space(design).shape[1]
    residual = float(np.linalg.norm(design[:len(SETTINGS)] @ solution - data.values))
    if null_dim > 0:
        logger.warning('QPT inversion is rank deficient (null space dimension %d); minimum-norm chi returned', null_dim)

    chi = ChiMatrix(np.tensordot(solution, _HERMITIAN_BASIS, axes=1))
    return QptReconstruction(
        chi=chi, residual=residual, rank=int(rank), null_space_dim=int(null_dim), trace_preserving=trace_preserving
    )


def process_fidelity(chi_a: ChiMatrix, chi_b: ChiMatrix) -> float:
    """
    Re Tr(chi_a chi_b); equals 1 for identical unitary processes.
    """
    return float(np.trace(chi_a.matrix @ chi_b.matrix).real)


def hs_distance(chi_a: ChiMatrix, chi_b: ChiMatrix) -> float:
    """
    Frobenius norm of chi_a - chi_b.
    """
    return float(np.linalg.norm(chi_a.matrix - chi_b.matrix))
