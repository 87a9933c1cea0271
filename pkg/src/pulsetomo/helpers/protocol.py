"""
The bootstrap protocol: twelve short pulse sequences, their signals, the linear design matrix,
and the estimators that invert it.

Every sequence starts in |up> and ends with a sigma_z measurement. An ideal sequence leaves the
Bloch vector on the equator, so each signal is first order in the error parameters.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, Mapping, Optional

import numpy as np

from ..global_config import GlobalConfig
from . import qubit_algebra as qa
from .errors import ContractViolation
from .pulse_model import (
    GAUGED_PARAMETER,
    PARAMETER_NAMES,
    PulseErrorParams,
    PulseId,
    imperfect_unitaries,
)


logger = logging.getLogger(__name__)

_X2, _Y2, _X, _Y = PulseId.HALF_PI_X, PulseId.HALF_PI_Y, PulseId.PI_X, PulseId.PI_Y


class SequenceId(str, Enum):
    """
    The twelve bootstrap sequences, grouped in three blocks.
    """
    B1S1 = 'B1S1'
    B1S2 = 'B1S2'
    B2S1 = 'B2S1'
    B2S2 = 'B2S2'
    B2S3 = 'B2S3'
    B2S4 = 'B2S4'
    B3S1 = 'B3S1'
    B3S2 = 'B3S2'
    B3S3 = 'B3S3'
    B3S4 = 'B3S4'
    B3S5 = 'B3S5'
    B3S6 = 'B3S6'

    @property
    def pulses(self) -> tuple[PulseId, ...]:
        """
        Pulses in application order (first applied first).
        """
        return SEQUENCE_PULSES[self]

    @property
    def block(self) -> int:
        return int(self.value[1])

    @property
    def index(self) -> int:
        return SEQUENCE_ORDER.index(self)


SEQUENCE_PULSES = {
    SequenceId.B1S1: (_X2,),
    SequenceId.B1S2: (_Y2,),
    SequenceId.B2S1: (_X, _X2),
    SequenceId.B2S2: (_Y, _Y2),
    SequenceId.B2S3: (_X2, _Y),
    SequenceId.B2S4: (_Y2, _X),
    SequenceId.B3S1: (_X2, _Y2),
    SequenceId.B3S2: (_Y2, _X2),
    SequenceId.B3S3: (_Y2, _X, _X2),
    SequenceId.B3S4: (_X2, _X, _Y2),
    SequenceId.B3S5: (_Y2, _Y, _X2),
    SequenceId.B3S6: (_X2, _Y, _Y2),
}
SEQUENCE_ORDER = tuple(SequenceId)

# Linear signal coefficients per sequence, keyed by parameter name
_DESIGN_ROWS = {
    SequenceId.B1S1: {'phi_p': -2},
    SequenceId.B1S2: {'chip': -2},
    SequenceId.B2S1: {'phi': 2, 'phi_p': 2},
    SequenceId.B2S2: {'chi_e': 2, 'chip': 2},
    SequenceId.B2S3: {'v_z': -2, 'phi_p': 2},
    SequenceId.B2S4: {'eps_z': 2, 'chip': 2},
    SequenceId.B3S1: {'epsp_y': -1, 'epsp_z': -1, 'vp_x': -1, 'vp_z': -1},
    SequenceId.B3S2: {'epsp_y': -1, 'epsp_z': 1, 'vp_x': -1, 'vp_z': 1},
    SequenceId.B3S3: {'epsp_y': -1, 'epsp_z': 1, 'vp_x': 1, 'vp_z': -1, 'eps_y': 2},
    SequenceId.B3S4: {'epsp_y': -1, 'epsp_z': -1, 'vp_x': 1, 'vp_z': 1, 'eps_y': 2},
    SequenceId.B3S5: {'epsp_y': 1, 'epsp_z': -1, 'vp_x': -1, 'vp_z': 1, 'v_x': 2},
    SequenceId.B3S6: {'epsp_y': 1, 'epsp_z': 1, 'vp_x': -1, 'vp_z': -1, 'v_x': 2},
}

# Closed-form solution: each parameter as a combination of signals, with epsp_y gauged to 0
_ESTIMATOR_ROWS = {
    'phi': {'B2S1': 0.5, 'B1S1': 0.5},
    'eps_y': {'B3S1': 0.25, 'B3S2': 0.25, 'B3S3': 0.25, 'B3S4': 0.25},
    'eps_z': {'B2S4': 0.5, 'B1S2': 0.5},
    'phi_p': {'B1S1': -0.5},
    'epsp_y': {},
    'epsp_z': {'B3S2': 0.25, 'B3S1': -0.25, 'B3S3': 0.25, 'B3S4': -0.25},
    'chi_e': {'B2S2': 0.5, 'B1S2': 0.5},
    'v_x': {'B3S5': 0.25, 'B3S6': 0.25, 'B3S1': -0.25, 'B3S2': -0.25},
    'v_z': {'B1S1': -0.5, 'B2S3': -0.5},
    'chip': {'B1S2': -0.5},
    'vp_x': {'B3S1': -0.5, 'B3S2': -0.5},
    'vp_z': {'B3S2': 0.25, 'B3S1': -0.25, 'B3S3': -0.25, 'B3S4': 0.25},
}


def _matrix_from_rows(rows: Mapping, row_keys, col_keys) -> np.ndarray:
    matrix = np.zeros((len(row_keys), len(col_keys)))
    for i, row in enumerate(row_keys):
        for col, coeff in rows[row].items():
            matrix[i, list(col_keys).index(col)] = coeff

    return matrix


DESIGN_MATRIX = _matrix_from_rows(_DESIGN_ROWS, SEQUENCE_ORDER, PARAMETER_NAMES)
ESTIMATOR_MATRIX = _matrix_from_rows(
    _ESTIMATOR_ROWS, PARAMETER_NAMES, [s.value for s in SEQUENCE_ORDER]
)
DESIGN_MATRIX.setflags(write=False)
ESTIMATOR_MATRIX.setflags(write=False)

_GAUGE_COLUMN = PARAMETER_NAMES.index(GAUGED_PARAMETER)
_FREE_COLUMNS = [i for i in range(len(PARAMETER_NAMES)) if i != _GAUGE_COLUMN]


def design_matrix() -> np.ndarray:
    """
    The 12x12 matrix M with S = M p to first order (rows: sequences, columns: parameters).
    """
    return DESIGN_MATRIX.copy()


def estimator_matrix() -> np.ndarray:
    """
    The 12x12 matrix J of the closed-form estimator, p = J S (rows: parameters, columns: sequences).
    """
    return ESTIMATOR_MATRIX.copy()


@dataclass
class SignalVector:
    """
    The twelve bootstrap signals in SequenceId order, with optional standard errors.
    """
    values: np.ndarray
    stderr: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(SEQUENCE_ORDER),):
            raise ContractViolation(f'a signal vector has 12 entries, got shape {self.values.shape}')
        if not np.all(np.isfinite(self.values)):
            raise ContractViolation('signals must be finite')
        if np.any(np.abs(self.values) > 1.0 + GlobalConfig.SIGNAL_RANGE_TOL):
            worst = SEQUENCE_ORDER[int(np.argmax(np.abs(self.values)))]
            raise ContractViolation(f'signal of {worst.value} lies outside [-1, 1]')
        if self.stderr is not None:
            self.stderr = np.asarray(self.stderr, dtype=float)
            if self.stderr.shape != self.values.shape or np.any(self.stderr < 0):
                raise ContractViolation('stderr must be a non-negative 12-vector')

    @classmethod
    def from_mapping(
            cls,
            values: Mapping[SequenceId, float],
            stderr: Optional[Mapping[SequenceId, float]] = None
    ) -> 'SignalVector':
        """
        Build a signal vector from per-sequence entries.

        Raises:
            ContractViolation: If a sequence is missing.
        """
        missing = [s.value for s in SEQUENCE_ORDER if s not in values]
        if missing:
            raise ContractViolation(f'missing signals for: {", ".join(missing)}')

        errors = None
        if stderr is not None:
            errors = [stderr[s] for s in SEQUENCE_ORDER]

        return cls(np.array([values[s] for s in SEQUENCE_ORDER]), errors)

    def __getitem__(self, sequence: SequenceId) -> float:
        return float(self.values[SequenceId(sequence).index])

    def as_dict(self) -> dict[str, float]:
        return {s.value: float(v) for s, v in zip(SEQUENCE_ORDER, self.values)}


@dataclass
class EstimateReport:
    """
    Result of the bootstrap inversion.

    Attributes:
        params: Estimated parameters (gauge: epsp_y = 0). Not range-validated.
        covariance: 12x12 parameter covariance; zeros without stderr input.
        consistency_residual: (S_B3S3 - S_B3S4) + (S_B3S5 - S_B3S6), zero under the linear model.
        method: 'closed_form' or 'least_squares'.
        refit: Whether a Newton correction was applied.
    """
    params: PulseErrorParams
    covariance: np.ndarray
    consistency_residual: float
    method: str = 'closed_form'
    refit: bool = False

    @property
    def stderr(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    @property
    def linear_regime_advisory(self) -> bool:
        return self.params.linear_regime_advisory

    @property
    def model_inconsistent(self) -> bool:
        return abs(self.consistency_residual) > GlobalConfig.INCONSISTENCY_THRESHOLD

    def to_dict(self) -> dict:
        return {
            'method': self.method,
            'refit': self.refit,
            'params': self.params.to_report(),
            'stderr': dict(zip(PARAMETER_NAMES, map(float, self.stderr))),
            'consistency_residual': float(self.consistency_residual),
            'linear_regime_advisory': bool(self.linear_regime_advisory),
            'model_inconsistent': bool(self.model_inconsistent),
        }


def simulate_from_unitaries(unitaries: Mapping[PulseId, np.ndarray]) -> SignalVector:
    """
    Exact signals of all twelve sequences for arbitrary pulse unitaries.
    """
    values = [
        qa.sigma_z_expectation(qa.apply_to_up(qa.compose([unitaries[p] for p in sequence.pulses])))
        for sequence in SEQUENCE_ORDER
    ]
    return SignalVector(np.clip(values, -1.0, 1.0))


def simulate_signals(params: PulseErrorParams) -> SignalVector:
    """
    Exact (non-linearized) signals of all twelve sequences.
    """
    return simulate_from_unitaries(imperfect_unitaries(params))


def simulate_signal(sequence: SequenceId, params: PulseErrorParams) -> float:
    """
    Exact signal <sigma_z> after one sequence applied to |up>.
    """
    unitaries = imperfect_unitaries(params)
    bloch = qa.apply_to_up(qa.compose([unitaries[p] for p in SequenceId(sequence).pulses]))
    return qa.sigma_z_expectation(bloch)


def linearized_signals(params: PulseErrorParams) -> np.ndarray:
    """
    First-order signals M p of all twelve sequences, unclipped.
    """
    return DESIGN_MATRIX @ params.as_vector()


def linearized_signal(sequence: SequenceId, params: PulseErrorParams) -> float:
    """
    The first-order expression of one sequence. Large parameters may give values outside [-1, 1].
    """
    return float(DESIGN_MATRIX[SequenceId(sequence).index] @ params.as_vector())


def consistency_residual(signals: SignalVector) -> float:
    s = signals.values
    idx = {seq: seq.index for seq in SEQUENCE_ORDER}
    return float(
        (s[idx[SequenceId.B3S3]] - s[idx[SequenceId.B3S4]])
        + (s[idx[SequenceId.B3S5]] - s[idx[SequenceId.B3S6]])
    )


def consistency_residual_second_order(params: PulseErrorParams) -> float:
    """
    Leading term of the consistency residual on exact signals:
    -4 (phi + 2 phi_p) eps_z - 4 (chi_e + 2 chip) v_z.

    With every |param| <= eps this is bounded by 24 eps^2.
    """
    return float(
        -4.0 * (params.phi + 2.0 * params.phi_p) * params.eps_z
        - 4.0 * (params.chi_e + 2.0 * params.chip) * params.v_z
    )


def _least_squares_operator(stderr: Optional[np.ndarray]) -> np.ndarray:
    """
    The 12x12 weighted least-squares inverse of the gauge-reduced design, zero row for epsp_y.
    """
    reduced = DESIGN_MATRIX[:, _FREE_COLUMNS]
    weights = np.ones(len(SEQUENCE_ORDER))
    if stderr is not None and np.all(stderr > 0):
        weights = 1.0 / stderr ** 2

    normal = reduced.T @ (weights[:, None] * reduced)
    operator = np.zeros((len(PARAMETER_NAMES), len(SEQUENCE_ORDER)))
    operator[_FREE_COLUMNS, :] = np.linalg.solve(normal, reduced.T * weights[None, :])
    return operator


def _inverse_operator(method: str, stderr: Optional[np.ndarray]) -> np.ndarray:
    if method == 'closed_form':
        return ESTIMATOR_MATRIX
    if method == 'least_squares':
        return _least_squares_operator(stderr)

    raise ContractViolation(f'unknown estimation method: {method}')


def _newton_step(operator: np.ndarray, signals: SignalVector, first: np.ndarray) -> np.ndarray:
    guess = PulseErrorParams.from_vector(first, validate=False)
    if guess.max_abs >= GlobalConfig.PARAM_HARD_LIMIT:
        logger.warning('Skipping refit: first estimate leaves the parameter domain (max |v| = %.3f)', guess.max_abs)
        return first

    residual = signals.values - simulate_signals(guess).values
    return first + operator @ residual


def estimate(
        signals: SignalVector,
        method: Literal['closed_form', 'least_squares'] = 'closed_form',
        refit: bool = False
) -> EstimateReport:
    """
    Invert the bootstrap signals into the twelve error parameters.

    Args:
        signals: The twelve signals.
        method: 'closed_form' (exact inverse of the gauge-fixed design) or 'least_squares'
            (weighted by the signal stderrs when given).
        refit: Apply one Newton correction using the exact signal model.

    Returns:
        EstimateReport: The estimate with epsp_y = 0 and its flags; the covariance is zero
        unless stderrs are present.
    """
    operator = _inverse_operator(method, signals.stderr)
    values = operator @ signals.values
    if refit:
        values = _newton_step(operator, signals, values)

    covariance = np.zeros((len(PARAMETER_NAMES), len(PARAMETER_NAMES)))
    if signals.stderr is not None:
        covariance = operator @ np.diag(signals.stderr ** 2) @ operator.T

    report = EstimateReport(
        params=PulseErrorParams.from_vector(values, validate=False),
        covariance=covariance,
        consistency_residual=consistency_residual(signals),
        method=method,
        refit=refit,
    )
    if report.linear_regime_advisory:
        logger.warning(
            'Estimate outside the linear regime (max |v| = %.3f > %.2f)',
            report.params.max_abs, GlobalConfig.PARAM_ADVISORY_LIMIT
        )
    if report.model_inconsistent:
        logger.warning('Model-inconsistent data: consistency residual %.4f', report.consistency_residual)

    return report


def estimate_with_uncertainty(
        signals: SignalVector,
        method: Literal['closed_form', 'least_squares'] = 'closed_form',
        refit: bool = False
) -> EstimateReport:
    """
    Like estimate(), but requires stderrs so that the covariance J diag(stderr^2) J^T is filled.

    Raises:
        ContractViolation: If the signals carry no stderr.
    """
    if signals.stderr is None:
        raise ContractViolation('estimate_with_uncertainty needs signal standard errors')

    return estimate(signals, method=method, refit=refit)


def coefficient_audit(delta: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """
    Numerical derivatives of the exact signals with respect to each parameter, alongside the
    design matrix.

    Returns:
        tuple[np.ndarray, np.ndarray]: (numerical 12x12, design 12x12).
    """
    numerical = np.zeros_like(DESIGN_MATRIX)
    for j in range(len(PARAMETER_NAMES)):
        step = np.zeros(len(PARAMETER_NAMES))
        step[j] = delta
        plus = simulate_signals(PulseErrorParams.from_vector(step)).values
        minus = simulate_signals(PulseErrorParams.from_vector(-step)).values
        numerical[:, j] = (plus - minus) / (2.0 * delta)

    # Disagreements are reported, never patched into the design matrix
    flipped = np.argwhere(np.sign(np.round(numerical)) * np.sign(DESIGN_MATRIX) < 0)
    for row, col in flipped:
        logger.warning(
            'Sign mismatch for %s / %s: numerical %.4f, design %+d',
            SEQUENCE_ORDER[row].value, PARAMETER_NAMES[col], numerical[row, col], int(DESIGN_MATRIX[row, col])
        )

    return numerical, design_matrix()
