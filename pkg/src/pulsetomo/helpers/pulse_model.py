"""
Parametric model of the four calibration pulses and their small errors.

Each pulse P carries an angle error and two off-axis axis components, expressed relative to its
nominal axis:

- x pulses (pi_X, pi/2_X): axis = normalize(1, eps_y, eps_z), angle = theta_nom + 2 * phi
- y pulses (pi_Y, pi/2_Y): axis = normalize(v_x, 1, v_z), angle = theta_nom + 2 * chi

The twelve parameters are stored in a fixed order, which is also the column order of the
bootstrap design matrix.
"""
import logging
import math
from enum import Enum
from typing import Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..global_config import GlobalConfig
from . import qubit_algebra as qa
from .errors import ContractViolation, NotACalibrationPulseError


logger = logging.getLogger(__name__)


class PulseId(str, Enum):
    """
    The four calibration pulses.
    """
    PI_X = 'PiX'
    PI_Y = 'PiY'
    HALF_PI_X = 'HalfPiX'
    HALF_PI_Y = 'HalfPiY'

    @property
    def nominal_axis_name(self) -> str:
        return 'x' if self in (PulseId.PI_X, PulseId.HALF_PI_X) else 'y'

    @property
    def nominal_axis(self) -> np.ndarray:
        return np.array([1.0, 0.0, 0.0]) if self.nominal_axis_name == 'x' else np.array([0.0, 1.0, 0.0])

    @property
    def nominal_angle(self) -> float:
        return math.pi if self in (PulseId.PI_X, PulseId.PI_Y) else math.pi / 2.0

    @property
    def parameter_names(self) -> tuple[str, str, str]:
        """
        Names of (angle error, first off-axis component, second off-axis component).
        """
        return _PULSE_PARAMETERS[self]


_PULSE_PARAMETERS = {
    PulseId.PI_X: ('phi', 'eps_y', 'eps_z'),
    PulseId.HALF_PI_X: ('phi_p', 'epsp_y', 'epsp_z'),
    PulseId.PI_Y: ('chi_e', 'v_x', 'v_z'),
    PulseId.HALF_PI_Y: ('chip', 'vp_x', 'vp_z'),
}

PARAMETER_NAMES = (
    'phi', 'eps_y', 'eps_z',
    'phi_p', 'epsp_y', 'epsp_z',
    'chi_e', 'v_x', 'v_z',
    'chip', 'vp_x', 'vp_z',
)
GAUGED_PARAMETER = 'epsp_y'


class PulseErrorParams(BaseModel):
    """
    The twelve small error parameters of the calibration pulses. Angle errors are in radians;
    axis components are dimensionless. Every value must satisfy |v| < 0.5.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra='forbid')

    phi: float = Field(default=0.0, alias='phi_rad', description='pi_X angle error')
    eps_y: float = Field(default=0.0, description='pi_X axis y component')
    eps_z: float = Field(default=0.0, description='pi_X axis z component')
    phi_p: float = Field(default=0.0, alias='phi_p_rad', description='pi/2_X angle error')
    epsp_y: float = Field(default=0.0, description='pi/2_X axis y component')
    epsp_z: float = Field(default=0.0, description='pi/2_X axis z component')
    chi_e: float = Field(default=0.0, alias='chi_e_rad', description='pi_Y angle error')
    v_x: float = Field(default=0.0, description='pi_Y axis x component')
    v_z: float = Field(default=0.0, description='pi_Y axis z component')
    chip: float = Field(default=0.0, alias='chip_rad', description='pi/2_Y angle error')
    vp_x: float = Field(default=0.0, description='pi/2_Y axis x component')
    vp_z: float = Field(default=0.0, description='pi/2_Y axis z component')

    @field_validator(*PARAMETER_NAMES)
    @classmethod
    def _check_small(cls, value: float) -> float:
        if not math.isfinite(value) or abs(value) >= GlobalConfig.PARAM_HARD_LIMIT:
            raise ValueError(
                f'error parameters must satisfy |v| < {GlobalConfig.PARAM_HARD_LIMIT}, got {value}'
            )
        return value

    @classmethod
    def from_vector(cls, values: np.ndarray, validate: bool = True) -> 'PulseErrorParams':
        """
        Build the parameters from a 12-vector in PARAMETER_NAMES order.

        With validate=False the hard bound is not enforced; estimators use this so that an
        out-of-regime estimate can still be reported together with its advisory flag.
        """
        values = np.asarray(values, dtype=float)
        if values.shape != (len(PARAMETER_NAMES),):
            raise ContractViolation(f'expected {len(PARAMETER_NAMES)} parameters, got shape {values.shape}')

        data = {name: float(v) for name, v in zip(PARAMETER_NAMES, values)}
        return cls(**data) if validate else cls.model_construct(**data)

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in PARAMETER_NAMES], dtype=float)

    def for_pulse(self, pulse: PulseId) -> tuple[float, float, float]:
        return tuple(getattr(self, name) for name in pulse.parameter_names)

    def with_updates(self, **updates: float) -> 'PulseErrorParams':
        """
        A validated copy with some parameters replaced.
        """
        data = self.model_dump()
        data.update(updates)
        return PulseErrorParams(**data)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_vector())))

    @property
    def linear_regime_advisory(self) -> bool:
        """
        True if any parameter exceeds the range where the linear signal model is accurate.
        """
        return self.max_abs > GlobalConfig.PARAM_ADVISORY_LIMIT

    def check_range(self) -> None:
        """
        Raise if any parameter violates the hard bound (possible for model_construct instances).
        """
        bad = [
            name for name in PARAMETER_NAMES
            if not abs(getattr(self, name)) < GlobalConfig.PARAM_HARD_LIMIT
        ]
        if bad:
            raise ContractViolation(f'parameters out of range |v| < 0.5: {", ".join(bad)}')

    def to_report(self) -> dict[str, float]:
        return self.model_dump(by_alias=True)


def pulse_axis(pulse: PulseId, params: PulseErrorParams) -> np.ndarray:
    """
    Unit rotation axis of an imperfect pulse.
    """
    _, first, second = params.for_pulse(pulse)
    if pulse.nominal_axis_name == 'x':
        axis = np.array([1.0, first, second])
    else:
        axis = np.array([first, 1.0, second])

    return axis / np.linalg.norm(axis)


def pulse_angle(pulse: PulseId, params: PulseErrorParams) -> float:
    return pulse.nominal_angle + 2.0 * params.for_pulse(pulse)[0]


def ideal_unitary(pulse: PulseId) -> np.ndarray:
    return qa.rotation(pulse.nominal_axis, pulse.nominal_angle)


def imperfect_unitary(pulse: PulseId, params: PulseErrorParams) -> np.ndarray:
    """
    The unitary implemented by an imperfect calibration pulse.

    Args:
        pulse: Which pulse.
        params: The error parameters.

    Returns:
        np.ndarray: The 2x2 unitary.

    Raises:
        ContractViolation: If a parameter is out of range.
    """
    params.check_range()
    return qa.rotation_unitary(qa.AxisAngle(pulse_axis(pulse, params), pulse_angle(pulse, params)))


def imperfect_unitaries(params: PulseErrorParams) -> dict[PulseId, np.ndarray]:
    return {pulse: imperfect_unitary(pulse, params) for pulse in PulseId}


def error_generator(pulse: PulseId, params: PulseErrorParams) -> np.ndarray:
    """
    First-order Hermitian error generator K with U ~= U_ideal (I - i K).

    For an axis tilt t (perpendicular to the nominal axis n0) and angle error delta,
    K = [delta n0 + (sin(theta0) t - (1 - cos(theta0)) n0 x t) / 2] . sigma.
    """
    delta, first, second = params.for_pulse(pulse)
    n0 = pulse.nominal_axis
    theta0 = pulse.nominal_angle
    tilt = np.array([0.0, first, second]) if pulse.nominal_axis_name == 'x' else np.array([first, 0.0, second])

    generator = delta * n0 + 0.5 * (np.sin(theta0) * tilt - (1.0 - np.cos(theta0)) * np.cross(n0, tilt))
    return qa.pauli_vector_operator(generator)


def extract_error_params(u: np.ndarray, pulse: PulseId) -> tuple[float, float, float]:
    """
    Recover (angle error, off-axis, off-axis) from a unitary assumed close to the nominal pulse.

    Args:
        u: The 2x2 unitary, e.g., from the physical integrator.
        pulse: Which calibration pulse it implements.

    Returns:
        tuple[float, float, float]: The parameter triple in the pulse's parameter order.

    Raises:
        NotACalibrationPulseError: If u is more than 0.3 rad away from the nominal rotation.
    """
    deviation = qa.axis_angle_of(ideal_unitary(pulse).conj().T @ np.asarray(u, dtype=complex))
    if deviation.angle > GlobalConfig.CALIBRATION_PULSE_MAX_DEVIATION:
        raise NotACalibrationPulseError(
            f'unitary is {deviation.angle:.3f} rad from the nominal {pulse.value} pulse'
        )

    decomposition = qa.axis_angle_of(u)
    axis, angle = decomposition.axis, decomposition.angle
    if float(axis @ pulse.nominal_axis) < 0.0:
        axis, angle = -axis, 2.0 * math.pi - angle

    angle_error = 0.5 * (angle - pulse.nominal_angle)
    if pulse.nominal_axis_name == 'x':
        return angle_error, axis[1] / axis[0], axis[2] / axis[0]

    return angle_error, axis[0] / axis[1], axis[2] / axis[1]


def params_from_unitaries(unitaries: Mapping[PulseId, np.ndarray], validate: bool = True) -> PulseErrorParams:
    """
    Extract all twelve parameters from the unitaries of the four pulses.
    """
    data = {}
    for pulse in PulseId:
        data.update(zip(pulse.parameter_names, map(float, extract_error_params(unitaries[pulse], pulse))))

    return PulseErrorParams(**data) if validate else PulseErrorParams.model_construct(**data)


def gauge_direction() -> np.ndarray:
    """
    The unobservable parameter direction: a common rotation of all pulse axes about z moves
    eps_y and epsp_y by +alpha and v_x and vp_x by -alpha.
    """
    direction = np.zeros(len(PARAMETER_NAMES))
    for name, sign in (('eps_y', 1.0), ('epsp_y', 1.0), ('v_x', -1.0), ('vp_x', -1.0)):
        direction[PARAMETER_NAMES.index(name)] = sign

    return direction


def gauge_fix(params: PulseErrorParams) -> PulseErrorParams:
    """
    Rotate all four pulse axes about z so that the pi/2_X axis has no y component, then
    re-express every axis in the parameter form. Angle errors are unchanged and epsp_y is 0.

    The rotation is a common frame change, so every simulated signal is unchanged.
    """
    half_pi_x_axis = pulse_axis(PulseId.HALF_PI_X, params)
    frame = qa.rz_matrix(-math.atan2(half_pi_x_axis[1], half_pi_x_axis[0]))

    data = params.model_dump()
    for pulse in PulseId:
        axis = frame @ pulse_axis(pulse, params)
        _, first, second = pulse.parameter_names
        if pulse.nominal_axis_name == 'x':
            data[first], data[second] = axis[1] / axis[0], axis[2] / axis[0]
        else:
            data[first], data[second] = axis[0] / axis[1], axis[2] / axis[1]

    data[GAUGED_PARAMETER] = 0.0
    return PulseErrorParams.model_construct(**{name: float(data[name]) for name in PARAMETER_NAMES})
