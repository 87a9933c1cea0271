"""
Time-ordered integration of trapezoidal microwave pulses in the rotating frame.

The Hamiltonian is H(t) = (detuning / 2) sigma_z + (Omega(t) / 2) (cos(phase) sigma_x +
sin(phase) sigma_y), with Omega(t) rising linearly over the edge, flat over the plateau, and
falling linearly over the second edge. Each segment is split into equal steps sampled at their
midpoints; every step is an exact 2x2 exponential.
"""
import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, NonNegativeFloat, PositiveFloat, model_validator

from ..global_config import GlobalConfig, rabi_angular_frequency
from . import qubit_algebra as qa
from .pulse_model import PulseErrorParams, PulseId, params_from_unitaries


logger = logging.getLogger(__name__)


class PhysicalPulseConfig(BaseModel):
    """
    Physical description of one trapezoidal pulse. Angular quantities are in rad/s and rad,
    durations in seconds.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra='forbid')

    rabi_amplitude: NonNegativeFloat = Field(alias='rabi_amplitude_rad_s')
    detuning: float = Field(default=0.0, alias='detuning_rad_s')
    carrier_phase: float = Field(default=0.0, alias='carrier_phase_rad')
    flat_duration: NonNegativeFloat = Field(alias='flat_duration_s')
    edge_duration: NonNegativeFloat = Field(default=0.0, alias='edge_duration_s')
    time_step: PositiveFloat = Field(default=GlobalConfig.DEFAULT_TIME_STEP_S, alias='time_step_s')

    @model_validator(mode='after')
    def _check_step(self) -> 'PhysicalPulseConfig':
        if self.edge_duration > 0 and self.time_step > self.edge_duration / 4.0:
            raise ValueError(
                f'time_step ({self.time_step:g} s) must not exceed a quarter of the edge duration'
                f' ({self.edge_duration:g} s)'
            )
        return self

    @property
    def total_duration(self) -> float:
        return self.flat_duration + 2.0 * self.edge_duration

    @property
    def pulse_area(self) -> float:
        """
        Integral of Omega(t), i.e., the rotation angle on resonance.
        """
        return self.rabi_amplitude * (self.flat_duration + self.edge_duration)

    def with_detuning(self, detuning: float) -> 'PhysicalPulseConfig':
        return self.model_copy(update={'detuning': float(detuning)})


def envelope(config: PhysicalPulseConfig, times: np.ndarray) -> np.ndarray:
    """
    The trapezoidal amplitude Omega(t) at the given times (zero outside the pulse).
    """
    times = np.asarray(times, dtype=float)
    edge, flat, amp = config.edge_duration, config.flat_duration, config.rabi_amplitude
    if edge == 0.0:
        return np.where((times >= 0.0) & (times < flat), amp, 0.0)

    rising = amp * times / edge
    falling = amp * (2.0 * edge + flat - times) / edge
    values = np.minimum(np.minimum(rising, falling), amp)
    return np.clip(values, 0.0, None) * ((times >= 0.0) & (times <= config.total_duration))


def _step_midpoints(config: PhysicalPulseConfig) -> tuple[np.ndarray, np.ndarray]:
    """
    Step midpoints and widths. Every segment boundary is a step boundary.
    """
    edge, flat = config.edge_duration, config.flat_duration
    midpoints, widths = [], []
    for start, duration in ((0.0, edge), (edge, flat), (edge + flat, edge)):
        if duration <= 0.0:
            continue
        count = max(1, math.ceil(duration / config.time_step - 1e-9))
        width = duration / count
        midpoints.append(start + width * (np.arange(count) + 0.5))
        widths.append(np.full(count, width))

    if not midpoints:
        return np.empty(0), np.empty(0)

    return np.concatenate(midpoints), np.concatenate(widths)


def _step_unitaries(fields: np.ndarray, widths: np.ndarray) -> np.ndarray:
    """
    exp(-i dt h.sigma / 2) for a stack of field vectors h, in closed form.
    """
    strength = np.linalg.norm(fields, axis=1)
    half_angle = 0.5 * strength * widths
    cos_part = np.cos(half_angle)
    with np.errstate(invalid='ignore', divide='ignore'):
        sin_over = np.where(strength > 0.0, np.sin(half_angle) / strength, 0.5 * widths)

    generator = np.einsum('ki,ijl->kjl', fields * sin_over[:, None], qa.SIGMAS)
    return cos_part[:, None, None] * qa.IDENTITY - 1j * generator


def time_ordered_product(steps: np.ndarray) -> np.ndarray:
    """
    Product of a stack of step unitaries with later steps on the left, by pairwise reduction.
    """
    if len(steps) == 0:
        return qa.IDENTITY.copy()

    while len(steps) > 1:
        if len(steps) % 2:
            steps = np.concatenate([steps, qa.IDENTITY[None, :, :]])
        steps = np.matmul(steps[1::2], steps[0::2])

    return steps[0]


def integrate_pulse(config: PhysicalPulseConfig) -> np.ndarray:
    """
    Integrate the time-dependent Schrodinger equation for one pulse.

    Args:
        config: The physical pulse.

    Returns:
        np.ndarray: The unitary of the whole pulse; the identity for a zero-length pulse.
    """
    midpoints, widths = _step_midpoints(config)
    amplitudes = envelope(config, midpoints)
    fields = np.column_stack([
        amplitudes * math.cos(config.carrier_phase),
        amplitudes * math.sin(config.carrier_phase),
        np.full_like(amplitudes, config.detuning),
    ])
    return time_ordered_product(_step_unitaries(fields, widths))


class PhysicalPulseSet(BaseModel):
    """
    Physical configurations of the four calibration pulses.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    pi_x: PhysicalPulseConfig
    pi_y: PhysicalPulseConfig
    half_pi_x: PhysicalPulseConfig
    half_pi_y: PhysicalPulseConfig

    @classmethod
    def default(cls, detuning: float = 0.0) -> 'PhysicalPulseSet':
        """
        The default pulse set: 62.5 MHz Rabi frequency, 1 ns edges, 5 ns pi/2 and 9 ns pi pulses.
        """
        amplitude = rabi_angular_frequency()

        def build(flat: float, phase: float) -> PhysicalPulseConfig:
            return PhysicalPulseConfig(
                rabi_amplitude=amplitude,
                detuning=detuning,
                carrier_phase=phase,
                flat_duration=flat,
                edge_duration=GlobalConfig.DEFAULT_EDGE_DURATION_S,
                time_step=GlobalConfig.DEFAULT_TIME_STEP_S,
            )

        return cls(
            pi_x=build(GlobalConfig.DEFAULT_FLAT_DURATION_PI_S, 0.0),
            pi_y=build(GlobalConfig.DEFAULT_FLAT_DURATION_PI_S, math.pi / 2.0),
            half_pi_x=build(GlobalConfig.DEFAULT_FLAT_DURATION_HALF_PI_S, 0.0),
            half_pi_y=build(GlobalConfig.DEFAULT_FLAT_DURATION_HALF_PI_S, math.pi / 2.0),
        )

    def config_for(self, pulse: PulseId) -> PhysicalPulseConfig:
        return getattr(self, _FIELD_OF[pulse])

    def with_detuning(self, detuning: float) -> 'PhysicalPulseSet':
        return PhysicalPulseSet(**{
            _FIELD_OF[pulse]: self.config_for(pulse).with_detuning(detuning) for pulse in PulseId
        })

    def unitaries(self) -> dict[PulseId, np.ndarray]:
        return {pulse: integrate_pulse(self.config_for(pulse)) for pulse in PulseId}

    def error_params(self, validate: bool = True) -> PulseErrorParams:
        """
        The error parameters of the integrated pulses, by direct decomposition.
        """
        return params_from_unitaries(self.unitaries(), validate=validate)


_FIELD_OF = {
    PulseId.PI_X: 'pi_x',
    PulseId.PI_Y: 'pi_y',
    PulseId.HALF_PI_X: 'half_pi_x',
    PulseId.HALF_PI_Y: 'half_pi_y',
}
