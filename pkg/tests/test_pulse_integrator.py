"""
Tests for the time-ordered pulse integrator.
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.linalg import expm

from pulsetomo.global_config import rabi_angular_frequency
from pulsetomo.helpers import qubit_algebra as qa
from pulsetomo.helpers.pulse_integrator import (
    PhysicalPulseConfig,
    PhysicalPulseSet,
    envelope,
    integrate_pulse,
    time_ordered_product,
)
from pulsetomo.helpers.pulse_model import PulseId, extract_error_params


OMEGA = rabi_angular_frequency()
MHZ = 2.0 * math.pi * 1e6


def _square(detuning: float = 0.0, area: float = math.pi, phase: float = 0.0) -> PhysicalPulseConfig:
    flat = area / OMEGA
    return PhysicalPulseConfig(
        rabi_amplitude=OMEGA, detuning=detuning, carrier_phase=phase, flat_duration=flat, time_step=flat / 100
    )


def test_resonant_square_pi_pulse():
    np.testing.assert_allclose(integrate_pulse(_square()), -1j * qa.SIGMA_X, atol=1e-8)


def test_carrier_phase_selects_the_y_axis():
    np.testing.assert_allclose(integrate_pulse(_square(phase=math.pi / 2)), -1j * qa.SIGMA_Y, atol=1e-8)


def test_detuned_square_pulse_matches_matrix_exponential():
    config = _square(detuning=7 * MHZ)
    hamiltonian = 0.5 * (config.detuning * qa.SIGMA_Z + OMEGA * qa.SIGMA_X)
    np.testing.assert_allclose(
        integrate_pulse(config), expm(-1j * config.flat_duration * hamiltonian), atol=1e-10
    )


def test_empty_pulse_is_identity():
    config = PhysicalPulseConfig(rabi_amplitude=OMEGA, flat_duration=0.0, edge_duration=0.0)
    np.testing.assert_array_equal(integrate_pulse(config), qa.IDENTITY)


def test_time_ordering_puts_later_steps_left():
    rx, ry, rz = (qa.rotation(axis, 0.3) for axis in np.eye(3))
    np.testing.assert_allclose(time_ordered_product(np.array([rx, ry, rz])), rz @ ry @ rx, atol=1e-15)


def test_envelope_is_trapezoidal():
    config = PhysicalPulseConfig(
        rabi_amplitude=2.0, flat_duration=3e-9, edge_duration=1e-9, time_step=1e-11
    )
    values = envelope(config, np.array([0.0, 0.5e-9, 2e-9, 4.5e-9, 5e-9, 6e-9]))
    np.testing.assert_allclose(values, [0.0, 1.0, 2.0, 1.0, 0.0, 0.0], atol=1e-9)


def test_time_step_must_resolve_the_edges():
    with pytest.raises(ValidationError):
        PhysicalPulseConfig(rabi_amplitude=OMEGA, flat_duration=3e-9, edge_duration=1e-9, time_step=0.5e-9)
    with pytest.raises(ValidationError):
        PhysicalPulseConfig(rabi_amplitude=-1.0, flat_duration=3e-9)


def test_config_accepts_unit_suffixed_names():
    config = PhysicalPulseConfig.model_validate({
        'rabi_amplitude_rad_s': OMEGA, 'flat_duration_s': 3e-9, 'edge_duration_s': 1e-9,
        'detuning_rad_s': 0.0, 'carrier_phase_rad': 0.0, 'time_step_s': 1e-11,
    })
    assert config.total_duration == pytest.approx(5e-9)
    assert config.pulse_area == pytest.approx(math.pi / 2)


def test_default_pulse_set_is_ideal_on_resonance():
    params = PhysicalPulseSet.default().error_params()
    np.testing.assert_allclose(params.as_vector(), np.zeros(12), atol=1e-9)


def test_step_refinement_converges():
    config = PhysicalPulseSet.default(detuning=5 * MHZ).half_pi_x
    fine = config.model_copy(update={'time_step': config.time_step / 2})
    assert np.linalg.norm(integrate_pulse(config) - integrate_pulse(fine)) < 1e-6


def test_detuning_tilts_short_pulses_more():
    unitaries = PhysicalPulseSet.default(detuning=3 * MHZ).unitaries()
    _, _, eps_z = extract_error_params(unitaries[PulseId.PI_X], PulseId.PI_X)
    _, _, epsp_z = extract_error_params(unitaries[PulseId.HALF_PI_X], PulseId.HALF_PI_X)
    _, _, v_z = extract_error_params(unitaries[PulseId.PI_Y], PulseId.PI_Y)
    _, _, vp_z = extract_error_params(unitaries[PulseId.HALF_PI_Y], PulseId.HALF_PI_Y)

    assert eps_z > 0 and v_z > 0
    assert epsp_z > eps_z
    assert vp_z > v_z


def test_symmetric_pulses_have_no_transverse_tilt():
    unitaries = PhysicalPulseSet.default(detuning=-4 * MHZ).unitaries()
    _, eps_y, _ = extract_error_params(unitaries[PulseId.PI_X], PulseId.PI_X)
    _, v_x, _ = extract_error_params(unitaries[PulseId.PI_Y], PulseId.PI_Y)
    assert abs(eps_y) < 1e-9
    assert abs(v_x) < 1e-9
