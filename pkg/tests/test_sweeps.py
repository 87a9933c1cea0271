"""
Tests for the phase and detuning sweeps.
"""
import math

import numpy as np
import pandas as pd
import pytest

from pulsetomo.experiments.sweeps import (
    Z_PARAMETERS,
    detuning_sweep,
    inject_phase,
    phase_sweep,
    run_points,
    z_error_slopes,
)
from pulsetomo.helpers.measurement import ShotConfig
from pulsetomo.helpers.pulse_integrator import PhysicalPulseSet
from pulsetomo.helpers.pulse_model import PARAMETER_NAMES, PulseErrorParams


def test_inject_phase_replaces_only_vp_x():
    baseline = PulseErrorParams(vp_x=0.01, phi=0.02)
    injected = inject_phase(baseline, 10.0)
    assert injected.vp_x == pytest.approx(math.sin(math.radians(10.0)))
    assert injected.phi == 0.02


def test_phase_sweep_with_a_baseline_vp_x_reaches_thirty_degrees():
    baseline = PulseErrorParams(vp_x=0.03, phi=0.01, eps_z=-0.02)
    table = phase_sweep(baseline, np.linspace(-30.0, 30.0, 5)).table

    np.testing.assert_allclose(table['injected_vp_x'], np.sin(np.radians(table['phase_deg'])), atol=1e-12)
    np.testing.assert_allclose(table['vp_x'], table['injected_vp_x'], atol=0.05)


def test_run_points_keeps_grid_order():
    table = run_points(np.arange(8.0), lambda idx, value: {'idx': idx, 'square': value ** 2}, 'squares')
    assert table['idx'].tolist() == list(range(8))
    assert table['square'].tolist() == [v ** 2 for v in range(8)]


def test_exact_phase_sweep_tracks_the_injected_phase():
    result = phase_sweep(PulseErrorParams(), np.array([-15.0, 0.0, 15.0]))
    table = result.table

    assert table['phase_deg'].tolist() == [-15.0, 0.0, 15.0]
    np.testing.assert_allclose(table['vp_x'], table['injected_vp_x'], atol=0.01)
    for name in PARAMETER_NAMES:
        if name != 'vp_x':
            np.testing.assert_allclose(table[name], 0.0, atol=0.02)
    assert result.summary['refit'] is True
    assert result.summary['shots'] is None


def test_phase_sweep_columns():
    table = phase_sweep(PulseErrorParams(), np.array([0.0, 5.0])).table
    for name in PARAMETER_NAMES:
        assert name in table.columns
        assert f'{name}_stderr' in table.columns
    assert {'consistency_residual', 'linear_regime_advisory', 'model_inconsistent'} <= set(table.columns)


def test_sampled_phase_sweep_is_reproducible():
    shots = ShotConfig(shots_per_sequence=500, seed=11)
    first = phase_sweep(PulseErrorParams(), np.linspace(-10.0, 10.0, 5), shots=shots).table
    second = phase_sweep(PulseErrorParams(), np.linspace(-10.0, 10.0, 5), shots=shots).table
    pd.testing.assert_frame_equal(first, second)
    assert first['vp_x_stderr'].gt(0.0).all()


def test_detuning_sweep_slopes():
    result = detuning_sweep(PhysicalPulseSet.default(), np.array([-3.0, 0.0, 3.0]))
    table, summary = result.table, result.summary

    for name in Z_PARAMETERS:
        np.testing.assert_allclose(table[name], table[f'true_{name}'], atol=0.03)
        assert summary['slopes_per_mhz'][name] > 0.0

    assert summary['half_pi_to_pi_ratio_x'] > 1.0
    assert summary['half_pi_to_pi_ratio_y'] > 1.0
    np.testing.assert_allclose(table['true_epsp_y'], 0.0, atol=1e-12)


def test_slopes_need_two_points():
    summary = z_error_slopes(pd.DataFrame({'detuning_mhz': [0.0], **{name: [0.0] for name in Z_PARAMETERS}}))
    assert summary['slopes_per_mhz'] is None
