"""
Tests for raw versus bootstrap-corrected process tomography.
"""
import numpy as np
import pandas as pd
import pytest

from pulsetomo.core import PulseTomography
from pulsetomo.experiments.qpt_correction import qpt_correction_sweep
from pulsetomo.helpers.measurement import ShotConfig
from pulsetomo.run_config import ExperimentConfig


def test_phase_sweep_correction_bands():
    result = qpt_correction_sweep('phase', np.array([0.0, 30.0]), process='pi_y')
    table = result.table

    assert table['fidelity_raw'][0] == pytest.approx(1.0, abs=1e-9)
    assert 0.03 <= table['fidelity_raw'][0] - table['fidelity_raw'][1] <= 0.12
    assert table['fidelity_corrected'].min() >= 0.99
    assert table['hs_distance_corrected'][1] < table['hs_distance_raw'][1]
    assert [p.value for p in result.points] == [0.0, 30.0]


def test_identity_process_under_detuning():
    result = qpt_correction_sweep('detuning', np.array([-4.0, 4.0]), process='identity')
    table = result.table

    # raw chi is not positive, so its overlap with the identity can exceed 1
    raw_gap = (1.0 - table['fidelity_raw']).abs()
    corrected_gap = (1.0 - table['fidelity_corrected']).abs()
    assert (raw_gap > 1e-3).all()
    assert (corrected_gap < raw_gap).all()
    assert (table['hs_distance_corrected'] < table['hs_distance_raw']).all()
    assert (table['min_eigenvalue_raw'] < 0.0).any()


def test_report_holds_every_chi():
    result = qpt_correction_sweep('phase', np.array([-10.0, 10.0]))
    report = result.to_report('phase', 'pi_y')

    assert report['sweep'] == 'phase' and report['process'] == 'pi_y'
    assert len(report['points']) == 2
    assert len(report['points'][0]['raw_chi']) == 16
    assert len(report['reference_corrected_chi']) == 16
    assert 'params' in report['points'][1]['estimate']


def test_sampled_sweep_is_reproducible():
    shots = ShotConfig(shots_per_sequence=2000, seed=5)
    first = qpt_correction_sweep('phase', np.array([0.0, 20.0]), shots=shots).table
    second = qpt_correction_sweep('phase', np.array([0.0, 20.0]), shots=shots).table
    pd.testing.assert_frame_equal(first, second)


def test_unknown_sweep_is_rejected():
    with pytest.raises(ValueError):
        qpt_correction_sweep('amplitude', np.array([0.0, 1.0]))


def test_configured_estimator_reaches_the_bootstrap_step():
    config = ExperimentConfig(
        mode='qpt', estimator='least_squares', phase_grid_deg={'start': -10.0, 'stop': 10.0, 'count': 2}
    )
    result = PulseTomography(config).run()
    assert [p.estimate['method'] for p in result.points] == ['least_squares', 'least_squares']
