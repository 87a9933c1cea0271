"""
Tests for the command-line interface and its exit codes.
"""
import json

import pandas as pd
import pytest

from pulsetomo.cli import EXIT_BAD_INPUT, EXIT_INCONSISTENT, EXIT_OK, main
from pulsetomo.helpers.protocol import SEQUENCE_ORDER


def _write_config(path, config: dict):
    path.write_text(json.dumps(config), encoding='utf-8')
    return str(path)


def test_no_arguments_prints_help(capsys):
    assert main([]) == EXIT_OK
    assert 'simulate' in capsys.readouterr().out


def test_unknown_command_is_bad_input():
    with pytest.raises(SystemExit) as ex:
        main(['calibrate'])
    assert ex.value.code == EXIT_BAD_INPUT


def test_simulate_zero_errors(tmp_path):
    out = tmp_path / 'signals.csv'
    assert main(['simulate', '--out', str(out)]) == EXIT_OK

    table = pd.read_csv(out)
    assert table['sequence_id'].tolist() == [s.value for s in SEQUENCE_ORDER]
    assert table['signal'].abs().max() <= 1e-12
    assert (table['shots'] == 0).all()


def test_sampled_simulation_is_byte_identical(tmp_path):
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    for out in (first, second):
        assert main(['simulate', '--shots', '1000', '--seed', '3', '--out', str(out)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
    assert (pd.read_csv(first)['shots'] == 1000).all()


def test_simulate_then_analyze(tmp_path):
    config = _write_config(tmp_path / 'run.json', {'params': {'phi_rad': 0.01, 'eps_z': -0.02, 'vp_x': 0.015}})
    signals, report = tmp_path / 'signals.csv', tmp_path / 'estimate.json'
    assert main(['simulate', '--config', config, '--out', str(signals)]) == EXIT_OK
    assert main(['analyze', '--signals', str(signals), '--out', str(report)]) == EXIT_OK

    params = json.loads(report.read_text(encoding='utf-8'))['params']
    assert params['phi_rad'] == pytest.approx(0.01, abs=1e-3)
    assert params['eps_z'] == pytest.approx(-0.02, abs=1e-3)
    assert params['vp_x'] == pytest.approx(0.015, abs=1e-3)
    assert params['epsp_y'] == 0.0


def test_strict_analysis_of_inconsistent_data(tmp_path):
    path = tmp_path / 'signals.csv'
    rows = ['sequence_id,signal'] + [f'{s.value},{0.2 if s.value == "B3S3" else 0.0}' for s in SEQUENCE_ORDER]
    path.write_text('\n'.join(rows) + '\n', encoding='utf-8')

    assert main(['analyze', '--signals', str(path)]) == EXIT_OK
    assert main(['analyze', '--signals', str(path), '--strict']) == EXIT_INCONSISTENT


def test_invalid_config_is_bad_input(tmp_path):
    config = _write_config(tmp_path / 'run.json', {'params': {'phi_rad': 0.7}})
    assert main(['simulate', '--config', config]) == EXIT_BAD_INPUT


def test_both_parameter_sources_are_rejected(tmp_path):
    config = _write_config(tmp_path / 'run.json', {'params': {}, 'physical_pulses': {}})
    assert main(['simulate', '--config', config]) == EXIT_BAD_INPUT


def test_missing_sequence_is_bad_input(tmp_path):
    path = tmp_path / 'signals.csv'
    rows = ['sequence_id,signal'] + [f'{s.value},0.0' for s in SEQUENCE_ORDER[1:]]
    path.write_text('\n'.join(rows) + '\n', encoding='utf-8')
    assert main(['analyze', '--signals', str(path)]) == EXIT_BAD_INPUT


def test_analyze_needs_signals():
    assert main(['analyze']) == EXIT_BAD_INPUT


def test_detuning_sweep_uses_physical_pulses(tmp_path):
    config = _write_config(tmp_path / 'run.json', {'detuning_grid_mhz': {'start': -2, 'stop': 2, 'count': 3}})
    out = tmp_path / 'detuning.csv'
    assert main(['sweep-detuning', '--config', config, '--out', str(out)]) == EXIT_OK

    table = pd.read_csv(out)
    assert table['detuning_mhz'].tolist() == [-2.0, 0.0, 2.0]
    summary = json.loads((tmp_path / 'detuning.json').read_text(encoding='utf-8'))
    assert summary['half_pi_to_pi_ratio_x'] > 1.0


def test_phase_sweep_with_a_baseline_vp_x(tmp_path):
    config = _write_config(tmp_path / 'run.json', {
        'params': {'phi_rad': 0.01, 'eps_z': -0.02, 'vp_x': 0.03},
        'phase_grid_deg': {'start': -30, 'stop': 30, 'count': 5},
    })
    out = tmp_path / 'phase.csv'
    assert main(['sweep-phase', '--config', config, '--out', str(out)]) == EXIT_OK
    assert pd.read_csv(out)['injected_vp_x'].max() == pytest.approx(0.5)
