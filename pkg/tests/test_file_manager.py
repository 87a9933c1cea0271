"""
Tests for configuration, table and report files.
"""
import json

import numpy as np
import pytest
from pydantic import ValidationError

from pulsetomo.helpers import file_manager as filem
from pulsetomo.helpers import measurement as meas
from pulsetomo.helpers import protocol
from pulsetomo.helpers.protocol import SEQUENCE_ORDER, SignalVector
from pulsetomo.helpers.pulse_model import PulseErrorParams


def _write_rows(path, rows):
    lines = ['sequence_id,shots,up_counts,signal,stderr'] + [f'{r},0,0,0.0,0.0' for r in rows]
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')


def test_exact_signals_round_trip(tmp_path):
    signals = protocol.simulate_signals(PulseErrorParams(phi=0.013, vp_z=-0.021))
    path = filem.write_table(filem.signals_table(signals), tmp_path / 'signals.csv')
    found = filem.read_signals_table(path)
    np.testing.assert_array_equal(found.values, signals.values)
    assert found.stderr is None


def test_signal_floats_are_read_back_bit_exact(tmp_path):
    values = np.array([1.0 / 3.0, 0.1 + 0.2, -2.0 / 7.0, 5e-17, -0.999999999999999, 0.7071067811865476] * 2)
    path = filem.write_table(filem.signals_table(SignalVector(values)), tmp_path / 'signals.csv')
    np.testing.assert_array_equal(filem.read_signals_table(path).values, values)


def test_sampled_signals_keep_floored_stderr(tmp_path):
    exact = SignalVector(np.ones(12))
    records = meas.sample_signals(exact, meas.ShotConfig(shots_per_sequence=100, seed=1))
    path = filem.write_table(filem.signals_table(exact, records), tmp_path / 'signals.csv')
    found = filem.read_signals_table(path)
    np.testing.assert_allclose(found.stderr, 0.01)


def test_rows_may_come_in_any_order(tmp_path):
    path = tmp_path / 'signals.csv'
    _write_rows(path, [s.value for s in reversed(SEQUENCE_ORDER)])
    assert filem.read_signals_table(path).values.shape == (12,)


@pytest.mark.parametrize(
    'rows, message',
    [
        ([s.value for s in SEQUENCE_ORDER[:-1]], 'missing'),
        ([s.value for s in SEQUENCE_ORDER] + ['B1S1'], 'duplicate'),
        ([s.value for s in SEQUENCE_ORDER] + ['B4S1'], 'unknown'),
    ]
)
def test_bad_sequence_ids_are_named(tmp_path, rows, message):
    path = tmp_path / 'signals.csv'
    _write_rows(path, rows)
    with pytest.raises(ValueError, match=message):
        filem.read_signals_table(path)


def test_config_tolerates_comments(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(
        '{\n  // small errors\n  "params": {"phi_rad": 0.01, "vp_x": 0.02,},\n  "mode": "simulate",\n}\n',
        encoding='utf-8'
    )
    config = filem.read_config(path)
    assert config.params.phi == 0.01
    assert config.shots is None


def test_invalid_config_is_rejected(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text('{"params": {"phi_rad": 0.8}}', encoding='utf-8')
    with pytest.raises(ValidationError):
        filem.read_config(path)

    path.write_text('[1, 2]', encoding='utf-8')
    with pytest.raises(ValueError):
        filem.read_raw_config(path)


def test_json_report_is_plain_and_sorted(tmp_path):
    path = filem.write_json_report(
        {'b': np.float64(1.5), 'a': np.arange(2), 'flag': np.bool_(True)}, tmp_path / 'out' / 'report.json'
    )
    text = path.read_text(encoding='utf-8')
    assert json.loads(text) == {'a': [0, 1], 'b': 1.5, 'flag': True}
    assert text.index('"a"') < text.index('"b"')
