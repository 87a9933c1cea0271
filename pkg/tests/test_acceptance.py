"""
Tests for the acceptance suite, run with reduced sample counts where a criterion allows it.
"""
import pytest

from pulsetomo.cli import EXIT_OK, main
from pulsetomo.experiments import acceptance
from pulsetomo.helpers.protocol import SEQUENCE_ORDER, coefficient_audit


SEED = 1


@pytest.mark.parametrize(
    'criterion, kwargs',
    [
        (acceptance.zero_fixed_point, {}),
        (acceptance.coefficient_audit, {}),
        (acceptance.gauge_invariance, {'count': 10}),
        (acceptance.consistency_relation, {'count': 10}),
        (acceptance.physical_cross_validation, {'count': 3}),
        (acceptance.qpt_round_trip, {'count': 5}),
        (acceptance.determinism, {}),
    ]
)
def test_fast_criteria_pass(criterion, kwargs):
    result = criterion(SEED, **kwargs)
    assert result.passed, result.metrics


def test_quadratic_convergence_with_fewer_draws():
    result = acceptance.quadratic_convergence(SEED, scales=(0.04, 0.02), count=20)
    assert result.passed, result.metrics
    assert len(result.metrics['ratios']) == 1


def test_suite_has_eleven_criteria():
    assert len(acceptance.CRITERIA) == 11


def test_audit_table_lists_every_sequence():
    text = acceptance.format_audit(*coefficient_audit())
    for sequence in SEQUENCE_ORDER:
        assert sequence.value in text


def test_phase_sweep_reproduction():
    result = acceptance.phase_sweep_reproduction(SEED)
    assert result.passed, result.metrics
    assert result.metrics['max_deviation'] <= 0.05


def test_qpt_correction_bands_over_the_full_sweep():
    result = acceptance.qpt_correction_bands(SEED)
    assert result.passed, result.metrics


def test_shot_noise_matches_propagated_covariance():
    result = acceptance.shot_noise_statistics(SEED)
    assert result.passed, result.metrics


def test_consistency_criterion_reports_the_nominal_factor():
    result = acceptance.consistency_relation(SEED, count=20)
    assert result.passed, result.metrics
    assert result.metrics['bound_factor'] == 24.0
    assert 'within_nominal_factor' in result.metrics


def test_verify_reports_are_byte_identical(tmp_path):
    first, second = tmp_path / 'first.json', tmp_path / 'second.json'
    assert main(['verify', '--seed', str(SEED), '--out', str(first)]) == EXIT_OK
    assert main(['verify', '--seed', str(SEED), '--out', str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()
