"""
Tests for the single-qubit algebra helpers.
"""
import math

import numpy as np
import pytest

from pulsetomo.helpers import qubit_algebra as qa
from pulsetomo.helpers.errors import ContractViolation


X, Y, Z = np.eye(3)


def _random_axis(rng):
    axis = rng.normal(size=3)
    return axis / np.linalg.norm(axis)


def test_pi_rotation_about_x_is_minus_i_sigma_x():
    np.testing.assert_allclose(qa.rotation(X, math.pi), -1j * qa.SIGMA_X, atol=1e-15)


def test_rotation_is_unitary(rng):
    for _ in range(20):
        assert qa.is_unitary(qa.rotation(_random_axis(rng), rng.uniform(0, 2 * math.pi)))


def test_non_unit_axis_is_rejected():
    with pytest.raises(ContractViolation):
        qa.rotation([1.0, 0.1, 0.0], math.pi)


def test_axis_angle_round_trip(rng):
    for _ in range(50):
        axis, angle = _random_axis(rng), rng.uniform(0.05, math.pi - 0.05)
        found = qa.axis_angle_of(qa.rotation(axis, angle))
        assert not found.indeterminate
        assert found.angle == pytest.approx(angle, abs=1e-12)
        np.testing.assert_allclose(found.axis, axis, atol=1e-12)


def test_axis_angle_ignores_global_phase(rng):
    axis, angle = _random_axis(rng), 1.1
    u = qa.rotation(axis, angle)
    for phase in (0.3, 1.7, math.pi, -2.2):
        found = qa.axis_angle_of(np.exp(1j * phase) * u)
        assert found.angle == pytest.approx(angle, abs=1e-12)
        np.testing.assert_allclose(found.axis, axis, atol=1e-12)


def test_axis_angle_canonical_range(rng):
    for _ in range(20):
        angle = qa.axis_angle_of(qa.rotation(_random_axis(rng), rng.uniform(0, 4 * math.pi))).angle
        assert 0.0 <= angle <= math.pi + 1e-12


def test_axis_angle_of_pi_pulse():
    found = qa.axis_angle_of(-1j * qa.SIGMA_X)
    assert found.angle == pytest.approx(math.pi)
    np.testing.assert_allclose(found.axis, X, atol=1e-15)


@pytest.mark.parametrize('u', [qa.IDENTITY, -qa.IDENTITY, 1j * qa.IDENTITY])
def test_identity_is_indeterminate(u):
    found = qa.axis_angle_of(u)
    assert found.indeterminate
    assert found.angle == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_array_equal(found.axis, Z)


def test_compose_applies_first_pulse_first():
    rx, ry = qa.rotation(X, math.pi / 2), qa.rotation(Y, math.pi / 2)
    np.testing.assert_allclose(qa.compose([rx, ry]), ry @ rx)
    np.testing.assert_allclose(qa.compose([rx]), rx)


def test_compose_rejects_empty_list():
    with pytest.raises(ContractViolation):
        qa.compose([])


def test_bloch_vectors_of_quarter_turns():
    np.testing.assert_allclose(qa.apply_to_up(qa.rotation(X, math.pi / 2)), [0, -1, 0], atol=1e-15)
    np.testing.assert_allclose(qa.apply_to_up(qa.rotation(Y, math.pi / 2)), [1, 0, 0], atol=1e-15)
    assert qa.sigma_z_expectation(qa.apply_to_up(qa.rotation(X, math.pi))) == pytest.approx(-1.0)


def test_bloch_rotation_matches_rodrigues(rng):
    for _ in range(20):
        rotation = qa.AxisAngle(_random_axis(rng), rng.uniform(0, 2 * math.pi))
        u = qa.rotation_unitary(rotation)
        np.testing.assert_allclose(qa.bloch_rotation(u), qa.rodrigues_matrix(rotation), atol=1e-12)
        np.testing.assert_allclose(qa.apply_to_up(u), qa.rodrigues_matrix(rotation) @ Z, atol=1e-12)
