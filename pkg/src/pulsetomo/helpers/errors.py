"""
Exceptions raised by the numerical helpers.
"""


class ContractViolation(ValueError):
    """
    An input violates the documented contract of an operation, e.g., a non-unit rotation axis,
    an empty pulse list, or a signal outside [-1, 1].
    """


class NotACalibrationPulseError(ValueError):
    """
    A unitary is too far from the nominal rotation of a calibration pulse to be described by
    small error parameters.
    """
