"""
A set of configurations used by the toolkit.
"""
import logging
import math
import os
from pathlib import Path

from dataclasses import dataclass
from dotenv import load_dotenv


load_dotenv()

_SRC_DIR = Path(__file__).resolve().parent


@dataclass(frozen=True)
class GlobalConfig:
    """
    A data class holding the configurations.
    """
    # Numerical tolerances
    UNITARITY_TOL = 1e-12
    AXIS_NORM_TOL = 1e-12
    AXIS_INDETERMINATE_TOL = 1e-9
    SIGNAL_RANGE_TOL = 1e-9
    HERMITIAN_TOL = 1e-10
    TRACE_TOL = 1e-6

    # Regime thresholds for the pulse error parameters
    PARAM_HARD_LIMIT = 0.5
    PARAM_ADVISORY_LIMIT = 0.15
    CALIBRATION_PULSE_MAX_DEVIATION = 0.3
    INCONSISTENCY_THRESHOLD = 0.1
    # |r| / eps^2 on exact signals: nominal factor and the bound of the second-order form
    CONSISTENCY_NOMINAL_FACTOR = 8.0
    CONSISTENCY_BOUND_FACTOR = 24.0

    # Physical pulse defaults: 5 ns pi/2 and 9 ns pi pulses with 1 ns edges
    DEFAULT_RABI_FREQUENCY_HZ = 62.5e6
    DEFAULT_EDGE_DURATION_S = 1e-9
    DEFAULT_FLAT_DURATION_HALF_PI_S = 3e-9
    DEFAULT_FLAT_DURATION_PI_S = 7e-9
    DEFAULT_TIME_STEP_S = 1e-11

    # Sweep defaults as (start, stop, count)
    DEFAULT_PHASE_GRID_DEG = (-30.0, 30.0, 13)
    DEFAULT_DETUNING_GRID_MHZ = (-5.0, 5.0, 11)
    DEFAULT_SHOTS = 10_000
    DEFAULT_SEED = int(os.getenv('PULSETOMO_SEED', '20240611'))

    MAX_WORKERS = int(os.getenv('PULSETOMO_MAX_WORKERS', '4'))
    SHOW_PROGRESS = os.getenv('PULSETOMO_SHOW_PROGRESS', 'False').lower() == 'true'
    LOG_LEVEL = os.getenv('PULSETOMO_LOG_LEVEL', 'INFO').upper()
    APP_STRINGS_FILE = _SRC_DIR / 'strings.json'


logging.basicConfig(
    level=GlobalConfig.LOG_LEVEL,
    format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)

# Capture warnings from the warnings module (numpy runtime warnings included)
if hasattr(logging, 'captureWarnings'):
    logging.captureWarnings(True)


def rabi_angular_frequency(rabi_frequency_hz: float = GlobalConfig.DEFAULT_RABI_FREQUENCY_HZ) -> float:
    """
    Convert a Rabi frequency in Hz into the angular drive amplitude used by the integrator.

    :param rabi_frequency_hz: The Rabi frequency in Hz.
    :return: The amplitude in rad/s.
    """
    return 2.0 * math.pi * rabi_frequency_hz
