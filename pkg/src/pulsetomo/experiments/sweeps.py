"""
Parameter sweeps: the pi/2_Y phase sweep and the common-detuning sweep of the physical pulses.

Sweep points are independent and run on a thread pool; rows are always returned in sweep order
and every random stream is keyed by the point index, so results do not depend on scheduling.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..global_config import GlobalConfig
from ..helpers import measurement as meas
from ..helpers import protocol
from ..helpers.pulse_integrator import PhysicalPulseSet
from ..helpers.pulse_model import (
    PARAMETER_NAMES,
    PulseErrorParams,
    gauge_fix,
    imperfect_unitaries,
    params_from_unitaries,
)


logger = logging.getLogger(__name__)

Z_PARAMETERS = ('eps_z', 'epsp_z', 'v_z', 'vp_z')


@dataclass
class SweepResult:
    """
    A sweep table plus a JSON-ready summary.
    """
    table: pd.DataFrame
    summary: dict = field(default_factory=dict)


def bootstrap_estimate(
        unitaries: dict,
        shots: Optional[meas.ShotConfig],
        stream_prefix: tuple[int, ...],
        refit: bool,
        method: str = 'closed_form'
) -> protocol.EstimateReport:
    """
    Simulate the bootstrap signals of some pulse unitaries (with shot noise when configured)
    and estimate the error parameters.
    """
    exact = protocol.simulate_from_unitaries(unitaries)
    if shots is None:
        signals = exact
    else:
        signals = meas.records_to_signal_vector(meas.sample_signals(exact, shots, stream_prefix))

    return protocol.estimate(signals, method=method, refit=refit)


def inject_phase(baseline: PulseErrorParams, phase_deg: float) -> PulseErrorParams:
    """
    Baseline parameters with the pi/2_Y axis x component set to sin(phase); the baseline vp_x is
    replaced, not shifted.
    """
    return baseline.with_updates(vp_x=math.sin(math.radians(phase_deg)))


def _estimate_columns(report: protocol.EstimateReport) -> dict:
    row = dict(zip(PARAMETER_NAMES, map(float, report.params.as_vector())))
    row.update({f'{name}_stderr': float(err) for name, err in zip(PARAMETER_NAMES, report.stderr)})
    row.update({
        'consistency_residual': report.consistency_residual,
        'linear_regime_advisory': report.linear_regime_advisory,
        'model_inconsistent': report.model_inconsistent,
    })
    return row


def run_points(values: np.ndarray, worker: Callable[[int, float], dict], label: str) -> pd.DataFrame:
    """
    Evaluate a sweep point function over the grid concurrently, returning rows in grid order.
    """
    rows: dict[int, dict] = {}
    with ThreadPoolExecutor(max_workers=GlobalConfig.MAX_WORKERS) as executor:
        futures = {executor.submit(worker, idx, float(value)): idx for idx, value in enumerate(values)}
        for future in tqdm(
                as_completed(futures), total=len(futures), desc=label, disable=not GlobalConfig.SHOW_PROGRESS
        ):
            rows[futures[future]] = future.result()

    logger.info('%s: %d sweep points done', label, len(rows))
    return pd.DataFrame([rows[idx] for idx in range(len(values))])


def phase_sweep(
        baseline: PulseErrorParams,
        phases_deg: np.ndarray,
        shots: Optional[meas.ShotConfig] = None,
        refit: bool = True,
        method: str = 'closed_form'
) -> SweepResult:
    """
    Sweep the phase of the pi/2_Y pulse and re-estimate all parameters at each point.

    Args:
        baseline: Errors of all pulses apart from the injected phase.
        phases_deg: The phase grid in degrees.
        shots: Shot-noise configuration; exact signals when None.
        refit: Apply the one-step Newton refit (recommended once |vp_x| exceeds ~0.15).
        method: Estimator used at every point.

    Returns:
        SweepResult: One row per phase with the injected value, the estimates and their stderrs.
    """
    def point(idx: int, phase_deg: float) -> dict:
        truth = inject_phase(baseline, phase_deg)
        report = bootstrap_estimate(
            imperfect_unitaries(truth), shots, (meas.BOOTSTRAP_STREAM, idx), refit, method
        )
        row = {'phase_deg': phase_deg, 'injected_vp_x': truth.vp_x}
        row.update(_estimate_columns(report))
        return row

    table = run_points(np.asarray(phases_deg, dtype=float), point, 'phase sweep')
    summary = {
        'max_abs_vp_x_deviation': float(np.max(np.abs(table['vp_x'] - table['injected_vp_x']))),
        'refit': refit,
        'shots': None if shots is None else shots.shots_per_sequence,
    }
    return SweepResult(table=table, summary=summary)


def detuning_sweep(
        pulses: PhysicalPulseSet,
        detunings_mhz: np.ndarray,
        shots: Optional[meas.ShotConfig] = None,
        refit: bool = True,
        method: str = 'closed_form'
) -> SweepResult:
    """
    Apply a common detuning to the four physical pulses, integrate them, and estimate the errors.

    Rows carry both the bootstrap estimates and the gauge-fixed parameters extracted directly
    from the integrated unitaries (prefixed `true_`). The summary holds the slopes of the
    z-components versus detuning and the pi/2-to-pi slope ratios.
    """
    def point(idx: int, detuning_mhz: float) -> dict:
        unitaries = pulses.with_detuning(2.0 * math.pi * 1e6 * detuning_mhz).unitaries()
        report = bootstrap_estimate(unitaries, shots, (meas.BOOTSTRAP_STREAM, idx), refit, method)
        truth = gauge_fix(params_from_unitaries(unitaries, validate=False))
        row = {'detuning_mhz': detuning_mhz}
        row.update(_estimate_columns(report))
        row.update({f'true_{name}': float(v) for name, v in zip(PARAMETER_NAMES, truth.as_vector())})
        return row

    table = run_points(np.asarray(detunings_mhz, dtype=float), point, 'detuning sweep')
    return SweepResult(table=table, summary=z_error_slopes(table))


def z_error_slopes(table: pd.DataFrame) -> dict:
    """
    Least-squares slopes (per MHz) of the estimated z-components and the pi/2-to-pi ratios.
    """
    if len(table) < 2:
        return {'slopes_per_mhz': None, 'half_pi_to_pi_ratio_x': None, 'half_pi_to_pi_ratio_y': None}

    slopes = {
        name: float(np.polyfit(table['detuning_mhz'], table[name], 1)[0]) for name in Z_PARAMETERS
    }

    def ratio(half_pi: str, pi: str) -> Optional[float]:
        return slopes[half_pi] / slopes[pi] if slopes[pi] != 0.0 else None

    return {
        'slopes_per_mhz': slopes,
        'half_pi_to_pi_ratio_x': ratio('epsp_z', 'eps_z'),
        'half_pi_to_pi_ratio_y': ratio('vp_z', 'v_z'),
    }
