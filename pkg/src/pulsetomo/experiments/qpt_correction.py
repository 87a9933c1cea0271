"""
QPT with and without bootstrap correction of the preparation and readout pulses.

At each sweep point the true pulses produce both the QPT data and the bootstrap signals. The
raw chi assumes ideal preparation/readout pulses; the corrected chi uses the pulses rebuilt from
the bootstrap estimate. Both are compared against a reference process: the same pipeline at
sweep value zero for the pi_Y process, the ideal identity for the identity process.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
import pandas as pd

from ..helpers import measurement as meas
from ..helpers import qpt
from ..helpers import qubit_algebra as qa
from ..helpers.pulse_integrator import PhysicalPulseSet
from ..helpers.pulse_model import PulseErrorParams, PulseId, imperfect_unitaries
from .sweeps import bootstrap_estimate, inject_phase, run_points


logger = logging.getLogger(__name__)

Process = Literal['pi_y', 'identity']
SweepKind = Literal['phase', 'detuning']


@dataclass
class QptPoint:
    """
    Raw and corrected reconstructions at one sweep point.
    """
    value: float
    raw: qpt.QptReconstruction
    corrected: qpt.QptReconstruction
    estimate: dict = field(default_factory=dict)


@dataclass
class QptSweepResult:
    table: pd.DataFrame
    points: list[QptPoint]
    reference_raw: qpt.ChiMatrix
    reference_corrected: qpt.ChiMatrix

    def to_report(self, sweep: str, process: str) -> dict:
        return {
            'sweep': sweep,
            'process': process,
            'reference_raw_chi': self.reference_raw.to_pairs(),
            'reference_corrected_chi': self.reference_corrected.to_pairs(),
            'points': [
                {
                    'value': p.value,
                    'raw_chi': p.raw.chi.to_pairs(),
                    'corrected_chi': p.corrected.chi.to_pairs(),
                    'raw_residual': p.raw.residual,
                    'corrected_residual': p.corrected.residual,
                    'estimate': p.estimate,
                }
                for p in self.points
            ],
        }


def qpt_data(
        chi: qpt.ChiMatrix,
        model: qpt.PrepReadoutModel,
        shots: Optional[meas.ShotConfig],
        stream_prefix: tuple[int, ...]
) -> qpt.QptData:
    """
    QPT signals of a process, sampled with shot noise when a ShotConfig is given.
    """
    exact = qpt.predict_signals(chi, model)
    if shots is None:
        return exact

    records = [
        meas.sample_signal(float(value), shots, (*stream_prefix, k)) for k, value in enumerate(exact.values)
    ]
    return qpt.QptData(
        [r.signal_estimate for r in records], np.array([r.floored_stderr for r in records])
    )


def corrected_qpt_point(
        unitaries: dict,
        process: Process,
        shots: Optional[meas.ShotConfig],
        idx: int,
        refit: bool,
        method: str = 'closed_form'
) -> tuple[qpt.QptReconstruction, qpt.QptReconstruction, dict]:
    """
    Reconstruct the process with the ideal and with the bootstrap-corrected pulse model.
    """
    process_unitary = qa.IDENTITY if process == 'identity' else unitaries[PulseId.PI_Y]
    data = qpt_data(
        qpt.chi_of_unitary(process_unitary),
        qpt.PrepReadoutModel.from_unitaries(unitaries),
        shots,
        (meas.QPT_STREAM, idx),
    )
    report = bootstrap_estimate(unitaries, shots, (meas.BOOTSTRAP_STREAM, idx), refit, method)
    corrected_model = qpt.PrepReadoutModel.from_params(report.params)

    raw = qpt.qpt_reconstruct(data, qpt.PrepReadoutModel.ideal())
    corrected = qpt.qpt_reconstruct(data, corrected_model)
    return raw, corrected, report.to_dict()


def qpt_correction_sweep(
        sweep: SweepKind,
        values: np.ndarray,
        process: Process = 'pi_y',
        baseline: Optional[PulseErrorParams] = None,
        pulses: Optional[PhysicalPulseSet] = None,
        shots: Optional[meas.ShotConfig] = None,
        refit: bool = True,
        method: str = 'closed_form'
) -> QptSweepResult:
    """
    Run raw and bootstrap-corrected QPT over a phase or detuning sweep.

    Args:
        sweep: 'phase' (values in degrees, injected into the pi/2_Y axis) or 'detuning'
            (values in MHz, applied to the physical pulse set).
        values: The sweep grid.
        process: The process under test.
        baseline: Pulse errors for the phase sweep.
        pulses: Physical pulses for the detuning sweep.
        shots: Shot noise for both QPT and bootstrap signals; exact when None.
        refit: Newton refit of the bootstrap estimate.
        method: Estimator of the bootstrap step.

    Returns:
        QptSweepResult: Fidelity and Hilbert-Schmidt distance table plus all chi matrices.
    """
    if sweep == 'phase':
        baseline = baseline if baseline is not None else PulseErrorParams()

        def unitaries_at(value: float) -> dict:
            return imperfect_unitaries(inject_phase(baseline, value))
    elif sweep == 'detuning':
        pulses = pulses if pulses is not None else PhysicalPulseSet.default()

        def unitaries_at(value: float) -> dict:
            return pulses.with_detuning(2.0 * math.pi * 1e6 * value).unitaries()
    else:
        raise ValueError(f'unknown QPT sweep: {sweep}')

    values = np.asarray(values, dtype=float)
    if process == 'identity':
        reference_raw = reference_corrected = qpt.chi_of_unitary(qa.IDENTITY)
    else:
        ref_raw, ref_corrected, _ = corrected_qpt_point(
            unitaries_at(0.0), process, shots, len(values), refit, method
        )
        reference_raw, reference_corrected = ref_raw.chi, ref_corrected.chi

    points: dict[int, QptPoint] = {}

    def point(idx: int, value: float) -> dict:
        raw, corrected, estimate = corrected_qpt_point(unitaries_at(value), process, shots, idx, refit, method)
        points[idx] = QptPoint(value=value, raw=raw, corrected=corrected, estimate=estimate)
        return {
            'sweep_value': value,
            'fidelity_raw': qpt.process_fidelity(raw.chi, reference_raw),
            'fidelity_corrected': qpt.process_fidelity(corrected.chi, reference_corrected),
            'hs_distance_raw': qpt.hs_distance(raw.chi, reference_raw),
            'hs_distance_corrected': qpt.hs_distance(corrected.chi, reference_corrected),
            'min_eigenvalue_raw': raw.chi.min_eigenvalue,
            'min_eigenvalue_corrected': corrected.chi.min_eigenvalue,
        }

    table = run_points(values, point, f'qpt {sweep} sweep')
    logger.info(
        'QPT %s sweep: min raw fidelity %.4f, min corrected fidelity %.4f',
        sweep, table['fidelity_raw'].min(), table['fidelity_corrected'].min()
    )
    return QptSweepResult(
        table=table,
        points=[points[idx] for idx in range(len(values))],
        reference_raw=reference_raw,
        reference_corrected=reference_corrected,
    )
