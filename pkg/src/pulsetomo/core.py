"""
Core functionality of pulsetomo: one entry point per run mode.
"""
import logging
from pathlib import Path
from typing import Optional

import pandas as pd

from .helpers import file_manager as filem
from .helpers import measurement as meas
from .helpers import protocol
from .helpers.pulse_model import imperfect_unitaries
from .experiments import acceptance
from .experiments.qpt_correction import QptSweepResult, qpt_correction_sweep
from .experiments.sweeps import SweepResult, detuning_sweep, phase_sweep
from .run_config import ExperimentConfig


logger = logging.getLogger(__name__)


def _sidecar(path: Path) -> Path:
    """
    The JSON companion of a CSV output.
    """
    return path.with_suffix('.json') if path.suffix.lower() == '.csv' else path.with_name(path.name + '.json')


class PulseTomography:
    """
    The main class for running bootstrap tomography experiments.
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize the PulseTomography object.

        Args:
            config: A validated run configuration.
        """
        self.config = config
        self.inconsistent = False
        logger.info(
            'Mode: %s, source: %s, shots: %s',
            config.mode,
            'params' if config.params is not None else 'physical pulses',
            'exact' if config.shots is None else config.shots.shots_per_sequence,
        )

    @property
    def output_path(self) -> Optional[Path]:
        return Path(self.config.output_path) if self.config.output_path else None

    def run(self):
        """
        Run the configured mode and write its outputs.

        Returns:
            The in-memory result of the mode.

        Raises:
            ValueError: If the mode needs an input that the configuration lacks.
        """
        handlers = {
            'simulate': self.simulate,
            'analyze': self.analyze,
            'sweep-phase': self.sweep_phase,
            'sweep-detuning': self.sweep_detuning,
            'qpt': self.qpt,
            'verify': self.verify,
        }
        return handlers[self.config.mode]()

    def _unitaries(self) -> dict:
        if self.config.params is not None:
            return imperfect_unitaries(self.config.params)
        return self.config.physical_pulses.unitaries()

    def simulate(self) -> pd.DataFrame:
        """
        Simulate the twelve bootstrap signals, sampled when shots are configured.

        Returns:
            pd.DataFrame: The signals table.
        """
        exact = protocol.simulate_from_unitaries(self._unitaries())
        records = None
        if self.config.shots is not None:
            records = meas.sample_signals(exact, self.config.shots)

        table = filem.signals_table(exact, records)
        if self.output_path:
            filem.write_table(table, self.output_path)
        return table

    def analyze(self) -> protocol.EstimateReport:
        """
        Estimate the error parameters from a signals table.

        Returns:
            EstimateReport: The estimate, stderrs, covariance, consistency residual and flags.
        """
        if not self.config.signals_path:
            raise ValueError('analyze needs a signals file (signals_path or --signals)')

        signals = filem.read_signals_table(self.config.signals_path)
        report = protocol.estimate(signals, method=self.config.estimator, refit=False)
        self.inconsistent = report.model_inconsistent

        if self.output_path:
            payload = report.to_dict()
            payload['covariance'] = report.covariance
            payload['signals'] = signals.as_dict()
            filem.write_json_report(payload, self.output_path)
        return report

    def _write_sweep(self, result: SweepResult) -> None:
        self.inconsistent = bool(result.table['model_inconsistent'].any())
        if self.output_path:
            filem.write_table(result.table, self.output_path)
            filem.write_json_report(result.summary, _sidecar(self.output_path))

    def sweep_phase(self) -> SweepResult:
        """
        Sweep the pi/2_Y phase over the configured grid.
        """
        result = phase_sweep(
            self.config.true_params(),
            self.config.phase_grid_deg.values(),
            shots=self.config.shots,
            refit=self.config.refit,
            method=self.config.estimator,
        )
        self._write_sweep(result)
        return result

    def sweep_detuning(self) -> SweepResult:
        """
        Sweep the common detuning of the physical pulses over the configured grid.
        """
        if self.config.physical_pulses is None:
            raise ValueError('sweep-detuning needs physical_pulses, not params')

        result = detuning_sweep(
            self.config.physical_pulses,
            self.config.detuning_grid_mhz.values(),
            shots=self.config.shots,
            refit=self.config.refit,
            method=self.config.estimator,
        )
        self._write_sweep(result)
        return result

    def qpt(self) -> QptSweepResult:
        """
        Raw and bootstrap-corrected QPT over the configured sweep.
        """
        config = self.config
        if config.qpt_sweep == 'phase':
            values = config.phase_grid_deg.values()
            result = qpt_correction_sweep(
                'phase', values, process=config.qpt_process, baseline=config.true_params(),
                shots=config.shots, refit=config.refit, method=config.estimator,
            )
        else:
            if config.physical_pulses is None:
                raise ValueError('a detuning QPT sweep needs physical_pulses, not params')
            values = config.detuning_grid_mhz.values()
            result = qpt_correction_sweep(
                'detuning', values, process=config.qpt_process, pulses=config.physical_pulses,
                shots=config.shots, refit=config.refit, method=config.estimator,
            )

        if self.output_path:
            filem.write_table(result.table, self.output_path)
            filem.write_json_report(result.to_report(config.qpt_sweep, config.qpt_process), _sidecar(self.output_path))
        return result

    def verify(self) -> dict:
        """
        Run the acceptance suite.

        Returns:
            dict: The suite report.
        """
        report = acceptance.run_acceptance(self.config.effective_seed)
        if self.output_path:
            filem.write_json_report(report, self.output_path)
        return report
