"""
Validated schema of a run configuration file.
"""
import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .global_config import GlobalConfig
from .helpers.measurement import ShotConfig
from .helpers.pulse_integrator import PhysicalPulseSet
from .helpers.pulse_model import PulseErrorParams


Mode = Literal['simulate', 'analyze', 'sweep-phase', 'sweep-detuning', 'qpt', 'verify']


class SweepGrid(BaseModel):
    """
    An evenly spaced, inclusive sweep grid.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    start: float
    stop: float
    count: int = Field(default=2, ge=2)

    @model_validator(mode='after')
    def _check_bounds(self) -> 'SweepGrid':
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError('sweep bounds must be finite')
        if self.stop <= self.start:
            raise ValueError(f'sweep stop ({self.stop}) must exceed start ({self.start})')
        return self

    @classmethod
    def from_tuple(cls, values: tuple[float, float, int]) -> 'SweepGrid':
        start, stop, count = values
        return cls(start=start, stop=stop, count=count)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


class ExperimentConfig(BaseModel):
    """
    One run of the toolkit. Exactly one parameter source is used: explicit `params`, or
    `physical_pulses` whose unitaries come from the integrator. When neither is given the mode's
    default is filled in (zero errors, or the default physical pulse set for detuning sweeps).
    """
    model_config = ConfigDict(extra='forbid')

    mode: Mode = 'simulate'
    params: Optional[PulseErrorParams] = None
    physical_pulses: Optional[PhysicalPulseSet] = None
    shots: Optional[ShotConfig] = None
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)

    phase_grid_deg: SweepGrid = Field(
        default_factory=lambda: SweepGrid.from_tuple(GlobalConfig.DEFAULT_PHASE_GRID_DEG)
    )
    detuning_grid_mhz: SweepGrid = Field(
        default_factory=lambda: SweepGrid.from_tuple(GlobalConfig.DEFAULT_DETUNING_GRID_MHZ)
    )
    qpt_process: Literal['pi_y', 'identity'] = 'pi_y'
    qpt_sweep: Literal['phase', 'detuning'] = 'phase'
    refit: bool = True
    estimator: Literal['closed_form', 'least_squares'] = 'closed_form'

    signals_path: Optional[str] = None
    output_path: Optional[str] = None
    strict: bool = False

    @model_validator(mode='after')
    def _one_parameter_source(self) -> 'ExperimentConfig':
        if self.params is not None and self.physical_pulses is not None:
            raise ValueError('give either params or physical_pulses, not both')

        if self.params is None and self.physical_pulses is None:
            uses_physical = self.mode == 'sweep-detuning' or (self.mode == 'qpt' and self.qpt_sweep == 'detuning')
            if uses_physical:
                self.physical_pulses = PhysicalPulseSet.default()
            else:
                self.params = PulseErrorParams()

        if self.shots is not None and self.seed is not None and self.shots.seed != self.seed:
            self.shots = self.shots.model_copy(update={'seed': self.seed})
        return self

    @property
    def effective_seed(self) -> int:
        if self.shots is not None:
            return self.shots.seed
        return self.seed if self.seed is not None else GlobalConfig.DEFAULT_SEED

    def true_params(self) -> PulseErrorParams:
        """
        The error parameters of the configured source.
        """
        if self.params is not None:
            return self.params
        return self.physical_pulses.error_params()
