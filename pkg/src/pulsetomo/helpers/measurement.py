"""
Projective-measurement shot noise for signals.

Every sample draws from its own counter-based stream keyed by (seed, stream id), so results do
not depend on the order or the concurrency in which samples are taken.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt

from ..global_config import GlobalConfig
from .errors import ContractViolation
from .protocol import SEQUENCE_ORDER, SequenceId, SignalVector


logger = logging.getLogger(__name__)

StreamId = Union[int, Sequence[int]]

# Stream namespaces keep bootstrap and QPT draws disjoint
BOOTSTRAP_STREAM = 0
QPT_STREAM = 1


class ShotConfig(BaseModel):
    """
    Shots per sequence and the master seed of the random streams.
    """
    model_config = ConfigDict(frozen=True, extra='forbid')

    shots_per_sequence: PositiveInt = Field(default=GlobalConfig.DEFAULT_SHOTS)
    seed: int = Field(default=GlobalConfig.DEFAULT_SEED, ge=0, lt=2 ** 64)


@dataclass(frozen=True)
class MeasurementRecord:
    """
    Outcome of measuring one signal.

    Attributes:
        sequence: The sequence measured, when the record belongs to a bootstrap run.
        shots: Number of shots.
        up_counts: Number of +1 outcomes.
        signal_estimate: 2 * up_counts / shots - 1.
        stderr: 2 * sqrt(p_hat (1 - p_hat) / shots); zero when p_hat is 0 or 1.
    """
    sequence: Optional[SequenceId]
    shots: int
    up_counts: int
    signal_estimate: float
    stderr: float

    @property
    def floored_stderr(self) -> float:
        """
        The stderr with a 1/shots floor, used when the record feeds a weighted estimate.
        """
        return max(self.stderr, 1.0 / self.shots)


def stream_generator(seed: int, stream_id: StreamId) -> np.random.Generator:
    """
    A Philox generator for one stream of the master seed.
    """
    key = (stream_id,) if isinstance(stream_id, (int, np.integer)) else tuple(stream_id)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))))


def sample_signal(
        true_signal: float,
        config: ShotConfig,
        stream_id: StreamId,
        sequence: Optional[SequenceId] = None
) -> MeasurementRecord:
    """
    Simulate shots_per_sequence projective measurements of sigma_z.

    Args:
        true_signal: The exact signal in [-1, 1].
        config: Shots and seed.
        stream_id: The stream key; the same (seed, stream_id) always gives the same record.
        sequence: Optional sequence label for the record.

    Returns:
        MeasurementRecord: The counts and the derived estimate.

    Raises:
        ContractViolation: If the signal lies outside [-1, 1].
    """
    if not math.isfinite(true_signal) or abs(true_signal) > 1.0 + GlobalConfig.SIGNAL_RANGE_TOL:
        raise ContractViolation(f'signal {true_signal} lies outside [-1, 1]')

    shots = config.shots_per_sequence
    probability = min(max(0.5 * (1.0 + true_signal), 0.0), 1.0)
    up_counts = int(stream_generator(config.seed, stream_id).binomial(shots, probability))
    p_hat = up_counts / shots

    return MeasurementRecord(
        sequence=sequence,
        shots=shots,
        up_counts=up_counts,
        signal_estimate=2.0 * p_hat - 1.0,
        stderr=2.0 * math.sqrt(p_hat * (1.0 - p_hat) / shots),
    )


def sample_signals(
        signals: SignalVector,
        config: ShotConfig,
        stream_prefix: Sequence[int] = (BOOTSTRAP_STREAM,)
) -> list[MeasurementRecord]:
    """
    Sample all twelve bootstrap signals, one stream per sequence.
    """
    return [
        sample_signal(float(value), config, (*stream_prefix, sequence.index), sequence)
        for sequence, value in zip(SEQUENCE_ORDER, signals.values)
    ]


def records_to_signal_vector(records: Iterable[MeasurementRecord]) -> SignalVector:
    """
    Collect bootstrap records into a SignalVector with floored stderrs.

    Raises:
        ContractViolation: If a sequence is missing or repeated.
    """
    by_sequence: dict[SequenceId, MeasurementRecord] = {}
    for record in records:
        if record.sequence is None:
            raise ContractViolation('record without a sequence label')
        if record.sequence in by_sequence:
            raise ContractViolation(f'duplicate record for {record.sequence.value}')
        by_sequence[record.sequence] = record

    return SignalVector.from_mapping(
        {s: r.signal_estimate for s, r in by_sequence.items()},
        {s: r.floored_stderr for s, r in by_sequence.items()},
    )


def predicted_stderr(signal: float, shots: int) -> float:
    """
    Standard error of the shot-noise estimate of a signal.
    """
    p = 0.5 * (1.0 + signal)
    return 2.0 * math.sqrt(max(p * (1.0 - p), 0.0) / shots)
