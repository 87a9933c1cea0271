"""
File manager for run configurations, signal tables and JSON reports.
"""
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Optional, Union

import json5
import numpy as np
import pandas as pd

from ..run_config import ExperimentConfig
from .measurement import MeasurementRecord
from .protocol import SEQUENCE_ORDER, SequenceId, SignalVector


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
SIGNAL_COLUMNS = ['sequence_id', 'shots', 'up_counts', 'signal', 'stderr']
FLOAT_FORMAT = '%.17g'


def read_raw_config(path: PathLike) -> dict:
    """
    Read a run configuration document without validating it. JSON with comments or trailing
    commas is accepted.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the document is not a JSON object.
    """
    with open(path, 'r', encoding='utf-8') as handle:
        raw = json5.load(handle)

    if not isinstance(raw, dict):
        raise ValueError(f'configuration {path} must be a JSON object')
    return raw


def read_config(path: PathLike) -> ExperimentConfig:
    """
    Read and validate a run configuration.

    Args:
        path: The configuration file.

    Returns:
        ExperimentConfig: The validated configuration.

    Raises:
        FileNotFoundError: If the file does not exist.
        pydantic.ValidationError: If the configuration is invalid.
    """
    return ExperimentConfig.model_validate(read_raw_config(path))


def signals_table(
        signals: SignalVector,
        records: Optional[Iterable[MeasurementRecord]] = None
) -> pd.DataFrame:
    """
    The twelve signals as a table; exact signals have zero shots and zero stderr.
    """
    if records is not None:
        rows = [
            (r.sequence.value, r.shots, r.up_counts, r.signal_estimate, r.stderr) for r in records
        ]
    else:
        rows = [(s.value, 0, 0, float(v), 0.0) for s, v in zip(SEQUENCE_ORDER, signals.values)]

    return pd.DataFrame(rows, columns=SIGNAL_COLUMNS)


def write_table(table: pd.DataFrame, path: PathLike) -> Path:
    """
    Write a table as CSV with a header row and round-trip float precision.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info('Table written to: %s', path)
    return path


def read_signals_table(path: PathLike) -> SignalVector:
    """
    Read a signals table written by write_table (or by hand).

    Rows with positive shots carry their stderr floored at 1/shots; if every row has zero shots
    the signals are treated as exact.

    Raises:
        ValueError: If columns are missing, or a sequence id is unknown, duplicated or missing.
    """
    table = pd.read_csv(path, float_precision='round_trip')
    missing_columns = [c for c in ('sequence_id', 'signal') if c not in table.columns]
    if missing_columns:
        raise ValueError(f'signals table {path} lacks columns: {", ".join(missing_columns)}')

    ids = table['sequence_id'].astype(str).str.strip()
    known = {s.value for s in SEQUENCE_ORDER}
    unknown = sorted(set(ids) - known)
    if unknown:
        raise ValueError(f'unknown sequence id(s) in {path}: {", ".join(unknown)}')
    duplicated = sorted(set(ids[ids.duplicated()]))
    if duplicated:
        raise ValueError(f'duplicate sequence id(s) in {path}: {", ".join(duplicated)}')
    absent = [s.value for s in SEQUENCE_ORDER if s.value not in set(ids)]
    if absent:
        raise ValueError(f'missing sequence id(s) in {path}: {", ".join(absent)}')

    table = table.assign(sequence_id=ids).set_index('sequence_id').loc[[s.value for s in SEQUENCE_ORDER]]
    values = table['signal'].to_numpy(dtype=float)

    stderr = None
    if 'stderr' in table.columns and 'shots' in table.columns and (table['shots'] > 0).any():
        shots = table['shots'].to_numpy(dtype=float)
        floor = np.where(shots > 0, 1.0 / np.where(shots > 0, shots, 1.0), 0.0)
        stderr = np.maximum(table['stderr'].to_numpy(dtype=float), floor)

    return SignalVector(values, stderr)


def to_builtin(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_builtin(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, SequenceId):
        return value.value
    return value


def write_json_report(report: dict, path: PathLike) -> Path:
    """
    Write a JSON report with a stable key order.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(to_builtin(report), handle, indent=2, sort_keys=True)
        handle.write('\n')

    logger.info('Report written to: %s', path)
    return path
