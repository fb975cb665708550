"""Reading and validating turbine telemetry exports.

The default layout is eight semicolon-separated columns after one header line::

    time(hh:mm); power[kW]; speed nacelle; dir nacelle; speed 10m; dir 10m; speed 50m; dir 50m

Malformed rows are skipped and counted by reason; they never abort a load.
Blank fields count as malformed.
"""

from __future__ import annotations

import csv
import math
import os
from collections import Counter
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Literal, Sequence

import numpy as np

from windfit.empirical import Sample
from windfit.errors import EmptyDatasetError

SpeedColumn = Literal["nacelle", "10m", "50m"]
SPEED_COLUMNS: tuple[SpeedColumn, ...] = ("nacelle", "10m", "50m")
MINUTES_PER_DAY = 24 * 60
DELIMITER = ";"


@dataclass(frozen=True)
class ColumnSchema:
    """Zero-based column index of every field."""

    time_of_day: int = 0
    power_kw: int = 1
    wind_speed_nacelle: int = 2
    wind_dir_nacelle: int = 3
    wind_speed_10m: int = 4
    wind_dir_10m: int = 5
    wind_speed_50m: int = 6
    wind_dir_50m: int = 7

    @property
    def width(self) -> int:
        return max(getattr(self, f.name) for f in fields(self)) + 1


@dataclass(frozen=True)
class TelemetryRecord:
    time_of_day: int  # minutes since midnight
    power_kw: float
    wind_speed_nacelle: float
    wind_dir_nacelle: float
    wind_speed_10m: float
    wind_dir_10m: float
    wind_speed_50m: float
    wind_dir_50m: float

    def speed(self, column: SpeedColumn) -> float:
        return getattr(self, f"wind_speed_{column}")


@dataclass
class IngestReport:
    rows_read: int = 0
    rows_accepted: int = 0
    rows_rejected: int = 0
    rejection_reasons: Counter = field(default_factory=Counter)

    def reject(self, reason: str) -> None:
        self.rows_rejected += 1
        self.rejection_reasons[reason] += 1


class RowError(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


def parse_time(text: str) -> int:
    hh, sep, mm = text.strip().partition(":")
    if not sep or not hh.isdigit() or not mm.isdigit() or len(mm) != 2:
        raise RowError("bad_time")
    hours, minutes = int(hh), int(mm)
    if hours >= 24 or minutes >= 60:
        raise RowError("bad_time")
    return hours * 60 + minutes


def format_time(minutes: int) -> str:
    return f"{minutes // 60:02d}:{minutes % 60:02d}"


def _number(text: str) -> float:
    text = text.strip()
    if not text:
        raise RowError("blank_field")
    try:
        value = float(text)
    except ValueError:
        raise RowError("not_a_number") from None
    if not math.isfinite(value):
        raise RowError("not_finite")
    return value


def _speed(text: str) -> float:
    value = _number(text)
    if value < 0:
        raise RowError("negative_speed")
    return value


def _direction(text: str) -> float:
    return _number(text) % 360.0


def parse_row(row: Sequence[str], schema: ColumnSchema = ColumnSchema()) -> TelemetryRecord:
    if len(row) < schema.width:
        raise RowError("too_few_columns")
    return TelemetryRecord(
        time_of_day=parse_time(row[schema.time_of_day]),
        power_kw=_number(row[schema.power_kw]),
        wind_speed_nacelle=_speed(row[schema.wind_speed_nacelle]),
        wind_dir_nacelle=_direction(row[schema.wind_dir_nacelle]),
        wind_speed_10m=_speed(row[schema.wind_speed_10m]),
        wind_dir_10m=_direction(row[schema.wind_dir_10m]),
        wind_speed_50m=_speed(row[schema.wind_speed_50m]),
        wind_dir_50m=_direction(row[schema.wind_dir_50m]),
    )


def load_csv(
    path: str | os.PathLike,
    schema: ColumnSchema = ColumnSchema(),
) -> tuple[list[TelemetryRecord], IngestReport]:
    """Parse a telemetry file; raises ``OSError`` if unreadable and
    ``EmptyDatasetError`` if no row survives validation."""
    records: list[TelemetryRecord] = []
    report = IngestReport()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=DELIMITER)
        next(reader, None)  # header
        for row in reader:
            report.rows_read += 1
            try:
                records.append(parse_row(row, schema))
            except RowError as exc:
                report.reject(exc.reason)
            else:
                report.rows_accepted += 1
    if not records:
        raise EmptyDatasetError(f"{path}: no valid telemetry rows ({report.rows_read} read)")
    return records, report


def write_csv(
    records: Iterable[TelemetryRecord],
    path: str | os.PathLike,
    schema: ColumnSchema = ColumnSchema(),
    header: Sequence[str] | None = None,
) -> None:
    """Serialize records in ``schema`` layout; floats keep full precision."""
    names = [f.name for f in fields(TelemetryRecord)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=DELIMITER, lineterminator="\n")
        cols = [""] * schema.width
        for name in names:
            cols[getattr(schema, name)] = name
        writer.writerow(header if header is not None else cols)
        for rec in records:
            row = [""] * schema.width
            for name in names:
                value = getattr(rec, name)
                row[getattr(schema, name)] = format_time(value) if name == "time_of_day" else repr(value)
            writer.writerow(row)


def extract_sample(
    records: Sequence[TelemetryRecord],
    column: SpeedColumn,
    source: str | os.PathLike | None = None,
) -> Sample:
    """One speed column as a :class:`Sample` labelled with the column (and file)."""
    if column not in SPEED_COLUMNS:
        raise ValueError(f"unknown speed column {column!r}; choose from {SPEED_COLUMNS}")
    if not records:
        raise EmptyDatasetError("no records to extract from")
    values = np.fromiter((r.speed(column) for r in records), dtype=float, count=len(records))
    label = f"wind_speed_{column}" if source is None else f"{Path(source).name}:wind_speed_{column}"
    return Sample(values, source_label=label)


def sampling_interval_mode(records: Sequence[TelemetryRecord]) -> int:
    """Most common gap (minutes) between consecutive rows, wrapping at midnight."""
    if len(records) < 2:
        raise EmptyDatasetError("need two records to measure a sampling interval")
    minutes = np.array([r.time_of_day for r in records])
    gaps = np.diff(minutes) % MINUTES_PER_DAY
    values, counts = np.unique(gaps, return_counts=True)
    return int(values[np.argmax(counts)])


def load_values(path: str | os.PathLike) -> Sample:
    """Read a plain file of one number per line (the format ``sample`` writes)."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                values.append(float(line))
    if not values:
        raise EmptyDatasetError(f"{path}: no values")
    return Sample(np.array(values), source_label=Path(path).name)
