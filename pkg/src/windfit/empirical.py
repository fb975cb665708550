"""Observational summaries of a wind-speed sample: ECDF, histogram, plotting positions."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Literal, Sequence, Union

import numpy as np

from windfit.errors import DegenerateDataError, DomainError, EmptyDatasetError

BinRule = Union[Literal["fd", "sturges"], int]
PositionRule = Literal["hazen", "weibull"]

DEFAULT_GRID_POINTS = 1000


@dataclass(frozen=True, eq=False)
class Sample:
    """A validated one-dimensional series of wind speeds (m/s).

    ``values`` keeps the input order and is stored as a read-only float array.
    """

    values: np.ndarray
    source_label: str = ""
    _sorted: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float).ravel()
        if arr.size == 0:
            raise EmptyDatasetError("a sample needs at least one observation")
        if not np.all(np.isfinite(arr)):
            raise DomainError("sample values must be finite")
        if np.any(arr < 0):
            raise DomainError("wind speeds must be nonnegative")
        arr.setflags(write=False)
        srt = np.sort(arr)
        srt.setflags(write=False)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "_sorted", srt)

    def __len__(self) -> int:
        return self.values.size

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def sorted(self) -> np.ndarray:
        return self._sorted

    @property
    def digest(self) -> str:
        """Content hash, used to check that models were fitted on this sample."""
        return hashlib.sha1(self.values.tobytes()).hexdigest()

    def scaled(self, factor: float) -> Sample:
        return Sample(self.values * factor, self.source_label)

    def without_zeros(self) -> Sample:
        return Sample(self.values[self.values > 0], self.source_label)


@dataclass(frozen=True, eq=False)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)


@dataclass(frozen=True, eq=False)
class EcdfCurve:
    """Right-continuous empirical CDF; ``ps[i] = (i + 1) / n`` at ``xs[i]``."""

    xs: np.ndarray
    ps: np.ndarray

    def __call__(self, x):
        idx = np.searchsorted(self.xs, x, side="right")
        out = idx / self.xs.size
        return float(out) if np.ndim(out) == 0 else out


def ecdf(sample: Sample) -> EcdfCurve:
    n = sample.n
    return EcdfCurve(xs=sample.sorted.copy(), ps=np.arange(1, n + 1) / n)


def _bin_count(values: np.ndarray, rule: BinRule) -> int:
    n = values.size
    if isinstance(rule, (int, np.integer)) and not isinstance(rule, bool):
        if rule < 1:
            raise DomainError("bin count must be positive")
        return int(rule)
    span = values.max() - values.min()
    if rule == "fd":
        q75, q25 = np.percentile(values, [75, 25])
        iqr = q75 - q25
        if iqr > 0 and span > 0:
            width = 2.0 * iqr * n ** (-1.0 / 3.0)
            return max(1, math.ceil(span / width))
        rule = "sturges"
    if rule == "sturges":
        return math.ceil(math.log2(n)) + 1
    raise DomainError(f"unknown bin rule {rule!r}")


def histogram(
    sample: Sample,
    binning: BinRule = "fd",
    range_: tuple[float, float] | None = None,
) -> Histogram:
    """Density-normalized histogram with equal-width bins.

    ``binning`` is a fixed bin count or a rule name: ``"fd"`` (Freedman-Diaconis,
    falling back to Sturges when the interquartile range is zero) or ``"sturges"``.
    """
    values = sample.values
    if values.size < 2:
        raise DegenerateDataError("a histogram needs at least two observations")
    lo, hi = range_ if range_ is not None else (values.min(), values.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    bins = _bin_count(values, binning)
    edges = np.linspace(lo, hi, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    density = counts / (counts.sum() * np.diff(edges))
    return Histogram(bin_edges=edges, counts=counts, density=density)


def plotting_positions(n: int, rule: PositionRule = "hazen") -> np.ndarray:
    """Probability levels assigned to the order statistics of a size-``n`` sample.

    Hazen: (i - 0.5) / n.  Weibull: i / (n + 1).
    """
    if n < 1:
        raise DomainError("plotting positions need n >= 1")
    i = np.arange(1, n + 1, dtype=float)
    if rule == "hazen":
        return (i - 0.5) / n
    if rule == "weibull":
        return i / (n + 1)
    raise DomainError(f"unknown plotting-position rule {rule!r}")


def evaluation_grid(sample: Sample | Sequence[float], points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Evenly spaced grid from the sample minimum to its maximum, both inclusive."""
    if points < 2:
        raise DomainError("grid needs at least two points")
    values = sample.values if isinstance(sample, Sample) else np.asarray(sample, dtype=float)
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        raise DegenerateDataError("sample has no spread; grid would be a single point")
    grid = np.linspace(lo, hi, points)
    grid[-1] = hi
    return grid
