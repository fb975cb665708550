"""The three comparison figures per fitted model, as SVG or as raw coordinates.

For each model: density over the data histogram, CDF over the empirical CDF,
and a Q-Q plot with the y = x reference line.  Model curves are evaluated on
the evaluation grid (1000 points from the sample minimum to its maximum).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np

from windfit.diagnostics import qq_report
from windfit.distributions import cdf, pdf
from windfit.empirical import (
    DEFAULT_GRID_POINTS,
    BinRule,
    EcdfCurve,
    Histogram,
    Sample,
    ecdf,
    evaluation_grid,
    histogram,
)
from windfit.estimation import FittedModel
from windfit.svg import Chart

FigureFormat = Literal["svg", "csv-points"]
FIGURE_TYPES = ("pdf", "cdf", "qq")


@dataclass(frozen=True, eq=False)
class ModelCurves:
    model: FittedModel
    grid: np.ndarray
    density: np.ndarray
    cumulative: np.ndarray
    theoretical_q: np.ndarray
    empirical_q: np.ndarray


def model_curves(model: FittedModel, sample: Sample, points: int = DEFAULT_GRID_POINTS) -> ModelCurves:
    grid = evaluation_grid(sample, points)
    qq = qq_report(model, sample)
    return ModelCurves(
        model=model,
        grid=grid,
        density=np.asarray(pdf(model.kind, model.params, grid)),
        cumulative=np.asarray(cdf(model.kind, model.params, grid)),
        theoretical_q=qq.theoretical_q,
        empirical_q=qq.empirical_q,
    )


def _g(v: float) -> str:
    return f"{v:.10g}"


def _write_rows(path: Path, header: tuple[str, ...], columns: tuple[np.ndarray, ...]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([_g(v) for v in row])


def _stem(model: FittedModel) -> str:
    return model.kind.value


def write_csv_points(curves: ModelCurves, out_dir: Path) -> list[Path]:
    stem = _stem(curves.model)
    paths = [out_dir / f"{stem}_{t}.csv" for t in FIGURE_TYPES]
    _write_rows(paths[0], ("x", "pdf"), (curves.grid, curves.density))
    _write_rows(paths[1], ("x", "cdf"), (curves.grid, curves.cumulative))
    _write_rows(paths[2], ("theoretical", "empirical"), (curves.theoretical_q, curves.empirical_q))
    return paths


def write_empirical_points(hist: Histogram, curve: EcdfCurve, out_dir: Path) -> list[Path]:
    """Data overlays shared by every model's figures."""
    paths = [out_dir / "empirical_histogram.csv", out_dir / "empirical_ecdf.csv"]
    _write_rows(paths[0], ("left", "right", "density"), (hist.bin_edges[:-1], hist.bin_edges[1:], hist.density))
    _write_rows(paths[1], ("x", "p"), (curve.xs, curve.ps))
    return paths


def write_svg(curves: ModelCurves, hist: Histogram, curve: EcdfCurve, out_dir: Path, units: str = "m/s") -> list[Path]:
    m = curves.model
    label = m.kind.label
    params = ", ".join(f"{k}={v:.4g}" for k, v in m.params.as_dict().items() if v is not None)
    xlim = (float(curves.grid[0]), float(curves.grid[-1]))
    stem = _stem(m)
    paths = [out_dir / f"{stem}_{t}.svg" for t in FIGURE_TYPES]

    finite_density = curves.density[np.isfinite(curves.density)]
    top = max(float(hist.density.max()), float(finite_density.max()) if finite_density.size else 0.0)
    ch = Chart(f"PDF of {label} distribution vs data histogram", f"wind speed [{units}]", "density", xlim, (0.0, 1.08 * top), params)
    ch.bars(hist.bin_edges, hist.density, label="data")
    ch.polyline(curves.grid, np.where(np.isfinite(curves.density), curves.density, top), label=label)
    paths[0].write_text(ch.render(), encoding="utf-8")

    ch = Chart(f"CDF of {label} distribution vs empirical CDF", f"wind speed [{units}]", "probability", xlim, (0.0, 1.0), params)
    ch.steps(curve.xs, curve.ps, label="empirical")
    ch.polyline(curves.grid, curves.cumulative, label=label)
    paths[1].write_text(ch.render(), encoding="utf-8")

    lo = float(min(curves.theoretical_q.min(), curves.empirical_q.min()))
    hi = float(max(curves.theoretical_q.max(), curves.empirical_q.max()))
    ch = Chart(f"Q-Q plot for {label} distribution", f"{label} quantile [{units}]", f"sample quantile [{units}]", (lo, hi), (lo, hi), params)
    ch.polyline([lo, hi], [lo, hi], color="#555555", dashed=True, width=1.0, label="y = x")
    ch.scatter(curves.theoretical_q, curves.empirical_q, label="order statistics")
    paths[2].write_text(ch.render(), encoding="utf-8")
    return paths


def write_figures(
    models: list[FittedModel],
    sample: Sample,
    out_dir: Path,
    fmt: FigureFormat = "svg",
    bins: BinRule = "fd",
) -> list[Path]:
    """Emit three figures per model; returns the model-figure paths in order."""
    out_dir.mkdir(parents=True, exist_ok=True)
    hist = histogram(sample, bins)
    curve = ecdf(sample)
    written: list[Path] = []
    for m in models:
        curves = model_curves(m, sample)
        if fmt == "csv-points":
            written += write_csv_points(curves, out_dir)
        else:
            written += write_svg(curves, hist, curve, out_dir)
    if fmt == "csv-points":
        write_empirical_points(hist, curve, out_dir)
    return written
