"""Shared generators for test parameter sets and synthetic telemetry."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from hypothesis import strategies as st

from windfit.distributions import DistributionKind, ParamSet

K = DistributionKind

# Shape ranges typical of wind-speed fits, kept away from the extremes where
# adaptive quadrature itself becomes the weak link.
SHAPE_RANGE = {
    K.LOGNORMAL: (0.15, 1.5),
    K.WEIBULL: (0.7, 6.0),
    K.GAMMA: (0.7, 15.0),
    K.BETA: (0.7, 12.0),
}
LOC_RANGE = (0.0, 5.0)
SCALE_RANGE = (0.5, 15.0)


def random_params(kind: DistributionKind, rng: np.random.Generator) -> ParamSet:
    lo, hi = SHAPE_RANGE[kind]
    alpha = float(rng.uniform(lo, hi))
    beta = float(rng.uniform(lo, hi)) if kind is K.BETA else None
    return ParamSet(alpha, float(rng.uniform(*LOC_RANGE)), float(rng.uniform(*SCALE_RANGE)), beta)


@st.composite
def param_sets(draw, kind: DistributionKind | None = None):
    kind = kind or draw(st.sampled_from(list(K)))
    lo, hi = SHAPE_RANGE[kind]
    alpha = draw(st.floats(lo, hi))
    beta = draw(st.floats(lo, hi)) if kind is K.BETA else None
    loc = draw(st.floats(*LOC_RANGE))
    scale = draw(st.floats(*SCALE_RANGE))
    return kind, ParamSet(alpha, loc, scale, beta)


HEADER = "time;power_kw;ws_nacelle;wd_nacelle;ws_10m;wd_10m;ws_50m;wd_50m"


def write_telemetry(path: Path, rows: int, seed: int = 0) -> Path:
    """Synthetic 10-minute telemetry in the eight-column semicolon layout."""
    rng = np.random.default_rng(seed)
    ws = 8.0 * rng.weibull(2.0, size=(rows, 3))
    wd = rng.uniform(0.0, 360.0, size=(rows, 3))
    power = np.clip(ws[:, 0] ** 3 * 0.9 - 20.0, -5.0, 2000.0)
    minutes = (np.arange(rows) * 10) % 1440
    lines = [HEADER]
    for i in range(rows):
        m = int(minutes[i])
        lines.append(
            f"{m // 60:02d}:{m % 60:02d};{power[i]:.1f};"
            f"{ws[i, 0]:.2f};{wd[i, 0]:.0f};{ws[i, 1]:.2f};{wd[i, 1]:.0f};{ws[i, 2]:.2f};{wd[i, 2]:.0f}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
