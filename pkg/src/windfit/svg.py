"""Minimal SVG charts: axes with ticks, bars, polylines, steps and scatter points.

Output is plain text with fixed number formatting so identical input gives
byte-identical files.
"""

from __future__ import annotations

import math
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 40, 55
MAX_VERTICES = 2000


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def thin(xs: np.ndarray, ys: np.ndarray, limit: int = MAX_VERTICES) -> tuple[np.ndarray, np.ndarray]:
    """Keep at most ``limit`` evenly spaced points (always the first and last)."""
    if xs.size <= limit:
        return xs, ys
    idx = np.unique(np.linspace(0, xs.size - 1, limit).round().astype(int))
    return xs[idx], ys[idx]


class Chart:
    def __init__(
        self,
        title: str,
        xlabel: str,
        ylabel: str,
        xlim: tuple[float, float],
        ylim: tuple[float, float],
        subtitle: str = "",
    ):
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel
        self.subtitle = subtitle
        x0, x1 = xlim
        y0, y1 = ylim
        if x1 <= x0:
            x1 = x0 + 1.0
        if y1 <= y0:
            y1 = y0 + 1.0
        self.xlim, self.ylim = (x0, x1), (y0, y1)
        self._body: list[str] = []
        self._legend: list[tuple[str, str, bool]] = []

    def _px(self, x) -> np.ndarray:
        x0, x1 = self.xlim
        return MARGIN_LEFT + (np.asarray(x, dtype=float) - x0) / (x1 - x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)

    def _py(self, y) -> np.ndarray:
        y0, y1 = self.ylim
        return HEIGHT - MARGIN_BOTTOM - (np.asarray(y, dtype=float) - y0) / (y1 - y0) * (
            HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
        )

    def _points(self, xs, ys) -> str:
        px, py = self._px(xs), self._py(np.clip(ys, *self.ylim))
        return " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py))

    def bars(self, edges: Sequence[float], heights: Sequence[float], color: str = "#9ecae1", label: str = "") -> None:
        base = self._py(self.ylim[0])
        for left, right, h in zip(edges[:-1], edges[1:], heights):
            top = float(self._py(min(h, self.ylim[1])))
            x = float(self._px(left))
            w = float(self._px(right)) - x
            self._body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(top)}" width="{_fmt(w)}" height="{_fmt(base - top)}" '
                f'fill="{color}" stroke="#6baed6" stroke-width="0.5"/>'
            )
        if label:
            self._legend.append((label, color, True))

    def polyline(self, xs, ys, color: str = "#d62728", label: str = "", dashed: bool = False, width: float = 2.0) -> None:
        xs, ys = thin(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self._body.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{self._points(xs, ys)}"/>'
        )
        if label:
            self._legend.append((label, color, False))

    def steps(self, xs, ps, color: str = "#1f77b4", label: str = "") -> None:
        xs, ps = thin(np.asarray(xs, dtype=float), np.asarray(ps, dtype=float))
        sx = np.repeat(xs, 2)[1:]
        sy = np.repeat(ps, 2)[:-1]
        self.polyline(np.concatenate(([xs[0]], sx)), np.concatenate(([0.0], sy)), color, label, width=1.5)

    def scatter(self, xs, ys, color: str = "#1f77b4", label: str = "") -> None:
        xs, ys = thin(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
        for a, b in zip(self._px(xs), self._py(np.clip(ys, *self.ylim))):
            self._body.append(f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="2" fill="{color}" fill-opacity="0.6"/>')
        if label:
            self._legend.append((label, color, True))

    def _axes(self) -> list[str]:
        out = []
        left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
        out.append(f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" fill="none" stroke="#333"/>')
        for t in nice_ticks(*self.xlim):
            x = _fmt(float(self._px(t)))
            out.append(f'<line x1="{x}" y1="{bottom}" x2="{x}" y2="{bottom + 5}" stroke="#333"/>')
            out.append(f'<text x="{x}" y="{bottom + 18}" font-size="11" text-anchor="middle">{t:g}</text>')
        for t in nice_ticks(*self.ylim):
            y = _fmt(float(self._py(t)))
            out.append(f'<line x1="{left - 5}" y1="{y}" x2="{left}" y2="{y}" stroke="#333"/>')
            out.append(f'<text x="{left - 8}" y="{y}" font-size="11" text-anchor="end" dominant-baseline="middle">{t:g}</text>')
        out.append(
            f'<text x="{(left + right) / 2:.1f}" y="{HEIGHT - 12}" font-size="13" text-anchor="middle">{escape(self.xlabel)}</text>'
        )
        out.append(
            f'<text x="16" y="{(top + bottom) / 2:.1f}" font-size="13" text-anchor="middle" '
            f'transform="rotate(-90 16 {(top + bottom) / 2:.1f})">{escape(self.ylabel)}</text>'
        )
        out.append(f'<text x="{WIDTH / 2:.1f}" y="20" font-size="15" text-anchor="middle">{escape(self.title)}</text>')
        if self.subtitle:
            out.append(
                f'<text x="{WIDTH / 2:.1f}" y="34" font-size="11" fill="#555" text-anchor="middle">{escape(self.subtitle)}</text>'
            )
        return out

    def _legend_items(self) -> list[str]:
        out = []
        x = WIDTH - MARGIN_RIGHT - 190
        for i, (label, color, filled) in enumerate(self._legend):
            y = MARGIN_TOP + 14 + 18 * i
            if filled:
                out.append(f'<rect x="{x}" y="{y - 8}" width="16" height="10" fill="{color}"/>')
            else:
                out.append(f'<line x1="{x}" y1="{y - 3}" x2="{x + 16}" y2="{y - 3}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{x + 22}" y="{y}" font-size="12">{escape(label)}</text>')
        return out

    def render(self) -> str:
        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
            *self._body,
            *self._axes(),
            *self._legend_items(),
            "</svg>",
        ]
        return "\n".join(lines) + "\n"
