"""Goodness-of-fit diagnostics and cross-model ranking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from windfit.distributions import KIND_ORDER, DistributionKind, cdf, quantile
from windfit.empirical import PositionRule, Sample, plotting_positions
from windfit.errors import DomainError
from windfit.estimation import FittedModel

DEFAULT_TAIL = 0.05


@dataclass(frozen=True, eq=False)
class QQReport:
    model: FittedModel
    positions: np.ndarray
    theoretical_q: np.ndarray
    empirical_q: np.ndarray
    max_abs_dev: float
    tail_abs_dev: float


@dataclass(frozen=True)
class ModelDiagnostics:
    kind: DistributionKind
    mode: str
    log_likelihood: float
    aic: float
    n_free: int
    ks_statistic: float
    max_abs_dev: float
    tail_abs_dev: float
    converged: bool


@dataclass(frozen=True)
class FitComparison:
    models: tuple[ModelDiagnostics, ...]
    ranking: tuple[DistributionKind, ...]
    winner: DistributionKind
    tail_winner: DistributionKind

    def for_kind(self, kind: DistributionKind) -> ModelDiagnostics:
        return next(m for m in self.models if m.kind is kind)


def qq_report(
    model: FittedModel,
    sample: Sample,
    positions: PositionRule = "hazen",
    tail: float = DEFAULT_TAIL,
) -> QQReport:
    """Order statistics against model quantiles at the plotting positions.

    ``tail_abs_dev`` is the largest deviation among positions below ``tail``
    or above ``1 - tail`` (0 when no position falls there).
    """
    if not 0 < tail < 0.5:
        raise DomainError("tail fraction must lie in (0, 0.5)")
    probs = plotting_positions(sample.n, positions)
    theo = np.atleast_1d(quantile(model.kind, model.params, probs))
    emp = sample.sorted
    dev = np.abs(theo - emp)
    in_tail = (probs < tail) | (probs > 1.0 - tail)
    return QQReport(
        model=model,
        positions=probs,
        theoretical_q=theo,
        empirical_q=emp,
        max_abs_dev=float(dev.max()),
        tail_abs_dev=float(dev[in_tail].max()) if in_tail.any() else 0.0,
    )


def ks_statistic(model: FittedModel, sample: Sample) -> float:
    """Kolmogorov-Smirnov distance between the sample ECDF and the model CDF."""
    x = sample.sorted
    n = x.size
    f = np.atleast_1d(cdf(model.kind, model.params, x))
    i = np.arange(1, n + 1)
    d = max(np.max(i / n - f), np.max(f - (i - 1) / n))
    return float(min(max(d, 0.0), 1.0))


def _rank_key(m: ModelDiagnostics) -> tuple:
    return (-m.log_likelihood, m.aic, m.n_free, KIND_ORDER.index(m.kind))


def compare(
    models: Sequence[FittedModel],
    sample: Sample,
    positions: PositionRule = "hazen",
    tail: float = DEFAULT_TAIL,
) -> FitComparison:
    """Rank models by log-likelihood (ties: AIC, fewer parameters, kind order).

    KS and Q-Q deviations are reported for every model but do not affect the
    ranking; ``tail_winner`` is the model with the smallest tail deviation.
    """
    if len(models) < 2:
        raise DomainError("compare needs at least two models")
    digest = sample.digest
    for m in models:
        if m.sample_digest and m.sample_digest != digest:
            raise DomainError(f"{m.spec.name} was fitted on a different sample")
        if m.n != sample.n:
            raise DomainError(f"{m.spec.name} was fitted on {m.n} points, sample has {sample.n}")
    rows = []
    for m in models:
        qq = qq_report(m, sample, positions, tail)
        rows.append(
            ModelDiagnostics(
                kind=m.kind,
                mode=m.spec.mode.value,
                log_likelihood=m.log_likelihood,
                aic=m.aic,
                n_free=m.spec.n_free,
                ks_statistic=ks_statistic(m, sample),
                max_abs_dev=qq.max_abs_dev,
                tail_abs_dev=qq.tail_abs_dev,
                converged=m.converged,
            )
        )
    ranked = sorted(rows, key=_rank_key)
    tail_best = min(rows, key=lambda r: (r.tail_abs_dev,) + _rank_key(r))
    return FitComparison(
        models=tuple(rows),
        ranking=tuple(r.kind for r in ranked),
        winner=ranked[0].kind,
        tail_winner=tail_best.kind,
    )
