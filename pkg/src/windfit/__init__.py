"""Fit Log-Normal, Weibull, Gamma and Beta distributions to wind-speed data."""

from windfit.distributions import (
    KIND_ORDER,
    DistributionKind,
    ParametrizationMode,
    ParamSet,
    cdf,
    log_pdf,
    pdf,
    quantile,
    sample,
)
from windfit.empirical import Sample, ecdf, evaluation_grid, histogram, plotting_positions
from windfit.errors import (
    DegenerateDataError,
    DomainError,
    EmptyDatasetError,
    FitDegenerateError,
    WindfitError,
)
from windfit.estimation import (
    DistributionSpec,
    FitSettings,
    FittedModel,
    fit,
    fit_all,
    initial_guess,
    neg_log_likelihood,
)
from windfit.diagnostics import FitComparison, QQReport, compare, ks_statistic, qq_report

__version__ = "0.1.0"

__all__ = [
    "KIND_ORDER",
    "DegenerateDataError",
    "DistributionKind",
    "DistributionSpec",
    "DomainError",
    "EmptyDatasetError",
    "FitComparison",
    "FitDegenerateError",
    "FitSettings",
    "FittedModel",
    "ParamSet",
    "ParametrizationMode",
    "QQReport",
    "Sample",
    "WindfitError",
    "cdf",
    "compare",
    "ecdf",
    "evaluation_grid",
    "fit",
    "fit_all",
    "histogram",
    "initial_guess",
    "ks_statistic",
    "log_pdf",
    "neg_log_likelihood",
    "pdf",
    "plotting_positions",
    "qq_report",
    "quantile",
    "sample",
]
