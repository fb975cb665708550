"""Log-Normal, Weibull, Gamma and Beta distributions in shape-location-scale form.

Every function takes a :class:`DistributionKind`, a :class:`ParamSet` and a point
(or array of points).  With ``y = (x - loc) / scale`` the densities are::

    LogNormal  exp(-((ln(x - l) - ln s) / a)**2 / 2) / ((x - l) a sqrt(2 pi))
    Weibull    (a / s) y**(a - 1) exp(-y**a)
    Gamma      (x - l)**(a - 1) exp(-(x - l) / s) / (s**a Gamma(a))
    Beta       Gamma(a + b) / (s Gamma(a) Gamma(b)) y**(a - 1) (1 - y)**(b - 1)

all zero for ``x < loc``; the Beta density is also zero above ``loc + scale``.
When a shape exponent is below one the density at the left endpoint (and at
the right one for Beta) is ``+inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable

import numpy as np

from windfit.empirical import Sample
from windfit.errors import DomainError
from windfit.specfun import (
    ln_gamma,
    reg_inc_beta_I,
    reg_inc_gamma_P,
    std_normal_cdf,
    std_normal_quantile,
)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
QUANTILE_TOL = 1e-10


class DistributionKind(str, Enum):
    LOGNORMAL = "lognormal"
    WEIBULL = "weibull"
    GAMMA = "gamma"
    BETA = "beta"

    @property
    def label(self) -> str:
        return {"lognormal": "Log-Normal"}.get(self.value, self.value.capitalize())


KIND_ORDER: tuple[DistributionKind, ...] = tuple(DistributionKind)


class ParametrizationMode(str, Enum):
    """``REDUCED`` pins loc = 0 (and scale = 1 for Beta); ``FULL`` frees them."""

    FULL = "full"
    REDUCED = "reduced"


@dataclass(frozen=True)
class ParamSet:
    """Shape ``alpha``, optional second shape ``beta`` (Beta only), ``loc`` and ``scale``."""

    alpha: float
    loc: float = 0.0
    scale: float = 1.0
    beta: float | None = None

    def __post_init__(self) -> None:
        values = [self.alpha, self.loc, self.scale] + ([] if self.beta is None else [self.beta])
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"parameters must be finite: {self}")
        if self.alpha <= 0 or self.scale <= 0 or (self.beta is not None and self.beta <= 0):
            raise DomainError(f"shape and scale parameters must be positive: {self}")
        if self.loc < 0:
            raise DomainError(f"location must be nonnegative: {self}")

    def as_dict(self) -> dict[str, float | None]:
        return {"alpha": self.alpha, "beta": self.beta, "loc": self.loc, "scale": self.scale}

    def with_(self, **changes: float) -> ParamSet:
        return replace(self, **changes)

    def matches(self, kind: DistributionKind, mode: ParametrizationMode) -> bool:
        """True when the values respect the pins that ``mode`` places on ``kind``."""
        if mode is ParametrizationMode.FULL:
            return True
        if self.loc != 0.0:
            return False
        return kind is not DistributionKind.BETA or self.scale == 1.0


def check_params(kind: DistributionKind, p: ParamSet) -> None:
    if not isinstance(kind, DistributionKind):
        raise DomainError(f"unknown distribution kind {kind!r}")
    if (kind is DistributionKind.BETA) != (p.beta is not None):
        raise DomainError(f"the second shape parameter is required by Beta and only by Beta: {p}")


def support(kind: DistributionKind, p: ParamSet) -> tuple[float, float]:
    check_params(kind, p)
    upper = p.loc + p.scale if kind is DistributionKind.BETA else math.inf
    return p.loc, upper


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if np.isnan(arr).any():
        raise DomainError("x must not be NaN")
    return np.atleast_1d(arr), arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr[0]) if scalar else arr


def _xlogy(c: float, y: np.ndarray) -> np.ndarray:
    # c * log(y), with 0 * log(0) taken as 0
    if c == 0.0:
        return np.zeros_like(y)
    with np.errstate(divide="ignore"):
        return c * np.log(y)


def _xlog1my(c: float, y: np.ndarray) -> np.ndarray:
    # c * log(1 - y), with 0 * log(0) taken as 0
    if c == 0.0:
        return np.zeros_like(y)
    with np.errstate(divide="ignore"):
        return c * np.log1p(-y)


def _log_density(kind: DistributionKind, p: ParamSet, x: np.ndarray) -> np.ndarray:
    a, l, s = p.alpha, p.loc, p.scale
    out = np.full(x.shape, -np.inf)
    y = (x - l) / s
    if kind is DistributionKind.LOGNORMAL:
        m = y > 0
        lx = np.log(x[m] - l)
        z = (lx - math.log(s)) / a
        out[m] = -lx - math.log(a) - _HALF_LOG_2PI - 0.5 * z * z
        return out
    if kind is DistributionKind.BETA:
        m = (y >= 0) & (y <= 1)
        ym = y[m]
        b = p.beta
        norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) - math.log(s)
        out[m] = norm + _xlogy(a - 1.0, ym) + _xlog1my(b - 1.0, ym)
        return out
    m = y >= 0
    ym = y[m]
    if kind is DistributionKind.WEIBULL:
        out[m] = math.log(a) - math.log(s) + _xlogy(a - 1.0, ym) - ym**a
    else:
        out[m] = _xlogy(a - 1.0, ym) - ym - math.log(s) - ln_gamma(a)
    return out


def log_pdf(kind: DistributionKind, p: ParamSet, x):
    """ln f(x), computed without forming f; ``-inf`` outside the support."""
    check_params(kind, p)
    arr, scalar = _as_array(x)
    return _ret(_log_density(kind, p, arr), scalar)


def pdf(kind: DistributionKind, p: ParamSet, x):
    check_params(kind, p)
    arr, scalar = _as_array(x)
    return _ret(np.exp(_log_density(kind, p, arr)), scalar)


def _std_cdf(kind: DistributionKind, p: ParamSet) -> Callable[[np.ndarray], np.ndarray]:
    """CDF of the standardized variable ``y = (x - loc) / scale``, for y >= 0."""
    a = p.alpha
    if kind is DistributionKind.LOGNORMAL:
        def f(y):
            out = np.zeros_like(y)
            m = y > 0
            out[m] = std_normal_cdf(np.log(y[m]) / a)
            return out
    elif kind is DistributionKind.WEIBULL:
        def f(y):
            return -np.expm1(-(y**a))
    elif kind is DistributionKind.GAMMA:
        def f(y):
            return reg_inc_gamma_P(a, y)
    else:
        b = p.beta
        def f(y):
            return reg_inc_beta_I(a, b, np.minimum(y, 1.0))
    return f


def cdf(kind: DistributionKind, p: ParamSet, x):
    check_params(kind, p)
    arr, scalar = _as_array(x)
    out = np.zeros(arr.shape)
    above = arr > p.loc
    if kind is DistributionKind.LOGNORMAL:
        xa = arr[above]
        out[above] = std_normal_cdf((np.log(xa - p.loc) - math.log(p.scale)) / p.alpha)
    else:
        out[above] = _std_cdf(kind, p)((arr[above] - p.loc) / p.scale)
    return _ret(out, scalar)


def _bisect(
    f: Callable[[np.ndarray], np.ndarray],
    target: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    tol: float = QUANTILE_TOL,
    max_iter: int = 1100,
) -> np.ndarray:
    """Vectorized bisection for f(y) = target on brackets with f(lo) <= target <= f(hi)."""
    result = np.empty_like(target)
    active = np.arange(target.size)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        done = (np.abs(fm - target) <= tol) | (hi - lo <= 4.0 * np.finfo(float).eps * mid)
        result[active[done]] = mid[done]
        below = fm < target
        keep = ~done
        lo = np.where(below, mid, lo)[keep]
        hi = np.where(below, hi, mid)[keep]
        target = target[keep]
        active = active[keep]
        if active.size == 0:
            break
    else:
        result[active] = 0.5 * (lo + hi)
    return result


def quantile(kind: DistributionKind, p: ParamSet, prob):
    """Inverse CDF at ``prob`` strictly inside (0, 1).

    Weibull and Log-Normal use closed forms; Gamma and Beta bisect the CDF
    to 1e-10 in probability.
    """
    check_params(kind, p)
    q, scalar = _as_array(prob)
    if not np.all((q > 0) & (q < 1)):
        raise DomainError("quantile requires probabilities strictly inside (0, 1)")
    a = p.alpha
    if kind is DistributionKind.WEIBULL:
        y = (-np.log1p(-q)) ** (1.0 / a)
    elif kind is DistributionKind.LOGNORMAL:
        y = np.exp(a * std_normal_quantile(q))
    elif kind is DistributionKind.GAMMA:
        f = _std_cdf(kind, p)
        hi = np.full(q.shape, max(1.0, a + 10.0 * math.sqrt(a)))
        short = f(hi) < q
        while short.any():
            hi[short] *= 2.0
            short[short] = f(hi[short]) < q[short]
        y = _bisect(f, q, np.zeros(q.shape), hi)
    else:
        y = _bisect(_std_cdf(kind, p), q, np.zeros(q.shape), np.ones(q.shape))
    return _ret(p.loc + p.scale * y, scalar)


def uniform_open(n: int, seed: int) -> np.ndarray:
    """``n`` uniform deviates strictly inside (0, 1) from a PCG64 stream seeded with ``seed``.

    Each deviate is (k + 0.5) / 2**53 for a uniform 53-bit integer k.
    """
    if seed < 0 or seed >= 2**64:
        raise DomainError("seed must be an unsigned 64-bit integer")
    rng = np.random.Generator(np.random.PCG64(seed))
    k = rng.integers(0, 2**53, size=n, dtype=np.uint64)
    return (k.astype(float) + 0.5) / 2.0**53


def sample(kind: DistributionKind, p: ParamSet, n: int, seed: int) -> Sample:
    """``n`` inverse-transform draws; identical output for identical arguments."""
    check_params(kind, p)
    if n < 1:
        raise DomainError("sample size must be at least 1")
    draws = quantile(kind, p, uniform_open(n, seed))
    return Sample(np.atleast_1d(draws), source_label=f"{kind.value} draws (seed={seed})")
