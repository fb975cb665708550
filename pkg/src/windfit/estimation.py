"""Maximum-likelihood fitting of the four families to a wind-speed sample."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from windfit.distributions import (
    KIND_ORDER,
    DistributionKind,
    ParametrizationMode,
    ParamSet,
    check_params,
    log_pdf,
)
from windfit.empirical import Sample
from windfit.errors import DomainError, FitDegenerateError
from windfit.optimize import nelder_mead
from windfit.specfun import ln_gamma

logger = logging.getLogger(__name__)

Kind = DistributionKind
Mode = ParametrizationMode

MIN_FIT_SIZE = 8
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class DistributionSpec:
    kind: DistributionKind
    mode: ParametrizationMode = ParametrizationMode.FULL

    @property
    def n_free(self) -> int:
        """Number of free parameters, the ``k`` of AIC."""
        if self.mode is Mode.REDUCED:
            return 2
        return 4 if self.kind is Kind.BETA else 3

    @property
    def name(self) -> str:
        return f"{self.kind.value}/{self.mode.value}"


@dataclass(frozen=True)
class FitSettings:
    """Knobs for :func:`fit`.

    ``tol`` is the simplex diameter (in the transformed, unconstrained
    coordinates) at which the search stops; ``eps_factor`` times the sample
    range is the gap kept between the location and the smallest observation.
    """

    tol: float = 1e-9
    max_iter: int = 20_000
    eps_factor: float = 1e-6
    initial_step: float = 0.1

    def __post_init__(self) -> None:
        if not (self.tol > 0 and self.max_iter >= 1 and self.eps_factor > 0 and self.initial_step > 0):
            raise DomainError(f"invalid fit settings: {self}")


@dataclass(frozen=True)
class FittedModel:
    spec: DistributionSpec
    params: ParamSet
    log_likelihood: float
    n: int
    converged: bool
    iterations: int
    aic: float
    sample_digest: str = field(default="", repr=False)
    message: str = ""

    @property
    def kind(self) -> DistributionKind:
        return self.spec.kind


def _values(sample: Sample | Sequence[float]) -> np.ndarray:
    if isinstance(sample, Sample):
        return sample.values
    arr = np.asarray(sample, dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("empty sample")
    return arr


def neg_log_likelihood(spec: DistributionSpec, params: ParamSet, sample: Sample | Sequence[float]) -> float:
    """-sum(log_pdf) over the sample.

    ``+inf`` when an observation lies outside the support (the parameters are
    infeasible); ``-inf`` when one sits on a density singularity.
    """
    x = _values(sample)
    check_params(spec.kind, params)
    if not params.matches(spec.kind, spec.mode):
        raise DomainError(f"{params} does not respect the pins of {spec.name}")
    terms = log_pdf(spec.kind, params, x)
    if np.any(terms == -np.inf):
        return math.inf
    return -float(np.sum(terms))


def _aic(spec: DistributionSpec, log_likelihood: float) -> float:
    return 2.0 * spec.n_free - 2.0 * log_likelihood


def _check_fit_sample(x: np.ndarray) -> None:
    if x.size < MIN_FIT_SIZE:
        raise FitDegenerateError(f"need at least {MIN_FIT_SIZE} observations, got {x.size}")
    if not np.ptp(x) > 0:
        raise FitDegenerateError("sample has zero variance")


def _loc_ceiling(x: np.ndarray, settings: FitSettings) -> float:
    eps = settings.eps_factor * float(np.ptp(x))
    return max(0.0, float(x.min()) - eps)


def _moment_shapes(z: np.ndarray, kind: DistributionKind) -> tuple[float, float]:
    """(shape, scale) starting values from the positive shifted data ``z``."""
    z = z[z > 0]
    if kind is Kind.LOGNORMAL:
        lz = np.log(z)
        return float(np.std(lz)), float(np.exp(np.mean(lz)))
    mean, sd = float(np.mean(z)), float(np.std(z))
    if kind is Kind.WEIBULL:
        alpha = (sd / mean) ** -1.086
        return alpha, mean / math.exp(ln_gamma(1.0 + 1.0 / alpha))
    return mean**2 / sd**2, sd**2 / mean


def _beta_shapes(y: np.ndarray) -> tuple[float, float]:
    if y.size < 2 or not np.all((y > 0) & (y < 1)):
        return 1.0, 1.0
    m, v = float(np.mean(y)), float(np.var(y))
    common = m * (1.0 - m) / v - 1.0 if v > 0 else -1.0
    if common <= 0:
        return 1.0, 1.0
    return m * common, (1.0 - m) * common


def initial_guess(
    spec: DistributionSpec,
    sample: Sample | Sequence[float],
    settings: FitSettings | None = None,
    fixed: Mapping[str, float] | None = None,
) -> ParamSet:
    """Method-of-moments starting point for :func:`fit`.

    Full mode starts the location at ``max(0, min - 0.01 * range)``; the full
    Beta scale starts at ``1.02 * range``.  ``fixed`` pins named parameters.
    """
    settings = settings or FitSettings()
    fixed = dict(fixed or {})
    x = _values(sample)
    _check_fit_sample(x)
    kind = spec.kind
    lo, span = float(x.min()), float(np.ptp(x))
    if spec.mode is Mode.FULL:
        loc = fixed.get("loc", min(max(0.0, lo - 0.01 * span), _loc_ceiling(x, settings)))
    else:
        loc = 0.0
    if kind is Kind.BETA:
        if spec.mode is Mode.FULL:
            scale = fixed.get("scale", 1.02 * span)
            scale = max(scale, float(x.max()) - loc + 2 * settings.eps_factor * span)
        else:
            scale = 1.0
        alpha, beta = _beta_shapes((x - loc) / scale)
        return ParamSet(
            alpha=fixed.get("alpha", alpha), beta=fixed.get("beta", beta), loc=loc, scale=scale
        )
    z = x - loc
    if kind is Kind.WEIBULL and "alpha" in fixed:
        alpha = fixed["alpha"]
        scale = float(np.mean(z ** alpha)) ** (1.0 / alpha)
    else:
        alpha, scale = _moment_shapes(z, kind)
    if not (math.isfinite(alpha) and alpha > 0):
        alpha = 1.0
    if not (math.isfinite(scale) and scale > 0):
        scale = float(np.mean(z)) or 1.0
    return ParamSet(alpha=fixed.get("alpha", alpha), loc=loc, scale=fixed.get("scale", scale))


class _Transform:
    """Map between ParamSet and the unconstrained coordinates seen by the simplex.

    Shapes and (non-Beta) scale are log-transformed; a free location is
    ``ceiling * sigmoid(t)`` with ``ceiling = min(x) - eps``; the full Beta
    scale is ``max(x) + eps - loc + exp(t)`` so the support always covers the data.
    """

    def __init__(self, spec: DistributionSpec, x: np.ndarray, settings: FitSettings, fixed: Mapping[str, float]):
        self.spec = spec
        self.fixed = dict(fixed)
        self.eps = settings.eps_factor * float(np.ptp(x))
        self.ceiling = _loc_ceiling(x, settings)
        self.top = float(x.max()) + self.eps
        names = ["alpha"]
        if spec.kind is Kind.BETA:
            names.append("beta")
        if spec.mode is Mode.FULL:
            if self.ceiling > 0:
                names.append("loc")
            names.append("scale")
        elif spec.kind is not Kind.BETA:
            names.append("scale")
        self.names = [n for n in names if n not in self.fixed]

    def encode(self, p: ParamSet) -> np.ndarray:
        out = []
        for name in self.names:
            if name in ("alpha", "beta"):
                out.append(math.log(getattr(p, name)))
            elif name == "loc":
                r = min(max(p.loc / self.ceiling, 1e-12), 1.0 - 1e-12)
                out.append(math.log(r / (1.0 - r)))
            elif self.spec.kind is Kind.BETA:
                out.append(math.log(max(p.scale - (self.top - p.loc), 1e-300)))
            else:
                out.append(math.log(p.scale))
        return np.array(out)

    def decode(self, theta: np.ndarray) -> ParamSet | None:
        vals = dict(zip(self.names, (float(t) for t in theta)))
        try:
            alpha = self.fixed.get("alpha") or math.exp(vals["alpha"])
            beta = None
            if self.spec.kind is Kind.BETA:
                beta = self.fixed.get("beta") or math.exp(vals["beta"])
            if "loc" in self.fixed:
                loc = self.fixed["loc"]
            elif "loc" in vals:
                loc = self.ceiling / (1.0 + math.exp(-vals["loc"]))
            else:
                loc = 0.0
            if "scale" in self.fixed:
                scale = self.fixed["scale"]
            elif self.spec.kind is Kind.BETA:
                scale = 1.0 if self.spec.mode is Mode.REDUCED else self.top - loc + math.exp(vals["scale"])
            else:
                scale = math.exp(vals["scale"])
            return ParamSet(alpha=alpha, beta=beta, loc=loc, scale=scale)
        except (OverflowError, DomainError):
            return None


class _Objective:
    """Negative log-likelihood tuned for repeated evaluation at a fixed location."""

    def __init__(self, kind: DistributionKind, x: np.ndarray):
        self.kind = kind
        self.x = x
        self.n = x.size
        self._loc: float | None = None

    def _shift(self, loc: float) -> None:
        if loc != self._loc:
            self._loc = loc
            self.z = self.x - loc
            with np.errstate(divide="ignore"):
                self.lz = np.log(self.z)
            self.sum_lz = float(np.sum(self.lz))
            self.sum_z = float(np.sum(self.z))
            self.clean = bool(self.z.min() > 0)

    def __call__(self, p: ParamSet | None) -> float:
        if p is None:
            return math.inf
        self._shift(p.loc)
        if not self.clean or self.kind is Kind.BETA:
            terms = log_pdf(self.kind, p, self.x)
            total = float(np.sum(terms))
            # singular points (+inf) are as unusable to the optimizer as infeasible ones
            return -total if math.isfinite(total) else math.inf
        a, s, n = p.alpha, p.scale, self.n
        ls = math.log(s)
        if self.kind is Kind.LOGNORMAL:
            u = (self.lz - ls) / a
            ll = -self.sum_lz - n * (math.log(a) + _HALF_LOG_2PI) - 0.5 * float(np.dot(u, u))
        elif self.kind is Kind.WEIBULL:
            ll = (
                n * (math.log(a) - ls)
                + (a - 1.0) * (self.sum_lz - n * ls)
                - float(np.sum(np.exp(a * (self.lz - ls))))
            )
        else:
            ll = (a - 1.0) * (self.sum_lz - n * ls) - self.sum_z / s - n * (ls + ln_gamma(a))
        return -ll if math.isfinite(ll) else math.inf


def fit(
    spec: DistributionSpec,
    sample: Sample | Sequence[float],
    settings: FitSettings | None = None,
    fixed: Mapping[str, float] | None = None,
) -> FittedModel:
    """Maximum-likelihood estimate of ``spec``'s parameters by Nelder-Mead.

    Never ends below the starting log-likelihood.  When the data cannot be
    covered by any admissible parameters (e.g. reduced Beta on speeds above
    1 m/s) the model comes back with ``log_likelihood = -inf`` and
    ``converged = False`` rather than raising.  ``fixed`` pins named parameters
    and is meant for test harnesses.
    """
    settings = settings or FitSettings()
    fixed = dict(fixed or {})
    x = _values(sample)
    digest = sample.digest if isinstance(sample, Sample) else Sample(x).digest
    guess = initial_guess(spec, x, settings, fixed)
    ll_guess = -neg_log_likelihood(spec, guess, x)
    if not math.isfinite(ll_guess):
        msg = f"{spec.name}: sample not inside the admissible support; no fit attempted"
        logger.info(msg)
        return FittedModel(spec, guess, -math.inf, x.size, False, 0, math.inf, digest, msg)

    transform = _Transform(spec, x, settings, fixed)
    objective = _Objective(spec.kind, x)
    if not transform.names:
        return FittedModel(spec, guess, ll_guess, x.size, True, 0, _aic(spec, ll_guess), digest)

    result = nelder_mead(
        lambda theta: objective(transform.decode(theta)),
        transform.encode(guess),
        step=settings.initial_step,
        tol=settings.tol,
        max_iter=settings.max_iter,
    )
    params = transform.decode(result.x)
    ll = -neg_log_likelihood(spec, params, x) if params is not None else -math.inf
    message = ""
    if not ll >= ll_guess:
        params, ll = guess, ll_guess
        message = "optimizer did not improve on the starting point"
    if not result.converged:
        message = f"simplex did not shrink below tol={settings.tol} within {settings.max_iter} iterations"
        logger.warning("%s: %s", spec.name, message)
    return FittedModel(
        spec=spec,
        params=params,
        log_likelihood=ll,
        n=x.size,
        converged=result.converged and math.isfinite(ll),
        iterations=result.iterations,
        aic=_aic(spec, ll),
        sample_digest=digest,
        message=message,
    )


def fit_all(
    sample: Sample | Sequence[float],
    mode: ParametrizationMode = ParametrizationMode.FULL,
    settings: FitSettings | None = None,
    kinds: Sequence[DistributionKind] = KIND_ORDER,
) -> list[FittedModel]:
    """Fit every requested family in the fixed order LogNormal, Weibull, Gamma, Beta."""
    x = _values(sample)
    _check_fit_sample(x)
    if not isinstance(sample, Sample):
        sample = Sample(x)
    wanted = set(kinds)
    return [fit(DistributionSpec(k, mode), sample, settings) for k in KIND_ORDER if k in wanted]
