from __future__ import annotations

import itertools
import math
from dataclasses import replace

import numpy as np
import pytest

from windfit.diagnostics import compare, ks_statistic, qq_report
from windfit.distributions import DistributionKind as K
from windfit.distributions import ParametrizationMode as Mode
from windfit.distributions import ParamSet, quantile, sample
from windfit.empirical import Sample, plotting_positions
from windfit.errors import DomainError
from windfit.estimation import DistributionSpec, FittedModel, fit_all


def model(kind: K, params: ParamSet, n: int, ll: float = 0.0, mode: Mode = Mode.FULL) -> FittedModel:
    spec = DistributionSpec(kind, mode)
    return FittedModel(spec, params, ll, n, True, 0, 2 * spec.n_free - 2 * ll)


WEIBULL = ParamSet(2.0, 0.0, 8.0)


def test_qq_self_consistency():
    n = 500
    x = quantile(K.WEIBULL, WEIBULL, plotting_positions(n))
    r = qq_report(model(K.WEIBULL, WEIBULL, n), Sample(x))
    assert r.max_abs_dev <= 1e-8
    assert r.tail_abs_dev <= 1e-8


def test_qq_single_point():
    r = qq_report(model(K.WEIBULL, WEIBULL, 1), Sample([3.0]))
    assert list(r.positions) == [0.5]
    assert r.theoretical_q.size == 1 and r.empirical_q.size == 1


def test_qq_tail_deviation():
    n = 100
    x = quantile(K.WEIBULL, WEIBULL, plotting_positions(n))
    x[-1] += 2.0
    x[50] += 1.0
    r = qq_report(model(K.WEIBULL, WEIBULL, n), Sample(x))
    assert r.max_abs_dev == pytest.approx(2.0)
    assert r.tail_abs_dev == pytest.approx(2.0)
    r = qq_report(model(K.WEIBULL, WEIBULL, n), Sample(x), tail=0.005)
    assert r.tail_abs_dev == 0.0
    with pytest.raises(DomainError):
        qq_report(model(K.WEIBULL, WEIBULL, n), Sample(x), tail=0.6)


def test_ks_single_point_at_median():
    median = quantile(K.WEIBULL, WEIBULL, 0.5)
    assert ks_statistic(model(K.WEIBULL, WEIBULL, 1), Sample([median])) == pytest.approx(0.5, abs=1e-12)


def test_ks_lower_bound_against_scipy():
    stats = pytest.importorskip("scipy.stats")
    s = sample(K.GAMMA, ParamSet(2.5, 0.0, 3.0), 400, seed=3)
    d = ks_statistic(model(K.GAMMA, ParamSet(2.5, 0.0, 3.0), s.n), s)
    ref = stats.kstest(s.values, stats.gamma(2.5, scale=3.0).cdf).statistic
    assert d == pytest.approx(ref, abs=1e-12)
    # an exact-quantile sample can do no better than the half-step
    x = quantile(K.WEIBULL, WEIBULL, plotting_positions(400))
    assert ks_statistic(model(K.WEIBULL, WEIBULL, 400), Sample(x)) == pytest.approx(0.5 / 400, abs=1e-9)


def test_ks_bounds():
    far = Sample([1000.0, 2000.0])
    d = ks_statistic(model(K.WEIBULL, WEIBULL, 2), far)
    assert 0.0 <= d <= 1.0
    assert d == pytest.approx(1.0)


def test_ks_shrinks_with_n():
    p = ParamSet(2.0, 0.0, 8.0)
    m = lambda n: model(K.WEIBULL, p, n)
    small = [ks_statistic(m(100), sample(K.WEIBULL, p, 100, seed=s)) for s in range(50)]
    large = [ks_statistic(m(10_000), sample(K.WEIBULL, p, 10_000, seed=1000 + s)) for s in range(50)]
    assert np.median(large) < np.median(small)


def test_compare_winner_is_max_likelihood():
    n = 10
    s = Sample(np.linspace(1.0, 10.0, n))
    ms = [
        model(K.LOGNORMAL, ParamSet(0.5, 0.0, 5.0), n, -100.0),
        model(K.WEIBULL, ParamSet(2.0, 0.0, 6.0), n, -90.0),
        model(K.GAMMA, ParamSet(3.0, 0.0, 2.0), n, -95.0),
        model(K.BETA, ParamSet(2.0, 0.0, 11.0, 2.0), n, -101.0),
    ]
    c = compare(ms, s)
    assert c.winner is K.WEIBULL
    assert c.ranking == (K.WEIBULL, K.GAMMA, K.LOGNORMAL, K.BETA)
    assert c.for_kind(K.GAMMA).log_likelihood == -95.0
    for perm in itertools.permutations(ms):
        assert compare(list(perm), s).ranking == c.ranking


def test_compare_tie_uses_kind_order():
    n = 10
    s = Sample(np.linspace(1.0, 10.0, n))
    p = ParamSet(1.5, 0.0, 5.0)
    a = model(K.GAMMA, p, n, -50.0)
    b = model(K.WEIBULL, p, n, -50.0)
    assert compare([a, b], s).winner is K.WEIBULL
    assert compare([b, a], s).winner is K.WEIBULL


def test_compare_tie_uses_parameter_count():
    n = 10
    s = Sample(np.linspace(1.0, 10.0, n))
    p = ParamSet(1.5, 0.0, 5.0)
    full = model(K.LOGNORMAL, p, n, -50.0)
    reduced = model(K.GAMMA, p, n, -50.0, Mode.REDUCED)
    assert compare([full, reduced], s).winner is K.GAMMA


def test_compare_rejects_mismatched_sample():
    s = sample(K.WEIBULL, WEIBULL, 200, seed=1)
    other = sample(K.WEIBULL, WEIBULL, 200, seed=2)
    models = fit_all(s, Mode.REDUCED, kinds=[K.WEIBULL, K.GAMMA])
    with pytest.raises(DomainError):
        compare(models, other)
    with pytest.raises(DomainError):
        compare([replace(models[0], n=5, sample_digest=""), models[1]], s)
    with pytest.raises(DomainError):
        compare(models[:1], s)


def test_compare_fitted_models():
    s = sample(K.WEIBULL, WEIBULL, 3000, seed=17)
    c = compare(fit_all(s, Mode.REDUCED), s)
    lls = [m.log_likelihood for m in c.models]
    assert c.winner is c.models[int(np.argmax(lls))].kind
    assert c.winner is K.WEIBULL
    assert c.ranking[-1] is K.BETA  # reduced Beta cannot cover speeds above 1
    assert c.for_kind(K.BETA).log_likelihood == -math.inf
    for d in c.models:
        assert d.ks_statistic >= 0 and d.max_abs_dev >= 0
