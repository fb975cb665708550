from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from windfit.empirical import Sample, ecdf, evaluation_grid, histogram, plotting_positions
from windfit.errors import DegenerateDataError, DomainError, EmptyDatasetError

speeds = st.lists(st.floats(0.0, 40.0), min_size=2, max_size=300)


def test_sample_validation():
    with pytest.raises(EmptyDatasetError):
        Sample([])
    with pytest.raises(DomainError):
        Sample([1.0, -0.1])
    with pytest.raises(DomainError):
        Sample([1.0, math.nan])


def test_sample_is_read_only():
    s = Sample([3.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5.0
    assert list(s.values) == [3.0, 1.0, 2.0]
    assert list(s.sorted) == [1.0, 2.0, 3.0]


def test_sample_helpers():
    s = Sample([0.0, 2.0, 0.0, 4.0], "x")
    assert s.without_zeros().n == 2
    assert list(s.scaled(0.5).values) == [0.0, 1.0, 0.0, 2.0]
    assert s.digest == Sample(np.array([0.0, 2.0, 0.0, 4.0])).digest
    assert s.digest != Sample([2.0, 0.0, 0.0, 4.0]).digest


def test_ecdf_examples():
    assert list(ecdf(Sample([5.0])).ps) == [1.0]
    assert ecdf(Sample([1.0, 2.0, 3.0, 4.0]))(2.0) == 0.5
    c = ecdf(Sample([2.0, 1.0, 2.0]))
    assert list(c.xs) == [1.0, 2.0, 2.0]
    np.testing.assert_array_equal(c.ps, [1 / 3, 2 / 3, 1.0])
    assert c(0.5) == 0.0 and c(10.0) == 1.0


@given(speeds)
def test_ecdf_is_valid_cdf(values):
    c = ecdf(Sample(values))
    assert np.all(np.diff(c.ps) > 0)
    assert np.all(np.diff(c.xs) >= 0)
    assert c.ps[-1] == 1.0
    assert c.xs.size == len(values)


def test_histogram_fixed_bins():
    h = histogram(Sample([1.0, 2.0, 3.0, 4.0]), 2, (1.0, 4.0))
    assert list(h.counts) == [2, 2]
    np.testing.assert_allclose(h.bin_edges, [1.0, 2.5, 4.0])


def test_histogram_needs_two_points():
    with pytest.raises(DegenerateDataError):
        histogram(Sample([1.0]))


def test_histogram_rules():
    x = Sample(np.arange(1000, dtype=float))
    # Freedman-Diaconis: width = 2 * IQR / n^(1/3) = 2 * 499.5 / 10
    assert histogram(x, "fd").counts.size == math.ceil(999 / 99.9)
    assert histogram(x, "sturges").counts.size == 11
    # zero IQR falls back to Sturges
    assert histogram(Sample([1.0] * 10 + [2.0]), "fd").counts.size == 5
    with pytest.raises(DomainError):
        histogram(x, "scott")
    with pytest.raises(DomainError):
        histogram(x, 0)


@given(speeds, st.sampled_from(["fd", "sturges", 7]))
def test_histogram_normalized(values, rule):
    h = histogram(Sample(values), rule)
    assert np.sum(h.density * h.widths) == pytest.approx(1.0, rel=1e-12)
    assert h.counts.sum() == len(values)


@given(speeds, st.randoms(use_true_random=False))
def test_histogram_permutation_invariant(values, rnd):
    shuffled = list(values)
    rnd.shuffle(shuffled)
    a, b = histogram(Sample(values)), histogram(Sample(shuffled))
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.bin_edges, b.bin_edges)


def test_plotting_positions_examples():
    assert list(plotting_positions(1)) == [0.5]
    p = plotting_positions(10)
    assert p[0] == 0.05 and p[-1] == 0.95
    assert list(plotting_positions(3, "weibull")) == [0.25, 0.5, 0.75]
    with pytest.raises(DomainError):
        plotting_positions(0)


@given(st.integers(1, 5000), st.sampled_from(["hazen", "weibull"]))
def test_plotting_positions_symmetric(n, rule):
    p = plotting_positions(n, rule)
    assert np.all(p + p[::-1] == 1.0)
    assert np.all((p > 0) & (p < 1))


def test_evaluation_grid():
    assert list(evaluation_grid(Sample([0.0, 10.0]), 3)) == [0.0, 5.0, 10.0]
    g = evaluation_grid(Sample([0.3, 7.7, 2.0]))
    assert g.size == 1000 and g[0] == 0.3 and g[-1] == 7.7
    with pytest.raises(DegenerateDataError):
        evaluation_grid(Sample([2.0, 2.0]))
