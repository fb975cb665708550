"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line in the summary."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import integrate
from support import K, random_params, write_telemetry

from windfit.cli import REPORT_NAME, main
from windfit.diagnostics import compare, ks_statistic
from windfit.distributions import KIND_ORDER, ParametrizationMode, ParamSet, cdf, pdf, quantile, sample
from windfit.estimation import DistributionSpec, FittedModel, fit, fit_all
from windfit.ingest import SPEED_COLUMNS, extract_sample, load_csv

REDUCED = ParametrizationMode.REDUCED
TRUE_WEIBULL = ParamSet(2.0, 0.0, 8.0)
FARM_ROWS = 39_606


def note(request, text: str) -> None:
    request.node.user_properties.append(("detail", text))


@pytest.fixture(scope="module")
def farm_file(tmp_path_factory):
    return write_telemetry(tmp_path_factory.mktemp("farm") / "turbine.csv", FARM_ROWS, seed=2013)


def _mass(kind, p: ParamSet) -> float:
    # split the support at a few quantiles so quad sees the bulk
    cuts = [p.loc, *quantile(kind, p, np.array([0.01, 0.5, 0.99]))]
    cuts.append(p.loc + p.scale if kind is K.BETA else math.inf)
    return sum(
        integrate.quad(lambda t: pdf(kind, p, t), a, b, limit=200, epsabs=1e-12, epsrel=1e-12)[0]
        for a, b in zip(cuts[:-1], cuts[1:])
    )


@pytest.mark.acceptance(1, "density integrates to 1 (25 ParamSets per kind, tol 1e-6)")
def test_density_normalization(request):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = max(abs(_mass(kind, random_params(kind, rng)) - 1.0) for kind in KIND_ORDER for _ in range(25))
    elapsed = time.perf_counter() - t0
    note(request, f"max |mass - 1| = {worst:.2e}, {elapsed:.1f} s")
    assert worst <= 1e-6
    assert elapsed < 10


@pytest.mark.acceptance(2, "cdf(quantile(p)) = p within 1e-8 (25 ParamSets per kind)")
def test_round_trip(request):
    rng = np.random.default_rng(202)
    probs = np.array([0.001, *np.round(np.arange(0.01, 1.0, 0.01), 2), 0.999])
    t0 = time.perf_counter()
    worst = 0.0
    for kind in KIND_ORDER:
        for _ in range(25):
            p = random_params(kind, rng)
            worst = max(worst, float(np.max(np.abs(cdf(kind, p, quantile(kind, p, probs)) - probs))))
    elapsed = time.perf_counter() - t0
    note(request, f"max error = {worst:.2e}, {elapsed:.1f} s")
    assert worst <= 1e-8
    assert elapsed < 5


@pytest.mark.acceptance(3, "reduced LogNormal fit equals closed-form MLE (20 samples, n=1000, rel 1e-6)")
def test_lognormal_oracle(request):
    rng = np.random.default_rng(303)
    spec = DistributionSpec(K.LOGNORMAL, REDUCED)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(20):
        truth = ParamSet(float(rng.uniform(0.2, 1.2)), 0.0, float(rng.uniform(2.0, 12.0)))
        s = sample(K.LOGNORMAL, truth, 1000, seed=3000 + i)
        lx = np.log(s.values)
        m = lx.mean()
        alpha_hat, scale_hat = math.sqrt(np.mean((lx - m) ** 2)), math.exp(m)
        model = fit(spec, s)
        worst = max(
            worst,
            abs(model.params.alpha / alpha_hat - 1.0),
            abs(model.params.scale / scale_hat - 1.0),
        )
    elapsed = time.perf_counter() - t0
    note(request, f"max relative error = {worst:.2e}, {elapsed:.1f} s")
    assert worst <= 1e-6
    assert elapsed < 10


@pytest.mark.acceptance(4, "reduced Weibull recovers (2, 8) on n=50,000 in >= 95 of 100 trials")
def test_weibull_recovery(request):
    spec = DistributionSpec(K.WEIBULL, REDUCED)
    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        p = fit(spec, sample(K.WEIBULL, TRUE_WEIBULL, 50_000, seed=seed)).params
        hits += 1.97 <= p.alpha <= 2.03 and 7.92 <= p.scale <= 8.08
    elapsed = time.perf_counter() - t0
    note(request, f"{hits}/100 inside the bands, {elapsed:.1f} s")
    assert hits >= 95
    assert elapsed < 120


@pytest.mark.acceptance(5, "compare (reduced) names Weibull on Weibull(2,0,8) data in >= 95 of 100 trials")
def test_model_selection(request):
    t0 = time.perf_counter()
    wins = 0
    for seed in range(100):
        s = sample(K.WEIBULL, TRUE_WEIBULL, 5000, seed=10_000 + seed)
        wins += compare(fit_all(s, REDUCED), s).winner is K.WEIBULL
    elapsed = time.perf_counter() - t0
    note(request, f"Weibull won {wins}/100, {elapsed:.1f} s")
    assert wins >= 95
    assert elapsed < 180


@pytest.mark.acceptance(6, "39,606-row semicolon file gives rows_read=39606 and three equal speed Samples")
def test_ingestion_fidelity(request, farm_file):
    t0 = time.perf_counter()
    records, report = load_csv(farm_file)
    samples = [extract_sample(records, c, source=farm_file) for c in SPEED_COLUMNS]
    elapsed = time.perf_counter() - t0
    lengths = [s.n for s in samples]
    note(request, f"rows_read={report.rows_read}, lengths={lengths}, {elapsed:.1f} s")
    assert farm_file.read_text().splitlines()[0].count(";") == 7
    assert report.rows_read == FARM_ROWS
    assert lengths == [report.rows_accepted] * 3
    assert elapsed < 5


@pytest.mark.acceptance(7, "plot in csv-points mode writes 12 curve files with 1000-point pdf/cdf curves")
def test_figure_inventory(request, farm_file, tmp_path):
    t0 = time.perf_counter()
    code = main(["plot", "--input", str(farm_file), "--format", "csv-points", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t0
    kinds = {k.value for k in KIND_ORDER}
    curves = [p for p in tmp_path.iterdir() if p.suffix == ".csv" and p.stem.split("_")[0] in kinds]
    points = {
        p.stem: len(p.read_text().splitlines()) - 1 for p in curves if p.stem.endswith(("_pdf", "_cdf"))
    }
    note(request, f"{len(curves)} curve files, pdf/cdf points {sorted(set(points.values()))}, {elapsed:.1f} s")
    assert code == 0
    assert len(curves) == 12
    assert len(points) == 8 and set(points.values()) == {1000}
    assert elapsed < 30


@pytest.mark.acceptance(8, "KS D_n < 1.36/sqrt(n) against the true model in 90-99 of 100 trials (n=10,000)")
def test_ks_sanity(request):
    truth = {
        K.LOGNORMAL: ParamSet(0.5, 0.0, 7.0),
        K.WEIBULL: TRUE_WEIBULL,
        K.GAMMA: ParamSet(3.5, 0.0, 2.0),
        K.BETA: ParamSet(2.0, 0.0, 25.0, 5.0),
    }
    n = 10_000
    t0 = time.perf_counter()
    below = 0
    for seed in range(100):
        kind = KIND_ORDER[seed % 4]
        s = sample(kind, truth[kind], n, seed=seed)
        model = FittedModel(DistributionSpec(kind), truth[kind], 0.0, n, True, 0, 0.0)
        below += ks_statistic(model, s) < 1.36 / math.sqrt(n)
    elapsed = time.perf_counter() - t0
    note(request, f"{below}/100 below the critical value, {elapsed:.1f} s")
    assert 90 <= below <= 99
    assert elapsed < 60


@pytest.mark.acceptance(9, "two fit runs with identical config and seed give byte-identical reports")
def test_determinism(request, farm_file, tmp_path):
    reports = []
    for run in ("first", "second"):
        out = tmp_path / run
        assert main(["fit", "--input", str(farm_file), "--seed", "7", "--out", str(out)]) == 0
        reports.append((out / REPORT_NAME).read_bytes())
    note(request, f"report size {len(reports[0])} bytes")
    assert reports[0] == reports[1]


@pytest.mark.acceptance(10, "pdf = cdf = 0 below loc; Beta pdf = 0, cdf = 1 above loc + scale (1000 probes)")
def test_support_invariants(request):
    rng = np.random.default_rng(1010)
    probes = violations = 0
    for _ in range(1000):
        kind = KIND_ORDER[int(rng.integers(4))]
        p = random_params(kind, rng)
        below = p.loc - float(rng.exponential(2.0)) - 1e-12
        violations += pdf(kind, p, below) != 0.0 or cdf(kind, p, below) != 0.0
        if kind is K.BETA:
            above = p.loc + p.scale + float(rng.exponential(2.0)) + 1e-12
            violations += pdf(kind, p, above) != 0.0 or cdf(kind, p, above) != 1.0
        probes += 1
    note(request, f"{violations} violations in {probes} probes")
    assert probes == 1000
    assert violations == 0
