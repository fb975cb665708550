"""Command-line interface: ``windfit {fit,plot,sample,ingest-check}``.

Settings come from, in increasing priority: built-in defaults, the
``WINDFIT_OUT`` environment variable (output directory only), a ``key = value``
config file given with ``--config``, and command-line flags.

Exit codes: 0 success, 1 I/O failure, 2 invalid input or degenerate data,
3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Sequence

from windfit import __version__
from windfit.diagnostics import compare, ks_statistic, qq_report
from windfit.distributions import (
    KIND_ORDER,
    DistributionKind,
    ParametrizationMode,
    ParamSet,
    sample as draw_sample,
)
from windfit.empirical import Sample
from windfit.errors import DegenerateDataError, DomainError, EmptyDatasetError, WindfitError
from windfit.estimation import FitSettings, FittedModel, fit_all
from windfit.figures import write_figures
from windfit.ingest import SPEED_COLUMNS, extract_sample, load_csv, load_values, sampling_interval_mode

log = logging.getLogger("windfit")

EXIT_OK, EXIT_IO, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
OUT_ENV = "WINDFIT_OUT"
REPORT_NAME = "fit_report.jsonl"


@dataclass
class RunConfig:
    input: str | None = None
    input_format: str = "auto"
    column: str = "nacelle"
    mode: str = "full"
    kinds: tuple[str, ...] = tuple(k.value for k in KIND_ORDER)
    out: str = "windfit-out"
    format: str = "svg"
    seed: int = 0
    bins: str = "fd"
    drop_zeros: bool = False
    tol: float = FitSettings.tol
    max_iter: int = FitSettings.max_iter
    eps_factor: float = FitSettings.eps_factor
    # sample command
    kind: str = "weibull"
    alpha: float | None = None
    beta: float | None = None
    loc: float = 0.0
    scale: float = 1.0
    n: int | None = None
    output: str | None = None

    @property
    def fit_settings(self) -> FitSettings:
        return FitSettings(tol=self.tol, max_iter=self.max_iter, eps_factor=self.eps_factor)

    @property
    def parametrization(self) -> ParametrizationMode:
        return ParametrizationMode(self.mode)

    @property
    def distribution_kinds(self) -> list[DistributionKind]:
        if not self.kinds:
            raise DomainError("at least one distribution kind is required")
        return [DistributionKind(k) for k in self.kinds]

    @property
    def bin_rule(self):
        return int(self.bins) if str(self.bins).isdigit() else self.bins


def _coerce(name: str, raw: Any) -> Any:
    """Convert a config-file string (or flag value) to the RunConfig field's type."""
    if name == "kinds":
        items = raw.split(",") if isinstance(raw, str) else list(raw)
        return tuple(k.strip().lower() for k in items if k.strip())
    if name == "drop_zeros":
        if isinstance(raw, bool):
            return raw
        return str(raw).strip().lower() in ("1", "true", "yes", "on")
    if name in ("seed", "max_iter", "n"):
        return int(raw)
    if name in ("tol", "eps_factor", "alpha", "beta", "loc", "scale"):
        return float(raw)
    return str(raw).strip()


def read_config_file(path: str | os.PathLike) -> dict[str, Any]:
    """Flat ``key = value`` lines; ``#`` starts a comment; dashes in keys are allowed."""
    known = {f.name for f in fields(RunConfig)}
    values: dict[str, Any] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep or key not in known:
                raise DomainError(f"{path}:{lineno}: cannot use {line!r}")
            values[key] = _coerce(key, value.strip())
    return values


def resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if os.environ.get(OUT_ENV):
        cfg.out = os.environ[OUT_ENV]
    if getattr(args, "config", None):
        for key, value in read_config_file(args.config).items():
            setattr(cfg, key, value)
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, _coerce(f.name, value))
    return cfg


def load_sample(cfg: RunConfig) -> Sample:
    if not cfg.input:
        raise DomainError("--input is required")
    path = Path(cfg.input)
    fmt = cfg.input_format
    if fmt == "auto":
        with open(path, encoding="utf-8") as fh:
            first = fh.readline()
        fmt = "telemetry" if ";" in first else "values"
    if fmt == "telemetry":
        records, report = load_csv(path)
        if report.rows_rejected:
            log.info("%s: rejected %d of %d rows", path, report.rows_rejected, report.rows_read)
        sample = extract_sample(records, cfg.column, source=path)
    elif fmt == "values":
        sample = load_values(path)
    else:
        raise DomainError(f"unknown input format {fmt!r}")
    if cfg.drop_zeros:
        kept = sample.values[sample.values > 0]
        if kept.size == 0:
            raise EmptyDatasetError("no nonzero wind speeds left after --drop-zeros")
        sample = Sample(kept, sample.source_label)
    return sample


def _num(v: float | None) -> float | None:
    """Round to 10 significant digits; non-finite values become null."""
    if v is None or not math.isfinite(v):
        return None
    return float(f"{v:.10g}")


def model_record(m: FittedModel, sample: Sample) -> dict[str, Any]:
    qq = qq_report(m, sample)
    p = m.params
    return {
        "record": "model",
        "kind": m.kind.value,
        "mode": m.spec.mode.value,
        "alpha": _num(p.alpha),
        "beta": _num(p.beta),
        "loc": _num(p.loc),
        "scale": _num(p.scale),
        "log_likelihood": _num(m.log_likelihood),
        "aic": _num(m.aic),
        "ks_statistic": _num(ks_statistic(m, sample)),
        "qq_max_abs_dev": _num(qq.max_abs_dev),
        "qq_tail_abs_dev": _num(qq.tail_abs_dev),
        "converged": m.converged,
        "iterations": m.iterations,
        "n": m.n,
        "note": m.message,
    }


def build_report(cfg: RunConfig, sample: Sample, models: list[FittedModel]) -> list[dict[str, Any]]:
    lines: list[dict[str, Any]] = [
        {
            "record": "input",
            "source": sample.source_label,
            "column": cfg.column,
            "mode": cfg.mode,
            "n": sample.n,
            "min": _num(float(sample.sorted[0])),
            "max": _num(float(sample.sorted[-1])),
        }
    ]
    lines += [model_record(m, sample) for m in models]
    if len(models) >= 2:
        cmp = compare(models, sample)
        lines.append(
            {
                "record": "comparison",
                "ranking": [k.value for k in cmp.ranking],
                "winner": cmp.winner.value,
                "tail_winner": cmp.tail_winner.value,
            }
        )
    return lines


def _fit_models(cfg: RunConfig) -> tuple[Sample, list[FittedModel]]:
    sample = load_sample(cfg)
    models = fit_all(sample, cfg.parametrization, cfg.fit_settings, cfg.distribution_kinds)
    return sample, models


def cmd_fit(cfg: RunConfig) -> Path:
    sample, models = _fit_models(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / REPORT_NAME
    lines = build_report(cfg, sample, models)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in lines:
            fh.write(json.dumps(rec, allow_nan=False) + "\n")
    for rec in lines:
        if rec["record"] == "model":
            print(
                f"{rec['kind']:<10} {rec['mode']:<8} alpha={rec['alpha']} beta={rec['beta']} "
                f"loc={rec['loc']} scale={rec['scale']} logL={rec['log_likelihood']} "
                f"KS={rec['ks_statistic']} converged={rec['converged']}"
            )
        elif rec["record"] == "comparison":
            print(f"winner: {rec['winner']}  tail winner: {rec['tail_winner']}  ranking: {' > '.join(rec['ranking'])}")
    print(f"report written to {path}")
    return path


def cmd_plot(cfg: RunConfig) -> list[Path]:
    if cfg.format not in ("svg", "csv-points"):
        raise DomainError(f"unknown figure format {cfg.format!r}")
    sample, models = _fit_models(cfg)
    paths = write_figures(models, sample, Path(cfg.out), cfg.format, cfg.bin_rule)
    print(f"{len(paths)} figures written to {cfg.out}")
    return paths


def cmd_sample(cfg: RunConfig) -> Path:
    if cfg.n is None or cfg.n < 1:
        raise DomainError("sample size -n must be at least 1")
    if cfg.alpha is None:
        raise DomainError("--alpha is required")
    kind = DistributionKind(cfg.kind)
    params = ParamSet(alpha=cfg.alpha, beta=cfg.beta, loc=cfg.loc, scale=cfg.scale)
    draws = draw_sample(kind, params, cfg.n, cfg.seed)
    path = Path(cfg.output) if cfg.output else Path(cfg.out) / f"sample_{kind.value}_seed{cfg.seed}.txt"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{v!r}\n" for v in draws.values.tolist())
    print(f"{cfg.n} draws written to {path}")
    return path


def cmd_ingest_check(cfg: RunConfig) -> dict[str, Any]:
    if not cfg.input:
        raise DomainError("--input is required")
    records, report = load_csv(cfg.input)
    summary = {
        "rows_read": report.rows_read,
        "rows_accepted": report.rows_accepted,
        "rows_rejected": report.rows_rejected,
        "rejection_reasons": dict(sorted(report.rejection_reasons.items())),
        "sampling_interval_minutes": sampling_interval_mode(records) if len(records) > 1 else None,
    }
    for column in SPEED_COLUMNS:
        s = extract_sample(records, column)
        summary[f"wind_speed_{column}"] = {
            "n": s.n,
            "min": _num(float(s.sorted[0])),
            "max": _num(float(s.sorted[-1])),
            "zeros": int((s.values == 0).sum()),
        }
    print(json.dumps(summary, indent=2))
    return summary


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="telemetry CSV (semicolon-separated) or a one-value-per-line file")
    p.add_argument("--input-format", choices=["auto", "telemetry", "values"], help="default: auto")
    p.add_argument("--column", choices=list(SPEED_COLUMNS), help="wind-speed column (default: nacelle)")
    p.add_argument("--mode", choices=["full", "reduced"], help="parametrization (default: full)")
    p.add_argument("--kinds", help="comma-separated subset of lognormal,weibull,gamma,beta (default: all)")
    p.add_argument("--drop-zeros", action="store_const", const=True, default=None, help="discard exact-zero speeds")
    p.add_argument("--tol", type=float, help=f"simplex diameter tolerance (default: {FitSettings.tol})")
    p.add_argument("--max-iter", type=int, help=f"iterations per simplex run (default: {FitSettings.max_iter})")
    p.add_argument("--eps-factor", type=float, help=f"loc gap as a fraction of the range (default: {FitSettings.eps_factor})")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file (flags take precedence)")
    common.add_argument("--out", help=f"output directory (default: ${OUT_ENV} or ./windfit-out)")
    common.add_argument("--seed", type=int, help="random seed (default: 0)")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    parser = argparse.ArgumentParser(
        prog="windfit",
        description="Fit Log-Normal, Weibull, Gamma and Beta distributions to wind-speed data.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", parents=[common], help="fit distributions and write a JSON-lines report")
    _add_data_flags(p)

    p = sub.add_parser("plot", parents=[common], help="density, CDF and Q-Q figures for each fitted model")
    _add_data_flags(p)
    p.add_argument("--format", choices=["svg", "csv-points"], help="figure output (default: svg)")
    p.add_argument("--bins", help="histogram bins: a count, 'fd' or 'sturges' (default: fd)")

    p = sub.add_parser("sample", parents=[common], help="write seeded random draws, one per line")
    p.add_argument("--kind", choices=[k.value for k in KIND_ORDER], help="default: weibull")
    p.add_argument("--alpha", type=float, help="shape")
    p.add_argument("--beta", type=float, help="second shape (Beta only)")
    p.add_argument("--loc", type=float, help="location (default: 0)")
    p.add_argument("--scale", type=float, help="scale (default: 1)")
    p.add_argument("-n", type=int, help="number of draws")
    p.add_argument("--output", help="output file (default: <out>/sample_<kind>_seed<seed>.txt)")

    p = sub.add_parser("ingest-check", parents=[common], help="validate a telemetry CSV and summarize it")
    p.add_argument("--input", help="telemetry CSV")
    return parser


COMMANDS = {
    "fit": cmd_fit,
    "plot": cmd_plot,
    "sample": cmd_sample,
    "ingest-check": cmd_ingest_check,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command](cfg)
    except (EmptyDatasetError, DegenerateDataError, DomainError) as exc:
        print(f"windfit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"windfit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ArithmeticError, WindfitError) as exc:
        print(f"windfit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"windfit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
