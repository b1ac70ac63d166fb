"""Command-line front end.

Every randomized command resolves a seed (flag, then the DCORR_SEED
environment variable, then 0) and echoes it in the output, so any run can
be reproduced from its own report.  Output formats: ``json`` (stable
schema: command, seed, measure, lags, values, envelopes, warnings, plus
command extras), ``tsv`` (lag, value, one column per quantile level), and
``svg`` (a matplotlib figure written to --output with the exact plot data
in a .tsv file next to it).
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .ar import (
    fit_ar_ls,
    fit_ar_yw,
    select_order_aicc,
    simulate_ar,
)
from .dcov import acf, adcf, cdcf, dcor, dcov_v
from .errors import ConfigError, DcorrError
from .io import curve_tsv, read_csv, result_json, write_series_csv
from .measures import parse_measure
from .noise import parse_noise
from .plots import diagnose_figure, lag_curve_figure, save_figure
from .resample import (
    FITTED_GAUSSIAN,
    RESAMPLE_RESIDUALS,
    parametric_bootstrap_envelope,
    permutation_envelope,
)

SEED_ENV_VAR = "DCORR_SEED"


@dataclass(frozen=True)
class RunConfig:
    """Resolved options of one CLI invocation."""

    command: str
    input: str | None
    measure_spec: str
    seed: int
    fmt: str
    output: str | None
    levels: tuple
    threads: int


class _Parser(argparse.ArgumentParser):
    # accept values like "-0.14,0.3" or "-5:5" after --phi / --lags
    _negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        raise ConfigError(message)


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None and env.strip():
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR}={env!r} is not an integer")
    return 0


def _parse_levels(text: str) -> tuple:
    try:
        levels = tuple(sorted(float(v) for v in text.split(",") if v.strip()))
    except ValueError:
        raise ConfigError(f"bad quantile levels {text!r}")
    if not levels:
        raise ConfigError("need at least one quantile level")
    return levels


def _parse_lag_list(text: str) -> list:
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = text.split(":")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"bad lag list {text!r}; use e.g. -5:5 or -3,0,2")


def _parse_phi(text: str) -> np.ndarray:
    if not text.strip():
        return np.array([])
    try:
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ConfigError(f"bad coefficient list {text!r}")


def _load_column(args, attr="column"):
    series = read_csv(args.input)
    key = getattr(args, attr)
    if key is None:
        if len(series.labels) == 1:
            key = 0
        else:
            raise ConfigError(
                f"file has {len(series.labels)} columns; pick one with --column"
            )
    return series.column(key)


def _base_result(config: RunConfig) -> dict:
    return {
        "command": config.command,
        "seed": config.seed,
        "measure": config.measure_spec or None,
        "lags": [],
        "values": [],
        "envelopes": {},
        "warnings": [],
    }


def _envelope_levels_dict(envelope) -> dict:
    return {
        f"{level:g}": [float(v) for v in vals]
        for level, vals in envelope.quantiles.items()
    }


def _emit(config: RunConfig, result: dict, tsv_text: str | None, figure_builder) -> None:
    if config.fmt == "json":
        payload = result_json(result)
        if config.output:
            Path(config.output).write_text(payload)
        else:
            sys.stdout.write(payload)
        return
    if config.fmt == "tsv":
        if tsv_text is None:
            raise ConfigError(f"{config.command} has no tabular form; use json")
        if config.output:
            Path(config.output).write_text(tsv_text)
        else:
            sys.stdout.write(tsv_text)
        return
    if figure_builder is None or tsv_text is None:
        raise ConfigError(f"{config.command} has no figure; use json or tsv")
    if not config.output:
        raise ConfigError("svg output needs --output PATH.svg")
    out = Path(config.output)
    if out.suffix == ".tsv":
        raise ConfigError("svg output path must not end in .tsv")
    save_figure(figure_builder(), out)
    sidecar = out.with_suffix(".tsv")
    sidecar.write_text(tsv_text)
    sys.stdout.write(f"wrote {out} and {sidecar}\n")


def _exceedances(lags, values, envelope_values) -> list:
    return [int(h) for h, v, q in zip(lags, values, envelope_values) if v > q]


def build_parser() -> _Parser:
    parser = _Parser(prog="dcorr", description="distance-correlation time series toolkit")
    parser.add_argument("--version", action="version", version=f"dcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, input_file=True, measure=True, randomized=False):
        if input_file:
            p.add_argument("--input", "-i", required=True, help="input CSV file")
        if measure:
            p.add_argument(
                "--measure", "-m", default="gauss:var=0.5",
                help="weight measure spec (szekely:alpha=A | gauss:var=V | "
                "stable:beta=B,scale=S); default gauss:var=0.5",
            )
        p.add_argument("--format", "-f", choices=("json", "tsv", "svg"), default="json")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        p.add_argument(
            "--seed", type=int, default=None,
            help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)",
        )
        if randomized:
            p.add_argument("--B", "-B", type=int, default=1000, help="replicate count")
            p.add_argument("--levels", default="0.05,0.5,0.95", help="quantile levels")
            p.add_argument(
                "--threads", type=int, default=os.cpu_count() or 1,
                help="worker threads for resampling replicates",
            )

    p = sub.add_parser("dcov", help="distance covariance/correlation of two columns")
    common(p)
    p.add_argument("--x", required=True, help="first column (name or index)")
    p.add_argument("--y", required=True, help="second column (name or index)")

    p = sub.add_parser("adcf", help="distance autocorrelation by lag")
    common(p)
    p.add_argument("--column", "-c", default=None, help="column (name or index)")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--scaled", action="store_true", help="multiply by the sample size")

    p = sub.add_parser("cdcf", help="cross-distance correlation by lag")
    common(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--lags", default="-10:10", help="lag range a:b or comma list")

    p = sub.add_parser("acf", help="classical autocorrelation by lag")
    common(p, measure=False)
    p.add_argument("--column", "-c", default=None)
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument(
        "--transform", choices=("identity", "square", "abs"), default="identity"
    )

    p = sub.add_parser("fit-ar", help="fit an AR(p) model")
    common(p, measure=False)
    p.add_argument("--column", "-c", default=None)
    p.add_argument("--p", type=int, default=None, help="AR order")
    p.add_argument(
        "--max-p", type=int, default=None,
        help="select the order in 0..max-p by corrected AIC",
    )
    p.add_argument("--method", choices=("ls", "yw"), default="ls")

    p = sub.add_parser("simulate", help="simulate an AR series to CSV")
    common(p, input_file=False, measure=False)
    p.add_argument("--phi", default="", help="comma-separated AR coefficients")
    p.add_argument(
        "--noise", default="gauss:sigma=1",
        help="noise spec (gauss:sigma=S | t:df=D | sgamma:delta=D,beta=B)",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--burn-in", type=int, default=None)

    p = sub.add_parser("permtest", help="scaled lag statistic vs permutation envelope")
    common(p, randomized=True)
    p.add_argument("--column", "-c", default=None)
    p.add_argument("--max-lag", type=int, default=20)

    p = sub.add_parser(
        "diagnose", help="AR goodness of fit via the residual lag statistic"
    )
    common(p, randomized=True)
    p.add_argument("--column", "-c", default=None)
    p.add_argument("--p", type=int, default=None, help="AR order (default: by corrected AIC)")
    p.add_argument("--max-p", type=int, default=10, help="order search bound")
    p.add_argument("--max-lag", type=int, default=20)
    p.add_argument("--method", choices=("ls", "yw"), default="ls")
    p.add_argument(
        "--noise-source", choices=("residuals", "gaussian"), default="residuals",
        help="bootstrap noise: resampled residuals or fitted Gaussian",
    )
    return parser


def _make_config(args) -> RunConfig:
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        measure_spec=getattr(args, "measure", ""),
        seed=_resolve_seed(args.seed),
        fmt=args.format,
        output=args.output,
        levels=_parse_levels(args.levels) if hasattr(args, "levels") else (),
        threads=getattr(args, "threads", 1),
    )


def _cmd_dcov(args, config: RunConfig):
    measure = parse_measure(config.measure_spec)
    series = read_csv(args.input)
    x = series.column(args.x)
    y = series.column(args.y)
    cov = dcov_v(x, y, measure)
    corr = dcor(x, y, measure)
    result = _base_result(config)
    result["lags"] = [0]
    result["values"] = [corr]
    result["dcov"] = cov
    result["dcor"] = corr
    tsv = curve_tsv([0], [corr])
    return result, tsv, lambda: lag_curve_figure([0], [corr], ylabel="dcor")


def _curve_result(args, config: RunConfig, curve, ylabel: str):
    result = _base_result(config)
    result["lags"] = [int(h) for h in curve.lags]
    result["values"] = [float(v) for v in curve.values]
    result["statistic"] = curve.statistic
    tsv = curve_tsv(curve.lags, curve.values)
    builder = lambda: lag_curve_figure(
        curve.lags, curve.values, title=config.command, ylabel=ylabel
    )
    return result, tsv, builder


def _cmd_adcf(args, config: RunConfig):
    measure = parse_measure(config.measure_spec)
    x = _load_column(args)
    curve = adcf(x, args.max_lag, measure, scaled=args.scaled)
    return _curve_result(args, config, curve, "n*R(h)" if args.scaled else "R(h)")


def _cmd_cdcf(args, config: RunConfig):
    measure = parse_measure(config.measure_spec)
    series = read_csv(args.input)
    x = series.column(args.x)
    y = series.column(args.y)
    curve = cdcf(x, y, _parse_lag_list(args.lags), measure)
    return _curve_result(args, config, curve, "R(h)")


def _cmd_acf(args, config: RunConfig):
    x = _load_column(args)
    curve = acf(x, args.max_lag, transform=args.transform)
    return _curve_result(args, config, curve, "acf")


def _cmd_fit_ar(args, config: RunConfig):
    x = _load_column(args)
    fit = fit_ar_ls if args.method == "ls" else fit_ar_yw
    selected = None
    if args.p is None:
        if args.max_p is None:
            raise ConfigError("fit-ar needs --p or --max-p")
        selected = select_order_aicc(x, args.max_p)
        if selected == 0:
            raise ConfigError(
                "order 0 selected (white noise); pass --p explicitly to force a fit"
            )
        order = selected
    else:
        order = args.p
    model = fit(x, order)
    result = _base_result(config)
    result.pop("measure")
    result.update(
        {
            "order": model.p,
            "selected_by_aicc": selected,
            "phi": [float(v) for v in model.phi],
            "noise_variance": model.noise_variance,
            "mean": model.mean,
            "method": model.method,
            "n_residuals": int(model.residuals.size),
        }
    )
    lines = ["t\tresidual"]
    lines.extend(
        f"{model.p + i + 1}\t{float(r)!r}" for i, r in enumerate(model.residuals)
    )
    return result, "\n".join(lines) + "\n", None


def _cmd_simulate(args, config: RunConfig):
    phi = _parse_phi(args.phi)
    noise = parse_noise(args.noise)
    values = simulate_ar(phi, noise, args.n, burn_in=args.burn_in, seed=config.seed)
    if config.fmt == "json":
        result = _base_result(config)
        result.pop("measure")
        result.update(
            {
                "phi": [float(v) for v in phi],
                "noise": noise.label(),
                "n": int(args.n),
                "values": [float(v) for v in values],
            }
        )
        return result, None, None
    if config.fmt != "tsv":
        raise ConfigError("simulate writes CSV data; use --format json or tsv")
    if config.output:
        write_series_csv(config.output, values)
    else:
        sys.stdout.write("x\n")
        for v in values:
            sys.stdout.write(f"{float(v)!r}\n")
    return None


def _cmd_permtest(args, config: RunConfig):
    measure = parse_measure(config.measure_spec)
    x = _load_column(args)
    observed = adcf(x, args.max_lag, measure, scaled=True)
    envelope = permutation_envelope(
        x,
        args.max_lag,
        measure,
        B=args.B,
        levels=config.levels,
        seed=config.seed,
        threads=config.threads,
    )
    top = max(envelope.quantiles)
    result = _base_result(config)
    result["lags"] = [int(h) for h in observed.lags]
    result["values"] = [float(v) for v in observed.values]
    result["statistic"] = observed.statistic
    result["envelopes"] = _envelope_levels_dict(envelope)
    result["B"] = envelope.B
    result["exceed_level"] = top
    result["exceedances"] = _exceedances(
        observed.lags, observed.values, envelope.quantiles[top]
    )
    tsv = curve_tsv(observed.lags, observed.values, {"": envelope.quantiles})
    builder = lambda: lag_curve_figure(
        observed.lags,
        observed.values,
        envelopes={"": envelope.quantiles},
        title="scaled statistic vs permutation envelope",
        ylabel="n*R(h)",
    )
    return result, tsv, builder


def _cmd_diagnose(args, config: RunConfig):
    measure = parse_measure(config.measure_spec)
    x = _load_column(args)
    fit = fit_ar_ls if args.method == "ls" else fit_ar_yw
    selected = None
    if args.p is None:
        selected = select_order_aicc(x, args.max_p)
        order = max(selected, 1)
    else:
        order = args.p
    model = fit(x, order)
    resid = model.residuals
    m = resid.size

    observed = adcf(resid, args.max_lag, measure, scaled=True)
    adjusted = parametric_bootstrap_envelope(
        model,
        x.size,
        args.max_lag,
        measure,
        B=args.B,
        levels=config.levels,
        seed=config.seed,
        noise_source=(
            RESAMPLE_RESIDUALS if args.noise_source == "residuals" else FITTED_GAUSSIAN
        ),
        threads=config.threads,
    )
    iid = permutation_envelope(
        resid,
        args.max_lag,
        measure,
        B=args.B,
        levels=config.levels,
        seed=config.seed + 1,
        threads=config.threads,
    )
    top = max(adjusted.quantiles)
    report = _base_result(config)
    report["lags"] = [int(h) for h in observed.lags]
    report["values"] = [float(v) for v in observed.values]
    report["statistic"] = observed.statistic
    report["envelopes"] = _envelope_levels_dict(adjusted)
    report["permutation_envelopes"] = _envelope_levels_dict(iid)
    report["order"] = model.p
    report["selected_by_aicc"] = selected
    report["method"] = model.method
    report["phi"] = [float(v) for v in model.phi]
    report["noise_variance"] = model.noise_variance
    report["B"] = args.B
    report["exceed_level"] = top
    report["exceedances"] = {
        "adjusted": _exceedances(observed.lags, observed.values, adjusted.quantiles[top]),
        "iid": _exceedances(observed.lags, observed.values, iid.quantiles[top]),
    }
    for key, curve in (
        ("acf_series", acf(x, min(args.max_lag, x.size - 2))),
        ("acf_residuals", acf(resid, min(args.max_lag, m - 2))),
        ("acf_residuals_squared", acf(resid, min(args.max_lag, m - 2), transform="square")),
    ):
        report[key] = {
            "lags": [int(h) for h in curve.lags],
            "values": [float(v) for v in curve.values],
        }
    tsv = curve_tsv(
        observed.lags,
        observed.values,
        {"": adjusted.quantiles, "iid_": iid.quantiles},
    )

    def builder():
        plot_report = dict(report)
        plot_report["envelopes"] = adjusted.quantiles
        plot_report["permutation_envelopes"] = iid.quantiles
        return diagnose_figure(plot_report)

    return report, tsv, builder


_COMMANDS = {
    "dcov": _cmd_dcov,
    "adcf": _cmd_adcf,
    "cdcf": _cmd_cdcf,
    "acf": _cmd_acf,
    "fit-ar": _cmd_fit_ar,
    "simulate": _cmd_simulate,
    "permtest": _cmd_permtest,
    "diagnose": _cmd_diagnose,
}


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        config = _make_config(args)
        with warnings.catch_warnings(record=True) as record:
            warnings.simplefilter("always")
            out = _COMMANDS[args.command](args, config)
        if out is not None:
            result, tsv_text, figure_builder = out
            result["warnings"] = [str(item.message) for item in record]
            for item in record:
                print(f"dcorr: warning: {item.message}", file=sys.stderr)
            _emit(config, result, tsv_text, figure_builder)
    except DcorrError as exc:
        print(f"dcorr: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
