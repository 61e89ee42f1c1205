"""Command-line interface.

Subcommands: simulate-scan, sweep-power, sweep-temperature, fit-scan,
fit-series, synth.  Every run writes its outputs plus a manifest sidecar
(resolved configuration, seed, checksums) into --out; runs are deterministic
for a fixed config and seed.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical
failure.
"""

import argparse
import dataclasses
import datetime
import hashlib
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import default_config, load_config
from .constants import TWO_PI
from .csvio import (
    read_scan,
    read_series,
    write_fit,
    write_scan,
    write_series,
    write_slopes,
)
from .errors import (
    ConfigError,
    DataError,
    DegenerateData,
    EitkitError,
    RankDeficient,
)
from .fitting import (
    LinewidthSeries,
    compare_models,
    fit_linear,
    fit_lorentzian,
    fit_popexchange,
)
from .lineshape import dephasing_scan, fwhm_popexchange_asymptote
from .propagation import linewidth_vs_power, slope_vs_temperature


def _sha256(path: Path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, config, command, outputs):
    lines = [
        f"eitkit {__version__}",
        f"command: {command}",
        f"seed: {config.seed}",
        f"wall_clock_utc: {datetime.datetime.now(datetime.timezone.utc).isoformat()}",
        "",
        "[outputs]",
    ]
    for name in outputs:
        lines.append(f"{name} sha256={_sha256(out_dir / name)}")
    lines += ["", "[resolved config]", config.resolved_text]
    (out_dir / "manifest.txt").write_text("\n".join(lines), encoding="utf-8")


def _load(args):
    if args.config is None:
        return default_config()
    return load_config(args.config)


def cmd_simulate_scan(args):
    config = _load(args)
    out = Path(args.out)
    scan = dephasing_scan(
        config.system(), config.medium(), config.w_d, config.delta2_grid,
        pump_power=config.pump_power, temperature=config.temperature,
    )
    write_scan(out / "scan.csv", scan, config.cell_length)
    outputs = ["scan.csv"]
    if args.plot:
        from .plots import plot_scan

        plot_scan(out / "scan.png", scan)
        outputs.append("scan.png")
    _write_manifest(out, config, "simulate-scan", outputs)
    return 0


def cmd_sweep_power(args):
    config = _load(args)
    out = Path(args.out)
    omega_c, _, fwhm = linewidth_vs_power(
        config.cell(), config.system(), config.w_d, config.power_sweep(),
    )
    write_series(out / "series.csv", config.power_grid, omega_c, fwhm)
    outputs = ["series.csv"]
    if args.plot:
        from .plots import plot_series

        plot_series(out / "series.png", config.power_grid, fwhm)
        outputs.append("series.png")
    _write_manifest(out, config, "sweep-power", outputs)
    return 0


def cmd_sweep_temperature(args):
    config = _load(args)
    out = Path(args.out)
    temps, slopes = slope_vs_temperature(
        config.cell(), config.system(), config.w_d,
        config.temperature_grid, config.power_sweep(),
    )
    write_slopes(out / "slopes.csv", temps, slopes)
    outputs = ["slopes.csv"]
    if args.plot:
        from .plots import plot_slopes

        plot_slopes(out / "slopes.png", temps, slopes)
        outputs.append("slopes.png")
    _write_manifest(out, config, "sweep-temperature", outputs)
    return 0


def cmd_fit_scan(args):
    config = _load(args)
    out = Path(args.out)
    scan = read_scan(args.input)
    result = fit_lorentzian(scan)
    write_fit(out / "fit_scan.csv", result)
    outputs = ["fit_scan.csv"]
    if args.plot:
        from .plots import plot_scan

        plot_scan(out / "fit_scan.png", scan, fit_params=result.values)
        outputs.append("fit_scan.png")
    _write_manifest(out, config, "fit-scan", outputs)
    print(
        f"lorentzian fit: center {result.value('center') / TWO_PI:.3f} Hz, "
        f"fwhm {result.value('fwhm') / TWO_PI:.3f} Hz "
        f"(+- {result.sigma('fwhm') / TWO_PI:.3f}), "
        f"rss {result.rss:.4e}, {result.n_iter} iterations"
    )
    return 0


def _exchange_forward(config):
    """Exchange-model FWHM vs pump power under the configured power map."""

    def forward(powers, gamma_pe):
        omega_c = np.array([config.omega_c(p) for p in np.atleast_1d(powers)])
        return fwhm_popexchange_asymptote(
            gamma_pe, omega_c, config.w_d, config.gamma_total
        )

    return forward


def cmd_fit_series(args):
    config = _load(args)
    out = Path(args.out)
    series = read_series(args.input, temperature=config.temperature)
    outputs = []

    linear = exchange = None
    if args.model in ("linear", "both"):
        linear = fit_linear(series)
        write_fit(out / "fit_linear.csv", linear)
        outputs.append("fit_linear.csv")
        print(
            f"linear fit: slope {linear.value('slope') / TWO_PI:.4e} Hz/W, "
            f"intercept {linear.value('intercept') / TWO_PI:.3f} Hz, "
            f"gamma_bc {linear.value('gamma_bc') / TWO_PI:.3f} Hz"
        )
    if args.model in ("exchange", "both"):
        forward = _exchange_forward(config)
        base = 2.0 * config.omega_c(series.powers[0]) ** 2 / config.w_d
        init = max(
            (series.fwhm[0] - base) * config.gamma_total / (4.0 * config.w_d),
            TWO_PI * 1.0,
        )
        exchange = fit_popexchange(series, forward, [init])
        write_fit(out / "fit_exchange.csv", exchange)
        outputs.append("fit_exchange.csv")
        print(
            f"exchange fit: gamma_pe {exchange.value('gamma_pe') / TWO_PI:.3f} Hz, "
            f"rss {exchange.rss:.4e}"
        )
    if args.model == "both":
        report = compare_models(series, linear, exchange,
                                config.w_d, config.gamma_total)
        (out / "model_comparison.txt").write_text(report.to_text(),
                                                  encoding="utf-8")
        outputs.append("model_comparison.txt")
        ratio = report.intercept_ratio
        note = ""
        if not 90.0 <= ratio <= 360.0:
            note = " (outside the expected ~180 band for this system)"
        print(f"model selected: {report.selected}; 2*W_d/Gamma = {ratio:.1f}{note}")

    if args.plot and linear is not None:
        from .plots import plot_series

        plot_series(out / "fit_series.png", series.powers, series.fwhm,
                    fit=(linear.value("slope"), linear.value("intercept")))
        outputs.append("fit_series.png")
    _write_manifest(out, config, f"fit-series --model {args.model}", outputs)
    return 0


def cmd_synth(args):
    config = _load(args)
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    out = Path(args.out)
    rng = np.random.default_rng(config.seed)
    sigma = args.noise / 100.0

    if args.model == "scan":
        scan = dephasing_scan(
            config.system(), config.medium(), config.w_d, config.delta2_grid
        )
        noisy = scan.values + sigma * np.abs(scan.values) * rng.standard_normal(
            scan.values.size
        )
        synthetic = dataclasses.replace(scan, values=noisy)
        write_scan(out / "synth_scan.csv", synthetic, config.cell_length)
        outputs = ["synth_scan.csv"]
    elif args.model == "series":
        omega_c = np.array([config.omega_c(p) for p in config.power_grid])
        from .lineshape import fwhm_dephasing

        fwhm = fwhm_dephasing(config.gamma_bc, omega_c, config.w_d,
                              config.gamma_total)
        fwhm = fwhm + sigma * np.abs(fwhm) * rng.standard_normal(fwhm.size)
        write_series(out / "synth_series.csv", config.power_grid, omega_c, fwhm)
        outputs = ["synth_series.csv"]
    else:
        raise ConfigError(f"synth cannot generate model {args.model!r}")
    _write_manifest(out, config, f"synth --model {args.model}", outputs)
    return 0


_COMMANDS = {
    "simulate-scan": cmd_simulate_scan,
    "sweep-power": cmd_sweep_power,
    "sweep-temperature": cmd_sweep_temperature,
    "fit-scan": cmd_fit_scan,
    "fit-series": cmd_fit_series,
    "synth": cmd_synth,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="eitkit",
        description="Simulation and fitting toolkit for Doppler-broadened "
        "transparency resonances.",
    )
    parser.add_argument("--version", action="version",
                        version=f"eitkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=False):
        if needs_input:
            p.add_argument("input", help="input CSV path")
        p.add_argument("--config", default=None, help="run configuration file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--plot", action="store_true",
                       help="also render figures next to the CSV output")

    common(sub.add_parser("simulate-scan", help="analytic resonance scan"))
    common(sub.add_parser("sweep-power", help="thick-cell FWHM vs pump power"))
    common(sub.add_parser("sweep-temperature",
                          help="FWHM-vs-power slope vs cell temperature"))
    common(sub.add_parser("fit-scan", help="lorentzian fit of a scan CSV"),
           needs_input=True)
    p_series = sub.add_parser("fit-series",
                              help="linear / exchange-model fits of a series CSV")
    common(p_series, needs_input=True)
    p_series.add_argument("--model", choices=("linear", "exchange", "both"),
                          default="linear")
    p_synth = sub.add_parser("synth", help="seeded synthetic data generator")
    common(p_synth)
    p_synth.add_argument("--model", choices=("scan", "series"), default="scan")
    p_synth.add_argument("--noise", type=float, default=0.0,
                         help="relative noise sigma in percent")
    p_synth.add_argument("--seed", type=int, default=None,
                         help="override the configured seed")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DataError, DegenerateData, RankDeficient) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except EitkitError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
