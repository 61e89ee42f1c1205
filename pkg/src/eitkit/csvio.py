"""Versioned CSV schemas for scans, linewidth series, slopes and fit reports.

Every file starts with a ``# eitkit <schema> csv v<N>`` comment line; readers
reject unknown schemas or versions instead of guessing.  All frequencies are
ordinary Hz on disk and angular rad/s in memory.
"""

import csv
import math

import numpy as np

from .constants import TWO_PI
from .errors import DataError
from .fitting import FitResult, LinewidthSeries
from .lineshape import ResonanceScan

SCAN_SCHEMA = "# eitkit scan csv v1"
SERIES_SCHEMA = "# eitkit series csv v1"
SLOPES_SCHEMA = "# eitkit slopes csv v1"
FIT_SCHEMA = "# eitkit fit csv v1"

_SCAN_COLUMNS = ["delta2_hz", "absorption_per_m", "transmission"]
_SERIES_COLUMNS = ["power_w", "omega_c_hz", "fwhm_hz"]
_SLOPES_COLUMNS = ["temperature_k", "slope_hz_per_w"]
_FIT_COLUMNS = ["parameter", "value", "sigma"]


def _fmt(x):
    return f"{x:.12e}"


def _open_reader(path, expected_schema, expected_columns):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    with fh:
        first = fh.readline().rstrip("\n")
        if first != expected_schema:
            raise DataError(
                f"{path}: expected schema line {expected_schema!r}, got {first!r}"
            )
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: missing column header") from None
        if header != expected_columns:
            raise DataError(f"{path}: unexpected columns {header}")
        rows = []
        for lineno, row in enumerate(reader, start=3):
            if not row:
                continue
            if len(row) != len(expected_columns):
                raise DataError(f"{path}:{lineno}: wrong field count")
            rows.append(row)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def write_scan(path, scan: ResonanceScan, cell_length: float):
    """Write a resonance scan with both absorption and transmission columns."""
    if cell_length <= 0:
        raise ValueError("cell_length must be positive")
    if scan.kind == "absorption":
        absorption = scan.values
        transmission = np.exp(-scan.values * cell_length)
    else:
        transmission = scan.values
        with np.errstate(divide="ignore"):
            absorption = -np.log(np.maximum(transmission, 1e-300)) / cell_length
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(SCAN_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(_SCAN_COLUMNS)
        for d2, a, t in zip(scan.delta2, absorption, transmission):
            writer.writerow([_fmt(d2 / TWO_PI), _fmt(a), _fmt(t)])


def read_scan(path) -> ResonanceScan:
    rows = _open_reader(path, SCAN_SCHEMA, _SCAN_COLUMNS)
    try:
        data = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric value ({exc})") from None
    scan = ResonanceScan(
        delta2=TWO_PI * data[:, 0], values=data[:, 1], kind="absorption"
    )
    return scan


def write_series(path, powers, omega_c, fwhm):
    """Write a linewidth series: power, pump Rabi frequency, FWHM."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(SERIES_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(_SERIES_COLUMNS)
        for p, oc, f in zip(powers, omega_c, fwhm):
            writer.writerow([_fmt(p), _fmt(oc / TWO_PI), _fmt(f / TWO_PI)])


def read_series(path, temperature=None, configuration="zeeman") -> LinewidthSeries:
    rows = _open_reader(path, SERIES_SCHEMA, _SERIES_COLUMNS)
    try:
        data = np.array([[float(x) for x in row] for row in rows])
    except ValueError as exc:
        raise DataError(f"{path}: non-numeric value ({exc})") from None
    try:
        return LinewidthSeries(
            powers=data[:, 0],
            fwhm=TWO_PI * data[:, 2],
            temperature=temperature,
            configuration=configuration,
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_slopes(path, temperatures, slopes):
    """Write (temperature, slope) pairs; slope converted to Hz per W."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(SLOPES_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(_SLOPES_COLUMNS)
        for t, s in zip(temperatures, slopes):
            writer.writerow([_fmt(t), _fmt(s / TWO_PI)])


#: Fit parameters that are angular frequencies internally and Hz on disk.
_ANGULAR_PARAMS = {"center", "fwhm", "intercept", "gamma_bc", "gamma_pe"}


def write_fit(path, result: FitResult, extra=()):
    """Write a fit report; angular-frequency parameters converted to Hz."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(FIT_SCHEMA + "\n")
        writer = csv.writer(fh)
        writer.writerow(_FIT_COLUMNS)
        for name, value, sigma in zip(result.names, result.values, result.sigmas):
            scale = 1.0 / TWO_PI if name in _ANGULAR_PARAMS else 1.0
            unit = "_hz" if name in _ANGULAR_PARAMS else ""
            writer.writerow([name + unit, _fmt(value * scale), _fmt(sigma * scale)])
        writer.writerow(["rss", _fmt(result.rss), _fmt(0.0)])
        writer.writerow(["dof", _fmt(result.dof), _fmt(0.0)])
        for name, value in extra:
            writer.writerow([name, _fmt(value), _fmt(0.0)])
