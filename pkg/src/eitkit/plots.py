"""Optional figure rendering for CLI reports.

Figures are rendered headlessly to files next to the CSV output; nothing in
the library depends on them.  Axis units mirror the CSV columns (Hz, W, K).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .constants import TWO_PI


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_scan(path, scan, fit_params=None):
    """Absorption dip vs two-photon detuning, with optional fitted curve."""
    fig, ax = plt.subplots(figsize=(6, 4))
    x = scan.delta2 / TWO_PI / 1e3
    ax.plot(x, scan.values, ".", ms=3, label="samples")
    if fit_params is not None:
        from .fitting import lorentzian_model

        center, fwhm, depth, baseline = fit_params
        dense = np.linspace(scan.delta2[0], scan.delta2[-1], 1000)
        ax.plot(dense / TWO_PI / 1e3,
                lorentzian_model(dense, center, fwhm, depth, baseline),
                "-", lw=1, label="lorentzian fit")
        ax.legend()
    ax.set_xlabel(r"two-photon detuning $\delta_2/2\pi$ (kHz)")
    ylabel = ("absorption (1/m)" if scan.kind == "absorption"
              else "transmission")
    ax.set_ylabel(ylabel)
    _save(fig, path)


def plot_series(path, powers, fwhm, fit=None):
    """Transparency-window FWHM vs pump power, with optional linear fit."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(np.asarray(powers) * 1e3, np.asarray(fwhm) / TWO_PI / 1e3, "o",
            ms=4, label="series")
    if fit is not None:
        slope, intercept = fit
        dense = np.linspace(0.0, max(powers), 200)
        ax.plot(dense * 1e3, (slope * dense + intercept) / TWO_PI / 1e3,
                "-", lw=1, label="linear fit")
        ax.legend()
    ax.set_xlim(left=0)
    ax.set_xlabel("pump power (mW)")
    ax.set_ylabel("FWHM (kHz)")
    _save(fig, path)


def plot_slopes(path, temperatures, slopes):
    """Fitted FWHM-vs-power slope as a function of cell temperature."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(temperatures, np.asarray(slopes) / TWO_PI, "s-", ms=4)
    ax.set_xlabel("temperature (K)")
    ax.set_ylabel("slope (Hz/W)")
    _save(fig, path)
