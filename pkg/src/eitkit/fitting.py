"""Parameter extraction from resonance scans and linewidth series.

A small damped Gauss-Newton engine (Levenberg-style damping, numeric
Jacobians) drives the nonlinear fits; the linear FWHM-vs-power fit uses
closed-form weighted normal equations.  Model discrimination compares the
linear (dephasing) law against a population-exchange forward curve by
residual sum of squares.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateData, NoConvergence, RankDeficient
from .lineshape import MIN_SCAN_SAMPLES, ResonanceScan

_MAX_ITER = 200
_STEP_TOL = 1e-10
_JAC_REL_STEP = 1e-6


@dataclass(frozen=True)
class LinewidthSeries:
    """(pump power, FWHM) samples from one measurement configuration."""

    powers: np.ndarray          # W, strictly increasing
    fwhm: np.ndarray            # rad/s
    fwhm_sigma: np.ndarray | None = None   # rad/s, optional 1-sigma weights
    temperature: float | None = None       # K
    configuration: str = "zeeman"          # zeeman | hyperfine
    cell: str = ""

    def __post_init__(self):
        p = np.asarray(self.powers, dtype=float)
        f = np.asarray(self.fwhm, dtype=float)
        object.__setattr__(self, "powers", p)
        object.__setattr__(self, "fwhm", f)
        if p.ndim != 1 or p.shape != f.shape:
            raise ValueError("powers and fwhm must be 1-d arrays of equal length")
        if p.size >= 2 and not np.all(np.diff(p) > 0):
            raise ValueError("powers must be strictly increasing")
        if np.any(p <= 0):
            raise ValueError("powers must be positive")
        if self.fwhm_sigma is not None:
            s = np.asarray(self.fwhm_sigma, dtype=float)
            object.__setattr__(self, "fwhm_sigma", s)
            if s.shape != f.shape or np.any(s <= 0):
                raise ValueError("fwhm_sigma must be positive and match fwhm")
        if self.configuration not in ("zeeman", "hyperfine"):
            raise ValueError(f"unknown configuration {self.configuration!r}")


@dataclass(frozen=True)
class FitResult:
    """Converged fit parameters with 1-sigma uncertainties."""

    names: tuple
    values: np.ndarray
    sigmas: np.ndarray
    rss: float
    dof: int
    converged: bool
    n_iter: int
    derived: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        object.__setattr__(self, "sigmas", np.asarray(self.sigmas, dtype=float))
        if not self.converged:
            raise ValueError("FitResult may only be built from a converged fit")
        if np.any(self.sigmas < 0):
            raise ValueError("uncertainties must be non-negative")

    def value(self, name):
        return float(self.values[self.names.index(name)])

    def sigma(self, name):
        return float(self.sigmas[self.names.index(name)])


def _numeric_jacobian(residual, x, r0, x_scale):
    jac = np.empty((r0.size, x.size))
    for j in range(x.size):
        # The step floor uses a per-parameter characteristic scale so that
        # parameters passing through zero (e.g. a line center) keep a
        # usable finite-difference step.
        h = _JAC_REL_STEP * max(abs(x[j]), x_scale[j])
        xp = x.copy(); xp[j] += h
        xm = x.copy(); xm[j] -= h
        jac[:, j] = (residual(xp) - residual(xm)) / (2.0 * h)
    return jac


def _covariance_sigmas(jac, rss, dof):
    """1-sigma uncertainties from the local covariance, chi2-scaled."""
    jtj = jac.T @ jac
    try:
        cov = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        return np.full(jac.shape[1], np.nan)
    if dof > 0:
        cov = cov * (rss / dof)
    return np.sqrt(np.clip(np.diag(cov), 0.0, None))


def least_squares_lm(residual, x0, x_scale=None, max_iter=_MAX_ITER,
                     step_tol=_STEP_TOL):
    """Minimize sum(residual(x)^2) by damped Gauss-Newton.

    Levenberg-style damping adapted by factors of 10; central-difference
    Jacobians with per-parameter characteristic scales ``x_scale``.
    Returns (x, rss, jacobian, n_iter).  Raises NoConvergence at the
    iteration cap.
    """
    x = np.asarray(x0, dtype=float).copy()
    if x_scale is None:
        x_scale = np.maximum(np.abs(x), 1e-8 * max(np.abs(x).max(), 1.0))
    else:
        x_scale = np.asarray(x_scale, dtype=float)
    r = residual(x)
    rss = float(r @ r)
    lam = 1e-3
    for it in range(1, max_iter + 1):
        jac = _numeric_jacobian(residual, x, r, x_scale)
        jtj = jac.T @ jac
        jtr = jac.T @ r
        scale = np.diag(np.maximum(np.diag(jtj), 1e-300))
        step = None
        for _ in range(50):
            try:
                step = np.linalg.solve(jtj + lam * scale, -jtr)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            x_new = x + step
            r_new = residual(x_new)
            rss_new = float(r_new @ r_new)
            if np.isfinite(rss_new) and rss_new <= rss:
                lam = max(lam / 10.0, 1e-12)
                break
            lam *= 10.0
        else:
            raise NoConvergence("damping adaptation failed to find a descent step")
        rel_step = np.max(np.abs(step) / np.maximum(np.abs(x_new), x_scale))
        x, r, rss = x_new, r_new, rss_new
        if rel_step < step_tol:
            return x, rss, _numeric_jacobian(residual, x, r, x_scale), it
    raise NoConvergence(f"no convergence after {max_iter} iterations")


def lorentzian_model(delta2, center, fwhm, depth, baseline):
    """baseline - depth/(1 + (2*(delta2-center)/fwhm)^2), vectorized."""
    x = 2.0 * (np.asarray(delta2, dtype=float) - center) / fwhm
    return baseline - depth / (1.0 + x**2)


def _lorentzian_init(d, v):
    """Self-initialization from the extremum, half-max width and wings."""
    i_ext = int(np.argmin(v))
    baseline = 0.5 * (v[0] + v[-1])
    depth = baseline - v[i_ext]
    center = d[i_ext]
    level = v[i_ext] + 0.5 * depth
    below = v < level
    edges = np.flatnonzero(below[:-1] != below[1:])
    if edges.size >= 2:
        i0, i1 = edges[0], edges[-1]
        left = np.interp(level, [v[i0 + 1], v[i0]], [d[i0 + 1], d[i0]])
        right = np.interp(level, [v[i1], v[i1 + 1]], [d[i1], d[i1 + 1]])
        fwhm = right - left
    else:
        fwhm = 0.25 * (d[-1] - d[0])
    return np.array([center, abs(fwhm), depth, baseline])


def fit_lorentzian(scan: ResonanceScan, init=None) -> FitResult:
    """Fit a four-parameter Lorentzian dip/peak to a resonance scan.

    Parameters are (center, fwhm, depth, baseline); absorption scans are
    fitted directly, transmission scans with the sign flipped so the
    feature is always a dip.  Raises DegenerateData for flat scans.
    """
    scan.require_samples(MIN_SCAN_SAMPLES)
    d = scan.delta2
    sign = 1.0 if scan.kind == "absorption" else -1.0
    v = sign * scan.values

    span = float(v.max() - v.min())
    if span <= 1e-12 * max(abs(v).max(), 1e-300):
        raise DegenerateData("scan has no contrast to fit")

    x0 = np.asarray(init, dtype=float) if init is not None else _lorentzian_init(d, v)

    def residual(p):
        return lorentzian_model(d, *p) - v

    scale = np.array([max(abs(x0[0]), abs(x0[1])), abs(x0[1]),
                      abs(x0[2]), max(abs(x0[3]), abs(x0[2]))])
    x, rss, jac, n_iter = least_squares_lm(residual, x0, x_scale=scale)
    dof = d.size - 4
    sigmas = _covariance_sigmas(jac, rss, dof)
    # Report a positive width; the model is even in fwhm.
    x[1] = abs(x[1])
    if scan.kind == "transmission":
        x[2], x[3] = -x[2], -x[3]
    return FitResult(
        names=("center", "fwhm", "depth", "baseline"),
        values=x, sigmas=sigmas, rss=rss, dof=dof,
        converged=True, n_iter=n_iter,
    )


def fit_linear(series: LinewidthSeries) -> FitResult:
    """Weighted least-squares line through (power, FWHM).

    Closed-form normal equations; weights 1/sigma^2 when the series carries
    uncertainties.  The intercept is reported alongside the implied
    dephasing rate gamma_bc = intercept/2.
    """
    p, f = series.powers, series.fwhm
    if p.size < 3:
        raise ValueError("linear fit needs at least 3 samples")
    if np.ptp(p) == 0.0:
        raise RankDeficient("all powers identical; slope is unconstrained")
    w = np.ones_like(p) if series.fwhm_sigma is None else series.fwhm_sigma**-2

    sw = w.sum()
    sx = (w * p).sum()
    sy = (w * f).sum()
    sxx = (w * p * p).sum()
    sxy = (w * p * f).sum()
    det = sw * sxx - sx * sx
    if det <= 0:
        raise RankDeficient("degenerate normal equations")
    slope = (sw * sxy - sx * sy) / det
    intercept = (sxx * sy - sx * sxy) / det

    resid = slope * p + intercept - f
    rss = float((w * resid**2).sum())
    dof = p.size - 2
    chi2 = rss / dof if dof > 0 else 1.0
    var_slope = chi2 * sw / det
    var_intercept = chi2 * sxx / det
    gamma_bc = 0.5 * intercept
    return FitResult(
        names=("slope", "intercept", "gamma_bc"),
        values=np.array([slope, intercept, gamma_bc]),
        sigmas=np.sqrt(np.array([var_slope, var_intercept, 0.25 * var_intercept])),
        rss=rss, dof=dof, converged=True, n_iter=0,
    )


def fit_popexchange(series: LinewidthSeries, forward, init) -> FitResult:
    """Least-squares fit of a population-exchange FWHM curve to a series.

    ``forward(powers, *params) -> fwhm (rad/s)`` is the model curve; with
    one initial parameter the fit is over gamma_pe alone, with two it also
    floats the power-to-Rabi-squared conversion scale.  The forward curve
    is typically expensive (numeric scans), so callers should memoize it.
    """
    if series.powers.size < 5:
        raise ValueError("exchange-model fit needs at least 5 samples")
    x0 = np.atleast_1d(np.asarray(init, dtype=float))
    if x0.size not in (1, 2):
        raise ValueError("init must supply 1 (gamma_pe) or 2 (+scale) parameters")
    names = ("gamma_pe",) if x0.size == 1 else ("gamma_pe", "power_to_rabi_scale")
    w = (np.ones_like(series.powers) if series.fwhm_sigma is None
         else series.fwhm_sigma**-1)

    def residual(p):
        return w * (forward(series.powers, *p) - series.fwhm)

    x, rss, jac, n_iter = least_squares_lm(residual, x0)
    dof = series.powers.size - x0.size
    sigmas = _covariance_sigmas(jac, rss, dof)
    return FitResult(
        names=names, values=x, sigmas=sigmas, rss=rss, dof=dof,
        converged=True, n_iter=n_iter,
    )


#: Minimum fractional residual improvement for one model to be selected.
_SELECTION_MARGIN = 0.01


@dataclass(frozen=True)
class ModelComparison:
    """Decoherence-model discrimination report."""

    selected: str                 # 'linear' | 'exchange' | 'tie'
    rss_linear: float
    rss_exchange: float
    gamma_bc: float               # rad/s, from the linear intercept
    gamma_pe: float               # rad/s, from the exchange fit
    intercept_linear: float       # rad/s
    intercept_ratio: float        # 2*W_d/Gamma, intercept amplification
    gamma_pe_upper_bound: float   # rad/s, from the measured intercept

    def to_text(self):
        lines = [
            "decoherence model comparison",
            f"  rss linear   : {self.rss_linear:.6e}",
            f"  rss exchange : {self.rss_exchange:.6e}",
            f"  selected     : {self.selected}",
            f"  gamma_bc/2pi : {self.gamma_bc / (2 * math.pi):.4f} Hz (linear intercept / 2)",
            f"  gamma_pe/2pi : {self.gamma_pe / (2 * math.pi):.4f} Hz (exchange fit)",
            f"  intercept/2pi: {self.intercept_linear / (2 * math.pi):.4f} Hz",
            f"  2*W_d/Gamma  : {self.intercept_ratio:.1f} "
            "(exchange-model intercept amplification)",
            f"  gamma_pe bound/2pi: {self.gamma_pe_upper_bound / (2 * math.pi):.4f} Hz "
            "(intercept * Gamma / (4*W_d))",
        ]
        return "\n".join(lines) + "\n"


def compare_models(
    series: LinewidthSeries,
    linear_fit: FitResult,
    exchange_fit: FitResult,
    w_d: float,
    gamma_total: float,
) -> ModelComparison:
    """Select between the dephasing (linear) and exchange models.

    A model is selected only when its residual sum of squares improves on
    the other's by at least 1%; otherwise the report declares a tie.  The
    intercept-ratio diagnostic 2*W_d/Gamma states how much larger the
    exchange model's zero-power intercept would be for equal rates, and the
    measured intercept bounds gamma_pe from above by intercept*Gamma/(4*W_d).
    """
    rl, re = linear_fit.rss, exchange_fit.rss
    if re < rl * (1.0 - _SELECTION_MARGIN):
        selected = "exchange"
    elif rl < re * (1.0 - _SELECTION_MARGIN):
        selected = "linear"
    else:
        selected = "tie"
    intercept = linear_fit.value("intercept")
    return ModelComparison(
        selected=selected,
        rss_linear=rl,
        rss_exchange=re,
        gamma_bc=linear_fit.value("gamma_bc"),
        gamma_pe=exchange_fit.value("gamma_pe"),
        intercept_linear=intercept,
        intercept_ratio=2.0 * w_d / gamma_total,
        gamma_pe_upper_bound=intercept * gamma_total / (4.0 * w_d),
    )
