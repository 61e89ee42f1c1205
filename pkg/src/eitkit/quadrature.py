"""Adaptive Gauss-Kronrod quadrature for complex, vector-evaluated integrands.

The integrands in this package (velocity-averaged atomic responses) have a
feature of width ~Gamma buried in a domain of width ~16*W_d, i.e. three to
four orders of magnitude narrower than the integration range.  Black-box
samplers silently miss it, so the caller must seed the subdivision with
breakpoints at the known feature locations.  Integrands take an ndarray of
abscissae and return an ndarray of (complex) values, which lets the atomic
steady-state solver batch its linear solves.
"""

from dataclasses import dataclass
import heapq

import numpy as np

from .errors import QuadratureFailure

# 15-point Kronrod nodes/weights on [-1, 1] and the embedded 7-point Gauss rule.
_XK = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_WK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_GAUSS_IDX = np.arange(1, 15, 2)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and caps for adaptive integration."""

    rel_tol: float = 1e-9
    abs_tol: float = 0.0
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.rel_tol <= 0 and self.abs_tol <= 0:
            raise ValueError("at least one of rel_tol/abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


def _panel(f, a, b):
    """Integrate one panel; returns (kronrod value, error estimate)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = f(mid + half * _XK)
    k = half * np.sum(_WK * y)
    g = half * np.sum(_WG * y[_GAUSS_IDX])
    return k, abs(k - g)


def integrate_adaptive(f, a, b, config=QuadratureConfig(), breakpoints=()):
    """Adaptively integrate ``f`` over [a, b].

    ``f`` maps an ndarray of points to an ndarray of values (real or
    complex).  ``breakpoints`` seed the initial subdivision; points outside
    (a, b) are dropped.  Raises :class:`QuadratureFailure` if the error
    estimate still exceeds tolerance after ``max_subdivisions`` splits.
    """
    if not b > a:
        raise ValueError("integration interval must have b > a")
    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})

    heap = []  # (-error, sequence, lo, hi, value)
    seq = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _panel(f, lo, hi)
        heap.append((-err, seq, lo, hi, val))
        seq += 1
    heapq.heapify(heap)

    for _ in range(config.max_subdivisions):
        total = sum(item[4] for item in heap)
        total_err = -sum(item[0] for item in heap)
        tol = max(config.abs_tol, config.rel_tol * abs(total))
        if total_err <= tol:
            return total, total_err
        _, _, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        for sub_lo, sub_hi in ((lo, mid), (mid, hi)):
            val, err = _panel(f, sub_lo, sub_hi)
            heapq.heappush(heap, (-err, seq, sub_lo, sub_hi, val))
            seq += 1

    total = sum(item[4] for item in heap)
    total_err = -sum(item[0] for item in heap)
    tol = max(config.abs_tol, config.rel_tol * abs(total))
    if total_err <= tol:
        return total, total_err
    raise QuadratureFailure(
        f"error estimate {total_err:.3e} above tolerance {tol:.3e} "
        f"after {config.max_subdivisions} subdivisions"
    )
