"""Asymptotic fits on energy traces.

The energy along a path is affine plus bounded terms; the fitted tail slope
is the numerical shadow of the exact rational invariant and the comparison
is the headline experiment.  Fits use the last half of the samples with a
last-third sensitivity re-run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import WindowTooShort
from .bergman_path import CALIBRATION_SIGN
from .runner import FunctionalTrace


@dataclass(frozen=True)
class SlopeFitReport:
    fitted_slope: float
    mna_exact: Fraction
    relative_error: float
    tail_window: tuple[float, float]
    residual: float
    slope_last_third: float
    window_stable: bool
    calibration_sign: int = CALIBRATION_SIGN

    def to_json(self) -> dict:
        return {
            "fitted_slope": self.fitted_slope,
            "mna": str(self.mna_exact),
            "relative_error": self.relative_error,
            "window": list(self.tail_window),
            "residual": self.residual,
            "slope_last_third": self.slope_last_third,
            "window_stable": self.window_stable,
            "calibration_sign": self.calibration_sign,
        }


def _tail(t: np.ndarray, fraction: float) -> np.ndarray:
    start = int(np.floor(t.size * (1.0 - fraction)))
    idx = np.arange(start, t.size)
    if idx.size < 2 or t[idx[-1]] - t[idx[0]] <= 0:
        raise WindowTooShort(
            f"tail window needs at least two samples spanning positive time, got {idx.size}"
        )
    return idx


def _affine_fit(t: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    coeffs = np.polyfit(t, y, 1)
    resid = y - np.polyval(coeffs, t)
    return float(coeffs[0]), float(np.abs(resid).max())


def fit_slope(
    trace: FunctionalTrace,
    mna_value: Fraction,
    stability_tol: float | None = None,
) -> SlopeFitReport:
    """Least-squares affine slope of the energy tail against the exact value."""
    t = trace.t_values
    y = trace.mdon_values
    idx = _tail(t, 0.5)
    slope, residual = _affine_fit(t[idx], y[idx])
    idx3 = _tail(t, 1.0 / 3.0)
    slope3, _ = _affine_fit(t[idx3], y[idx3])

    mna_f = float(mna_value)
    rel = abs(slope - mna_f) / max(abs(mna_f), 1.0)
    tol = stability_tol if stability_tol is not None else 0.05 * max(abs(mna_f), 1.0)
    return SlopeFitReport(
        fitted_slope=slope,
        mna_exact=Fraction(mna_value),
        relative_error=rel,
        tail_window=(float(t[idx[0]]), float(t[idx[-1]])),
        residual=residual,
        slope_last_third=slope3,
        window_stable=abs(slope - slope3) <= tol,
    )


def sandwich_constants(trace: FunctionalTrace, mna_value) -> tuple[float, float]:
    """Smallest (C, C') with mna*t - C <= mdon(t) <= mna*t + C' on the run."""
    line = float(mna_value) * trace.t_values
    lower = float(np.max(line - trace.mdon_values))
    upper = float(np.max(trace.mdon_values - line))
    return max(lower, 0.0), max(upper, 0.0)


def distance_divergence_check(
    trace: FunctionalTrace, floor: float = 1e-12
) -> tuple[bool, float]:
    """(diverging, growth exponent) from log dist vs log t over the tail."""
    t = trace.t_values
    d = trace.dist_values
    pos = t > 0
    if pos.sum() < 2:
        raise WindowTooShort("divergence check needs at least two positive times")
    tp, dp = t[pos], d[pos]
    if dp.max() < floor:
        return False, 0.0
    idx = _tail(tp, 0.5)
    increasing = bool(np.all(np.diff(dp[idx]) > -floor) and dp[idx][-1] > dp[idx][0])
    usable = dp[idx] > floor
    if usable.sum() < 2:
        return False, 0.0
    exponent = float(
        np.polyfit(np.log(tp[idx][usable]), np.log(dp[idx][usable]), 1)[0]
    )
    return increasing and exponent > 0, exponent
