"""Sequence comparability and trend checks.

Two sequences are called equivalent when the modulus of their ratio stays in a
fixed positive band for all large indices. On a finite window this becomes a
bounded-ratio test plus a drift (log-log slope) test with an explicit
indeterminate zone near the slope boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Thresholds
from .potential import PotentialModel, RhoTable


def fitted_loglog_slope(ms, values) -> float:
    """Least-squares slope of log|values| against log(ms) over positive entries.

    Returns nan when fewer than three usable points remain.
    """
    ms = np.asarray(ms, dtype=float)
    vals = np.abs(np.asarray(values, dtype=complex))
    mask = (vals > 0.0) & np.isfinite(vals) & (ms > 0.0)
    if mask.sum() < 3:
        return float("nan")
    return float(np.polyfit(np.log(ms[mask]), np.log(vals[mask]), 1)[0])


@dataclass(frozen=True)
class EquivalenceVerdict:
    window: tuple
    ratio_min: float
    ratio_max: float
    log_slope: float
    holds: bool
    indeterminate: bool


def check_equivalence(a, b, ms, thresholds: Thresholds | None = None) -> EquivalenceVerdict:
    """Finite-window equivalence verdict for the sequences a_m and b_m.

    Any zero denominator yields a failed verdict (not an exception).
    """
    thr = thresholds or Thresholds()
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    ms = np.asarray(ms, dtype=float)
    window = (int(ms[0]), int(ms[-1])) if ms.size else (0, 0)
    if a.shape != b.shape or a.shape != ms.shape:
        raise ValueError("a, b and ms must be aligned")
    if ms.size == 0 or np.any(b == 0.0):
        return EquivalenceVerdict(window, 0.0, float("inf"), float("nan"), False, False)
    ratios = np.abs(a / b)
    ratio_min = float(ratios.min())
    ratio_max = float(ratios.max())
    slope = fitted_loglog_slope(ms, ratios)
    band_ok = ratio_min > 0.0 and ratio_max / ratio_min <= thr.ratio_band_max
    holds = band_ok and np.isfinite(slope) and abs(slope) <= thr.drift_holds
    indeterminate = (
        not holds
        and band_ok
        and np.isfinite(slope)
        and thr.drift_holds < abs(slope) <= thr.drift_indeterminate
    )
    return EquivalenceVerdict(window, ratio_min, ratio_max, slope, holds, indeterminate)


@dataclass(frozen=True)
class DecayLimitReport:
    """Check of lim rho(m)/(m |q_{+-(2m+theta)}|) = 0 on a window."""

    side: str                 # "plus" (q_{+(2m+theta)}) | "minus" (q_{-(2m+theta)})
    window: tuple
    values: tuple
    log_slope: float
    tends_to_zero: bool
    status: str               # "ok" | "not-applicable"


def check_decay_condition(q: PotentialModel, table: RhoTable, window, side: str,
                          thresholds: Thresholds | None = None) -> DecayLimitReport:
    """Evaluate c_m = rho(m)/(m |q_{+-(2m+theta)}|) and flag decay to zero.

    Not applicable when any coefficient on the chosen side vanishes in the
    window.
    """
    thr = thresholds or Thresholds()
    m_lo, m_hi = int(window[0]), int(window[1])
    ms = np.arange(m_lo, m_hi + 1)
    theta = 0 if table.bc_parity == "periodic" else 1
    sign = 1 if side == "plus" else -1
    if side not in ("plus", "minus"):
        raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
    coeffs = q.coefficient_array(sign * (2 * ms + theta))
    if np.any(np.abs(coeffs) == 0.0):
        return DecayLimitReport(side, (m_lo, m_hi), (), float("nan"), False, "not-applicable")
    values = np.array([table.rho(int(m)) for m in ms]) / (ms * np.abs(coeffs))
    slope = fitted_loglog_slope(ms, values)
    tends = bool(np.isfinite(slope) and slope <= -thr.drift_holds and values[-1] < values[0])
    return DecayLimitReport(side, (m_lo, m_hi), tuple(float(v) for v in values), slope, tends, "ok")
