"""Gram-section frame bounds and the basis verdict logic.

Riesz basisness is an infinite-dimensional property; its finite proxy here is
the condition-number trajectory of nested Gram sections of the normal system,
combined with the coefficient-equivalence criterion on u/v and on the
opposite-frequency potential coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import Thresholds
from .errors import GramSizeError, InputError
from .galerkin import NormalSystem, PairClass, bc_theta
from .potential import PotentialModel, RhoTable
from .sequences import (
    DecayLimitReport,
    EquivalenceVerdict,
    check_decay_condition,
    check_equivalence,
    fitted_loglog_slope,
)


def gram_matrix(system: NormalSystem, N: int, m_start: int | None = None) -> np.ndarray:
    """Pairwise inner products of the first N root-function vectors at or above
    m_start (low, anomalous indices excluded upstream)."""
    vecs = system.vectors(m_start)
    if N > len(vecs):
        raise GramSizeError(f"requested N={N} but only {len(vecs)} root functions available")
    V = np.column_stack(vecs[:N])
    G = V.conj().T @ V
    return 0.5 * (G + G.conj().T)


def frame_bounds(G: np.ndarray, herm_tol: float = 1e-12):
    """Extreme singular values of a Gram section and their ratio."""
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise InputError("Gram matrix must be square")
    asym = np.max(np.abs(G - G.conj().T)) / max(1.0, np.max(np.abs(G)))
    if asym > herm_tol:
        raise InputError(f"Gram matrix not conjugate-symmetric: deviation {asym:.3e}")
    s = np.linalg.svd(0.5 * (G + G.conj().T), compute_uv=False)
    s_min, s_max = float(s[-1]), float(s[0])
    cond = s_max / s_min if s_min > 0 else float("inf")
    return s_min, s_max, cond


@dataclass(frozen=True)
class GramDiagnostics:
    N_list: tuple
    s_min: tuple
    s_max: tuple
    cond: tuple
    growth_slope: float


def gram_diagnostics(system: NormalSystem, N_list, m_start: int | None = None) -> GramDiagnostics:
    s_mins, s_maxs, conds = [], [], []
    for N in N_list:
        lo, hi, cond = frame_bounds(gram_matrix(system, int(N), m_start))
        s_mins.append(lo)
        s_maxs.append(hi)
        conds.append(cond)
    slope = fitted_loglog_slope(np.asarray(N_list, dtype=float), conds)
    return GramDiagnostics(tuple(int(n) for n in N_list), tuple(s_mins), tuple(s_maxs),
                           tuple(conds), slope)


@dataclass(frozen=True)
class UVCheck:
    """Equivalence check of the resonant eigenfunction coefficients u and v
    over the simple pairs of the window, per branch and combined (the combined
    verdict holds when either branch does)."""

    per_j: tuple
    holds: bool
    indeterminate: bool
    jordan_count: int
    n_simple: int
    min_uv_slope: float      # slope of min(|u|, |v|); decreasing => one side dies


def uv_equivalence_check(pairs, m_start: int | None = None,
                         thresholds: Thresholds | None = None) -> UVCheck:
    thr = thresholds or Thresholds()
    window = [p for p in pairs if m_start is None or p.m >= m_start]
    simple = [p for p in window if p.kind is PairClass.SIMPLE]
    jordan = sum(1 for p in window if p.kind is PairClass.JORDAN)
    if len(simple) < thr.min_simple_pairs:
        return UVCheck(per_j=(), holds=False, indeterminate=True,
                       jordan_count=jordan, n_simple=len(simple), min_uv_slope=float("nan"))
    ms = np.array([p.m for p in simple], dtype=float)
    per_j = tuple(
        check_equivalence([p.u[j] for p in simple], [p.v[j] for p in simple], ms, thr)
        for j in (0, 1)
    )
    holds = any(v.holds for v in per_j)
    indeterminate = (not holds) and any(v.indeterminate for v in per_j)
    min_uv = [min(min(abs(p.u[j]), abs(p.v[j])) for j in (0, 1)) for p in simple]
    return UVCheck(per_j=per_j, holds=holds, indeterminate=indeterminate,
                   jordan_count=jordan, n_simple=len(simple),
                   min_uv_slope=fitted_loglog_slope(ms, min_uv))


@dataclass(frozen=True)
class SimplicityReport:
    m_asym: int
    n_simple: int
    n_double: int
    n_jordan: int
    n_indeterminate: int
    fraction_simple: float


def simplicity_report(pairs, m_asym: int) -> SimplicityReport:
    """Multiplicity-class census above the asymptotic start index."""
    above = [p for p in pairs if p.m >= m_asym]
    counts = {kind: sum(1 for p in above if p.kind is kind) for kind in PairClass}
    total = len(above)
    return SimplicityReport(
        m_asym=m_asym,
        n_simple=counts[PairClass.SIMPLE],
        n_double=counts[PairClass.DOUBLE],
        n_jordan=counts[PairClass.JORDAN],
        n_indeterminate=counts[PairClass.INDETERMINATE],
        fraction_simple=counts[PairClass.SIMPLE] / total if total else float("nan"),
    )


@dataclass(frozen=True)
class BasisVerdict:
    """Combined verdict: hypothesis gate (decay limits), coefficient
    equivalence, u/v equivalence, and Gram growth."""

    bc: str
    applicable: bool
    status: str                        # "ok" | "not-applicable"
    decay_conditions: dict             # side -> DecayLimitReport
    coeff_equiv: EquivalenceVerdict
    uv_equiv: UVCheck
    jordan_count: int
    gram: GramDiagnostics
    verdict: str                       # "basis-consistent" | "not-basis" | "indeterminate"
    notes: tuple = field(default_factory=tuple)


def basis_verdict(q: PotentialModel, bc: str, pairs, table: RhoTable,
                  gram: GramDiagnostics, window, thresholds: Thresholds | None = None,
                  m_start: int | None = None) -> BasisVerdict:
    """Render the equivalence verdict for one (potential, bc) run.

    The hypothesis gate requires at least one decay limit
    rho(m)/(m q_{+-(2m+theta)}) -> 0 to hold; then basis-consistent demands
    agreement of coefficient equivalence, u/v equivalence, and bounded Gram
    growth, not-basis their joint failure, anything else indeterminate.
    """
    thr = thresholds or Thresholds()
    theta = bc_theta(bc)
    notes = []
    decay = {side: check_decay_condition(q, table, window, side, thr)
             for side in ("plus", "minus")}
    applicable = any(r.status == "ok" and r.tends_to_zero for r in decay.values())

    ms = np.arange(int(window[0]), int(window[1]) + 1)
    a = q.coefficient_array(2 * ms + theta)
    b = q.coefficient_array(-(2 * ms + theta))
    coeff_equiv = check_equivalence(a, b, ms, thr)
    uv = uv_equivalence_check(pairs, m_start, thr)

    gram_bounded = np.isfinite(gram.growth_slope) and gram.growth_slope <= thr.gram_slope_consistent
    gram_growing = np.isfinite(gram.growth_slope) and gram.growth_slope >= thr.gram_slope_fail

    if not applicable:
        notes.append("hypothesis gate failed: no decay limit condition holds")
        return BasisVerdict(bc=bc, applicable=False, status="not-applicable",
                            decay_conditions=decay, coeff_equiv=coeff_equiv, uv_equiv=uv,
                            jordan_count=uv.jordan_count, gram=gram,
                            verdict="indeterminate", notes=tuple(notes))

    if uv.indeterminate:
        notes.append("u/v criterion indeterminate (too few simple pairs or drift near threshold)")
        verdict = "indeterminate"
    elif coeff_equiv.holds and uv.holds and gram_bounded:
        verdict = "basis-consistent"
    elif (not coeff_equiv.holds) and (not uv.holds) and gram_growing:
        verdict = "not-basis"
    else:
        verdict = "indeterminate"
        notes.append(
            "signals disagree: coeff_equiv=%s uv_equiv=%s gram_slope=%.3f"
            % (coeff_equiv.holds, uv.holds, gram.growth_slope)
        )
    return BasisVerdict(bc=bc, applicable=True, status="ok", decay_conditions=decay,
                        coeff_equiv=coeff_equiv, uv_equiv=uv, jordan_count=uv.jordan_count,
                        gram=gram, verdict=verdict, notes=tuple(notes))
