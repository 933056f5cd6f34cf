"""Correction sums, integral representations, residual bounds, and the
bounded-ratio trend checks behind every asymptotic estimate.

All sums run over the potential's frequency support with the exact exclusion
sets (no index with a vanishing factor, no partial sum hitting 0 or the
resonant frequency), truncated at |m_i| <= trunc. Denominators are
Lambda_{i} = lambda - ((2 i + theta) pi)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma

from .errors import NearResonanceError
from .galerkin import PairClass, SpectralPair, bc_theta, free_eigenvalue
from .potential import PotentialModel, RhoTable, partial_integral
from .sequences import fitted_loglog_slope

TWO_PI = 2.0 * math.pi

KINDS = ("a1", "a2", "b1", "b2", "a1'", "a2'", "b1'", "b2'")


def _lam_den(lam: complex, idx, theta: int):
    return lam - ((2 * np.asarray(idx) + theta) * math.pi) ** 2


def _check_floor(dens, indices, lam):
    floor = 1e-9 * (1.0 + abs(lam))
    dens = np.asarray(dens)
    bad = np.abs(dens) < floor
    if np.any(bad):
        where = tuple(np.argwhere(bad)[0])
        raise NearResonanceError(int(np.asarray(indices)[where]), complex(dens[where]))
    return dens


def correction_sum(q: PotentialModel, lam: complex, m: int, kind: str,
                   trunc: int = 2000, theta: int = 0) -> complex:
    """Truncated correction sum of the requested kind at spectral parameter lam.

    Unprimed kinds iterate denominators Lambda_{m - s}, primed ones
    Lambda_{m + s}; partial index sums are excluded from {0, n} (unprimed) or
    {0, -n} (primed) with n = 2m + theta the resonant frequency.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    nres = 2 * m + theta
    primed = kind.endswith("'")
    base = kind.rstrip("'")
    sgn = 1 if primed else -1              # denominator index m + sgn*s
    excl = -nres if primed else nres       # partial sums must avoid {0, excl}
    res2 = -nres if primed else nres       # coupling frequency in b-kind numerators

    ks, amps = q.support_amplitudes()
    keep = (np.abs(ks) <= trunc) & (ks != 0)
    ks, amps = ks[keep], amps[keep]
    if ks.size == 0:
        return 0.0 + 0.0j

    sel1 = ks != excl
    m1, a1v = ks[sel1], amps[sel1]
    den1 = _lam_den(lam, m + sgn * m1, theta)
    _check_floor(den1, m1, lam)

    if base in ("a1", "b1"):
        second = q.coefficient_array(-m1) if base == "a1" else q.coefficient_array(res2 - m1)
        return complex(np.sum(a1v * second / den1))

    # double sums: m1 constrained as above, m2 over the support, partial sum
    # m1 + m2 excluded from {0, excl}
    m2, a2v = ks, amps
    s12 = m1[:, None] + m2[None, :]
    mask = (s12 != 0) & (s12 != excl)
    den2 = _lam_den(lam, m + sgn * s12, theta)
    _check_floor(np.where(mask, den2, 1.0), s12, lam)
    if base == "a2":
        third = q.coefficient_array(-s12)
    else:  # b2
        third = q.coefficient_array(res2 - s12)
    terms = (a1v[:, None] * a2v[None, :]) * third / (den1[:, None] * den2)
    return complex(np.sum(np.where(mask, terms, 0.0)))


def _pow2_grid(n_min: int) -> int:
    n = 4096
    while n < n_min:
        n *= 2
    return n


@dataclass(frozen=True)
class AuxIntegrands:
    """Grids of the cumulative integrals used by the integral representations.

    Q(x) = int_0^x q; G(x) = int_0^x q(t) e^{-i 2 n pi t} dt - q_n x with n the
    resonant frequency; both vanish at x = 0 and x = 1 exactly for Fourier
    models.
    """

    m: int
    theta: int
    xs: np.ndarray
    Q_values: np.ndarray
    Q0: complex
    G_values: np.ndarray
    G0: complex


def aux_integrands(q: PotentialModel, m: int, grid: int = 4096, theta: int = 0) -> AuxIntegrands:
    if grid < 1024:
        raise ValueError("grid must be >= 1024")
    nres = 2 * m + theta
    xs = np.linspace(0.0, 1.0, grid + 1)
    Q = partial_integral(q, 0, xs)
    G = partial_integral(q, nres, xs) - q.coefficient(nres) * xs
    ks, amps = q.support_amplitudes()
    Q0 = complex(-np.sum(amps / (1j * TWO_PI * ks))) if ks.size else 0.0 + 0.0j
    off = ks != nres
    G0 = complex(-np.sum(amps[off] / (1j * TWO_PI * (ks[off] - nres)))) if np.any(off) else 0.0 + 0.0j
    return AuxIntegrands(m=m, theta=theta, xs=xs, Q_values=Q, Q0=Q0, G_values=G, G0=G0)


def _rect_nodes(q: PotentialModel, m: int, theta: int) -> np.ndarray:
    # rectangle rule on a power-of-two grid is exact for trig polynomials with
    # bandwidth below the grid size
    nres = 2 * m + theta
    n = _pow2_grid(4 * (q.max_frequency + 2 * nres) + 8)
    return np.arange(n) / n


def a1_integral_form(q: PotentialModel, m: int, theta: int = 0) -> complex:
    """Integral representation of the a1 correction at the free eigenvalue.

    Quadrature of (G - G0)^2 e^{i 2 (2n) pi x} with exact trig antiderivatives
    for G, oriented to match correction_sum(kind="a1").
    """
    nres = 2 * m + theta
    xs = _rect_nodes(q, m, theta)
    g = partial_integral(q, nres, xs) - q.coefficient(nres) * xs
    ks, amps = q.support_amplitudes()
    off = ks != nres
    g0 = complex(-np.sum(amps[off] / (1j * TWO_PI * (ks[off] - nres)))) if np.any(off) else 0.0
    vals = (g - g0) ** 2 * np.exp(1j * TWO_PI * (2 * nres) * xs)
    return complex(-np.mean(vals))


@dataclass(frozen=True)
class IDecomposition:
    I: complex
    I1: complex
    I2: complex
    I3: complex
    identity_residual: float
    I1_integral: complex
    I3_integral: complex


def i_decomposition(q: PotentialModel, m: int, trunc: int = 2000, theta: int = 0) -> IDecomposition:
    """The symmetric double sum behind the second-order coupling correction and
    its partial-fraction decomposition I = (I1 + 2 I2 + I3)/n^2.

    Both sides run over the same index set, so the identity residual is pure
    rounding; I1 and I3 are also evaluated through their integral forms.
    """
    nres = 2 * m + theta
    ks, amps = q.support_amplitudes()
    keep = (np.abs(ks) <= trunc) & (ks != 0) & (ks != nres)
    ks, amps = ks[keep], amps[keep]
    if ks.size == 0:
        zero = 0.0 + 0.0j
        return IDecomposition(zero, zero, zero, zero, 0.0, zero, zero)
    k1 = ks[:, None].astype(float)
    k2 = ks[None, :].astype(float)
    pair_ok = (ks[:, None] + ks[None, :]) != nres
    third = q.coefficient_array(nres - ks[:, None] - ks[None, :])
    num = (amps[:, None] * amps[None, :]) * third
    num = np.where(pair_ok, num, 0.0)
    I = complex(np.sum(num / (k1 * k2 * (nres - k1) * (nres - k2))))
    I1 = complex(np.sum(num / (k1 * k2)))
    I2 = complex(np.sum(num / ((nres - k1) * k2)))
    I3 = complex(np.sum(num / ((nres - k1) * (nres - k2))))
    residual = abs(I - (I1 + 2 * I2 + I3) / nres**2)

    xs = _rect_nodes(q, m, theta)
    qs = q.evaluate(xs) - q.mean_shift
    Q = partial_integral(q, 0, xs)
    ks_all, amps_all = q.support_amplitudes()
    Q0 = complex(-np.sum(amps_all / (1j * TWO_PI * ks_all))) if ks_all.size else 0.0
    g = partial_integral(q, nres, xs) - q.coefficient(nres) * xs
    off = ks_all != nres
    G0 = complex(-np.sum(amps_all[off] / (1j * TWO_PI * (ks_all[off] - nres)))) if np.any(off) else 0.0
    I1_int = complex(-4 * math.pi**2 * np.mean((Q - Q0) ** 2 * qs * np.exp(-1j * TWO_PI * nres * xs)))
    I3_int = complex(-4 * math.pi**2 * np.mean((g - G0) ** 2 * qs * np.exp(1j * TWO_PI * nres * xs)))
    return IDecomposition(I, I1, I2, I3, residual, I1_int, I3_int)


def residual_estimate(q: PotentialModel, pair: SpectralPair, order: int,
                      side: str = "unprimed", trunc: int = 2000, j: int = 0) -> float:
    """Modulus of the iteration residual R_order for one eigenpair.

    The inner products (q Psi, e_k) are the finite convolution of the
    potential's coefficients with the eigenvector coefficients.
    """
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if side not in ("unprimed", "primed"):
        raise ValueError("side must be 'unprimed' or 'primed'")
    theta = bc_theta(pair.bc)
    m = pair.m
    nres = 2 * m + theta
    lam = complex(pair.lam[j])
    vec = np.asarray(pair.vectors[j])
    K = (vec.size - 1) // 2
    F = q.max_frequency
    conv = np.convolve(q.coeffs, vec)          # w_n at conv[n + F + K]
    w_off = F + K

    def w_at(idx):
        idx = np.asarray(idx)
        out = np.zeros(idx.shape, dtype=complex)
        ok = np.abs(idx) <= w_off
        out[ok] = conv[idx[ok] + w_off]
        return out

    sgn = 1 if side == "primed" else -1
    excl = -nres if side == "primed" else nres
    ks, amps = q.support_amplitudes()
    keep = (np.abs(ks) <= trunc) & (ks != 0)
    ks, amps = ks[keep], amps[keep]
    if ks.size == 0:
        return 0.0
    sel1 = ks != excl
    m1, a1v = ks[sel1], amps[sel1]
    den1 = _lam_den(lam, m + sgn * m1, theta)
    _check_floor(den1, m1, lam)
    s12 = m1[:, None] + ks[None, :]
    ok12 = (s12 != 0) & (s12 != excl)
    den2 = _lam_den(lam, m + sgn * s12, theta)
    _check_floor(np.where(ok12, den2, 1.0), s12, lam)
    if order == 1:
        w = w_at(m + sgn * s12)
        terms = (a1v[:, None] * amps[None, :]) * w / (den1[:, None] * den2)
        return float(abs(np.sum(np.where(ok12, terms, 0.0))))
    s123 = s12[:, :, None] + ks[None, None, :]
    ok123 = ok12[:, :, None] & (s123 != 0) & (s123 != excl)
    den3 = _lam_den(lam, m + sgn * s123, theta)
    _check_floor(np.where(ok123, den3, 1.0), s123, lam)
    w = w_at(m + sgn * s123)
    terms = (a1v[:, None, None] * amps[None, :, None] * amps[None, None, :]) * w
    terms = terms / (den1[:, None, None] * den2[:, :, None] * den3)
    return float(abs(np.sum(np.where(ok123, terms, 0.0))))


def harmonic_sum(m: int, trunc: int) -> float:
    """sum over m1 not in {0, 2m}, |m1| <= trunc of 1/(|m1| |2m - m1|), plus the
    exact analytic tails for |m1| > trunc (digamma telescoping)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if trunc < 10**4 * m:
        raise ValueError(f"trunc must be >= 1e4*m = {10**4 * m}")
    n = np.arange(1, trunc + 1, dtype=float)
    den = n * np.abs(2 * m - n)
    den[2 * m - 1] = 1.0                      # m1 = 2m excluded below
    pos = 1.0 / den
    pos[2 * m - 1] = 0.0
    neg = 1.0 / (n * (2 * m + n))
    total = float(pos.sum() + neg.sum())
    tail_pos = (digamma(trunc + 1) - digamma(trunc + 1 - 2 * m)) / (2 * m)
    tail_neg = (digamma(trunc + 1 + 2 * m) - digamma(trunc + 1)) / (2 * m)
    return total + float(tail_pos + tail_neg)


@dataclass(frozen=True)
class TrendReport:
    status: str              # "ok" | "not-applicable"
    ms: tuple
    values: tuple
    log_slope: float
    bounded: bool


def deviation_ratios(pairs, table: RhoTable, slope_max: float = 0.1) -> TrendReport:
    """Per-index |lambda_{m,j} - ((2m+theta)pi)^2| / rho(m), max over j."""
    rows = [(p.m, p) for p in pairs if p.m in table.entries]
    if not rows:
        return TrendReport("not-applicable", (), (), float("nan"), False)
    theta = bc_theta(rows[0][1].bc)
    ms, vals = [], []
    for m, p in rows:
        r = table.rho(m)
        if r == 0.0:
            return TrendReport("not-applicable", (), (), float("nan"), False)
        center = free_eigenvalue(m, theta)
        vals.append(max(abs(l - center) for l in p.lam) / r)
        ms.append(m)
    slope = fitted_loglog_slope(ms, vals)
    bounded = bool(np.isfinite(slope) and slope <= slope_max)
    return TrendReport("ok", tuple(ms), tuple(float(v) for v in vals), slope, bounded)


def uv_balance(pairs, q: PotentialModel, table: RhoTable,
               slope_max: float = 0.15) -> TrendReport:
    """|q_n v^2 - q_{-n} u^2| * m / rho(m) over simple pairs (n = 2m + theta)."""
    simple = [p for p in pairs if p.kind is PairClass.SIMPLE and p.m in table.entries]
    if not simple:
        return TrendReport("not-applicable", (), (), float("nan"), False)
    theta = bc_theta(simple[0].bc)
    ms, vals = [], []
    for p in simple:
        r = table.rho(p.m)
        if r == 0.0:
            return TrendReport("not-applicable", (), (), float("nan"), False)
        nres = 2 * p.m + theta
        qp = q.coefficient(nres)
        qm = q.coefficient(-nres)
        worst = max(abs(qp * p.v[j] ** 2 - qm * p.u[j] ** 2) for j in (0, 1))
        ms.append(p.m)
        vals.append(worst * p.m / r)
    slope = fitted_loglog_slope(ms, vals)
    bounded = bool(np.isfinite(slope) and slope <= slope_max)
    return TrendReport("ok", tuple(ms), tuple(float(v) for v in vals), slope, bounded)


@dataclass(frozen=True)
class AsymptoticRow:
    m: int
    a1: complex
    a2: complex
    a1_primed: complex
    a2_primed: complex
    b1: complex
    b2: complex
    b1_primed: complex
    b2_primed: complex
    a1_integral: complex
    R1_est: float
    R2_est: float
    Lambda_m: tuple
    deviation_ratio: float
    uv_balance: float
    kappa: complex


@dataclass(frozen=True)
class AsymptoticReport:
    bc: str
    trunc: int
    rows: list


def asymptotic_report(q: PotentialModel, pairs, table: RhoTable,
                      trunc: int = 2000) -> AsymptoticReport:
    """Per-index table of all correction sums (at the converged eigenvalue of
    j = 1), residual estimates, eigenvalue deviations, and the balance and
    coefficient-ratio quantities."""
    rows = []
    bc = pairs[0].bc if pairs else "periodic"
    theta = bc_theta(bc)
    for p in pairs:
        m = p.m
        lam = complex(p.lam[0])
        nres = 2 * m + theta
        sums = {k: correction_sum(q, lam, m, k, trunc=trunc, theta=theta) for k in KINDS}
        center = free_eigenvalue(m, theta)
        Lam = tuple(complex(l - center) for l in p.lam)
        r = table.rho(m) if m in table.entries else float("nan")
        dev = max(abs(x) for x in Lam) / r if r and r > 0 else float("nan")
        qp, qm = q.coefficient(nres), q.coefficient(-nres)
        bal = max(abs(qp * p.v[j] ** 2 - qm * p.u[j] ** 2) for j in (0, 1))
        bal = bal * m / r if r and r > 0 else float("nan")
        kappa = qm / qp if qp != 0 else complex(float("nan"), 0.0)
        rows.append(AsymptoticRow(
            m=m, a1=sums["a1"], a2=sums["a2"], a1_primed=sums["a1'"], a2_primed=sums["a2'"],
            b1=sums["b1"], b2=sums["b2"], b1_primed=sums["b1'"], b2_primed=sums["b2'"],
            a1_integral=a1_integral_form(q, m, theta),
            R1_est=residual_estimate(q, p, 1, "unprimed", trunc),
            R2_est=residual_estimate(q, p, 2, "unprimed", trunc),
            Lambda_m=Lam, deviation_ratio=dev, uv_balance=bal, kappa=kappa,
        ))
    return AsymptoticReport(bc=bc, trunc=trunc, rows=rows)
