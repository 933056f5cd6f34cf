"""Independent spectral verification through the Floquet discriminant.

The second-order equation y'' + (lambda - q) y = 0 is integrated as an
initial-value problem over [0, 1] for the two normalized fundamental
solutions; the trace of the resulting monodromy matrix is the discriminant
Delta(lambda). Delta = 2 characterizes periodic eigenvalues, Delta = -2
anti-periodic ones. Roots are refined by a complex secant iteration from
Galerkin (or free) seeds and counted per disc by the argument principle.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .config import worker_count
from .errors import DiscAnomalyError, StiffnessError
from .galerkin import bc_theta, free_eigenvalue, pairing_gap
from .potential import PotentialModel

_TOL_RANGE = (1e-13, 1e-6)


@dataclass(frozen=True)
class MonodromyMatrix:
    lam: complex
    entries: np.ndarray      # 2x2: fundamental solutions and derivatives at x = 1
    step_count: int
    est_error: float         # |det - 1|; the Wronskian is conserved exactly

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.entries))


def monodromy_batch(q: PotentialModel, lams, tol: float = 1e-12):
    """Monodromy matrices for a batch of lambda values in one adaptive solve.

    Returns (entries with shape (2, 2, B), step_count). Batching shares the
    step-size control across the batch, which is safe when the lambdas have a
    common magnitude (one disc, one secant sweep).
    """
    if not (_TOL_RANGE[0] <= tol <= _TOL_RANGE[1]):
        raise ValueError(f"tol must lie in [{_TOL_RANGE[0]:g}, {_TOL_RANGE[1]:g}]")
    lams = np.atleast_1d(np.asarray(lams, dtype=complex))
    B = lams.size
    ks, amps = q.support_amplitudes()
    mean = q.mean_shift
    two_pi_k = 2j * math.pi * ks

    def rhs(x, y):
        Y = y.reshape(2, 2, B)
        qx = (amps @ np.exp(two_pi_k * x)) + mean if ks.size else mean
        out = np.empty_like(Y)
        out[0] = Y[1]
        out[1] = (qx - lams) * Y[0]
        return out.reshape(-1)

    y0 = np.zeros((2, 2, B), dtype=complex)
    y0[0, 0] = 1.0
    y0[1, 1] = 1.0
    sol = solve_ivp(rhs, (0.0, 1.0), y0.reshape(-1), method="DOP853",
                    rtol=tol, atol=tol)
    if sol.status != 0:
        raise StiffnessError(
            f"integration failed (status {sol.status}): |lambda| may exceed the configured range"
        )
    entries = sol.y[:, -1].reshape(2, 2, B)
    return entries, sol.t.size - 1


def integrate_monodromy(q: PotentialModel, lam: complex, tol: float = 1e-12) -> MonodromyMatrix:
    """Monodromy matrix at a single lambda, with a Wronskian conservation check."""
    entries, steps = monodromy_batch(q, [lam], tol)
    M = entries[:, :, 0]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    err = abs(det - 1.0)
    if err > 10.0 * tol:
        raise StiffnessError(f"Wronskian drift |det-1| = {err:.3e} exceeds 10*tol")
    return MonodromyMatrix(lam=complex(lam), entries=M.copy(), step_count=steps, est_error=err)


def floquet_discriminant(M: MonodromyMatrix) -> complex:
    """Delta(lambda) = trace of the monodromy matrix."""
    return complex(M.entries[0, 0] + M.entries[1, 1])


def discriminant_batch(q: PotentialModel, lams, tol: float = 1e-12) -> np.ndarray:
    entries, _ = monodromy_batch(q, lams, tol)
    return entries[0, 0] + entries[1, 1]


@dataclass(frozen=True)
class DiscResult:
    m: int
    roots: tuple                 # refined eigenvalues (both members of the pair)
    converged: tuple
    contour_count: int
    multiplicity: str            # "two-simple" | "double"


@dataclass(frozen=True)
class OracleResult:
    bc: str
    discs: list

    def roots_for(self, m: int):
        for d in self.discs:
            if d.m == m:
                return d.roots
        raise KeyError(m)


def _winding_number(values: np.ndarray) -> float:
    """Winding of a sampled closed curve around the origin (argument principle)."""
    ratios = values / np.roll(values, 1)
    return float(np.angle(ratios).sum() / (2.0 * math.pi))


def _secant_refine(q, seeds, target, tol_ode, tol_root, max_iter, centers, radii):
    """Complex secant on Delta(lambda) - target for a batch of seeds.

    A seed already satisfying |Delta - target| <= tol_root is accepted as
    converged (numerically double roots are at the seed to solver accuracy).
    """
    lam0 = np.asarray(seeds, dtype=complex)
    f0 = discriminant_batch(q, lam0, tol_ode) - target
    done = np.abs(f0) <= tol_root
    roots = lam0.copy()
    lam1 = lam0 + 1e-7 * (1.0 + np.abs(lam0))
    f1 = discriminant_batch(q, lam1, tol_ode) - target
    active = ~done
    for _ in range(max_iter):
        if not active.any():
            break
        df = f1 - f0
        df = np.where(df == 0.0, 1e-300, df)
        step = f1 * (lam1 - lam0) / df
        lam2 = lam1 - step
        # keep iterates inside twice the search disc
        off = np.abs(lam2 - centers) > 2.0 * radii
        lam2 = np.where(off & active, 0.5 * (lam1 + centers), lam2)
        f2 = np.empty_like(f1)
        f2[active] = discriminant_batch(q, lam2[active], tol_ode) - target
        lam0, f0 = np.where(active, lam1, lam0), np.where(active, f1, f0)
        lam1, f1 = np.where(active, lam2, lam1), np.where(active, f2, f1)
        newly = active & (np.abs(f1) <= tol_root)
        roots[newly] = lam1[newly]
        done |= newly
        stale = active & (np.abs(lam1 - lam0) <= 1e-14 * (1.0 + np.abs(lam1)))
        done |= stale
        roots[stale] = lam1[stale]
        active = ~done
    roots[active] = lam1[active]
    converged = np.abs(f1) <= tol_root
    converged[np.abs(f0) <= tol_root] = True
    return roots, converged


def find_bc_eigenvalues(q: PotentialModel, bc: str, m_range, seeds=None,
                        tol_ode: float = 1e-12, tol_root: float = 1e-10,
                        max_iter: int = 50, contour_nodes: int = 256,
                        contour_tol: float = 1e-9, n_jobs: int | None = None) -> OracleResult:
    """Refine the boundary-condition eigenvalues near each index disc and
    count roots per disc by a trapezoid contour evaluation on its boundary.

    seeds maps m to an iterable of two lambda guesses; free eigenvalues are
    used when absent.
    """
    theta = bc_theta(bc)
    target = 2.0 if theta == 0 else -2.0
    ms = [int(m) for m in m_range]
    seed_arr = []
    centers = []
    radii = []
    for m in ms:
        center = free_eigenvalue(m, theta) + q.mean_shift
        pair = (seeds or {}).get(m, (center, center))
        seed_arr.extend([complex(pair[0]), complex(pair[1])])
        centers.extend([center, center])
        radii.extend([0.5 * pairing_gap(m, theta)] * 2)
    roots, converged = _secant_refine(
        q, np.array(seed_arr), target, tol_ode, tol_root, max_iter,
        np.array(centers), np.array(radii),
    )

    def count_disc(i_m):
        i, m = i_m
        center = free_eigenvalue(m, theta) + q.mean_shift
        radius = 0.5 * pairing_gap(m, theta)
        angles = 2.0 * math.pi * np.arange(contour_nodes) / contour_nodes
        ring = center + radius * np.exp(1j * angles)
        g = discriminant_batch(q, ring, max(contour_tol, tol_ode)) - target
        w = _winding_number(g)
        return i, m, w

    with ThreadPoolExecutor(max_workers=worker_count(n_jobs)) as pool:
        counted = list(pool.map(count_disc, enumerate(ms)))

    discs = []
    for i, m, w in sorted(counted):
        count = int(round(w))
        if abs(w - count) > 0.25 or count not in (1, 2):
            raise DiscAnomalyError(m, count if abs(w - count) <= 0.25 else round(w, 3))
        r1, r2 = roots[2 * i], roots[2 * i + 1]
        scale = 1.0 + abs(r1)
        mult = "double" if abs(r1 - r2) <= 1e-6 * scale else "two-simple"
        discs.append(DiscResult(
            m=m, roots=(complex(r1), complex(r2)),
            converged=(bool(converged[2 * i]), bool(converged[2 * i + 1])),
            contour_count=count, multiplicity=mult,
        ))
    return OracleResult(bc=bc, discs=discs)


@dataclass(frozen=True)
class ComparisonReport:
    per_m: dict                  # m -> max deviation under optimal 2-point matching
    overall: float
    flagged: list                # indices with cardinality mismatch


def compare_spectra(pairs, oracle: OracleResult) -> ComparisonReport:
    """Per-index deviation between Galerkin pairs and oracle roots."""
    by_m = {d.m: d.roots for d in oracle.discs}
    per_m = {}
    flagged = []
    for p in pairs:
        roots = by_m.get(p.m)
        if roots is None or len(roots) != len(p.lam):
            flagged.append(p.m)
            continue
        a, b = p.lam
        r1, r2 = roots
        direct = max(abs(a - r1), abs(b - r2))
        swapped = max(abs(a - r2), abs(b - r1))
        per_m[p.m] = float(min(direct, swapped))
    overall = max(per_m.values()) if per_m else float("nan")
    return ComparisonReport(per_m=per_m, overall=overall, flagged=flagged)
