"""Fourier-basis discretization and spectral pairing.

The operator -y'' + q y acts on the exponential basis e^{i(2k+theta)pi x},
|k| <= K, which satisfies the periodic (theta = 0) or anti-periodic
(theta = 1) boundary conditions identically. The matrix is
A[k, l] = ((2k+theta)pi)^2 delta_{kl} + q_{k-l}; its eigenvalues come in
pairs near ((2m+theta)pi)^2 that are isolated from the rest of the spectrum,
and each pair is classified as simple, doubly degenerate with a full
eigenspace, or defective (Jordan chain of length two).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import PairingAmbiguityError, SolverFailureError, TruncationError
from .potential import PotentialModel


class PairClass(enum.Enum):
    SIMPLE = "SimplePair"
    DOUBLE = "DoubleGeometric2"
    JORDAN = "JordanChain"
    INDETERMINATE = "Indeterminate"


def bc_theta(bc: str) -> int:
    if bc == "periodic":
        return 0
    if bc == "antiperiodic":
        return 1
    raise ValueError(f"bc must be 'periodic' or 'antiperiodic', got {bc!r}")


def free_eigenvalue(m: int, theta: int) -> float:
    return float(((2 * m + theta) * math.pi) ** 2)


def pairing_gap(m: int, theta: int) -> float:
    """Half the spacing between consecutive free eigenvalues around index m."""
    prev = free_eigenvalue(m - 1, theta)
    return 0.5 * (free_eigenvalue(m, theta) - prev)


@dataclass(frozen=True)
class GalerkinMatrix:
    bc: str
    K: int
    theta: int
    entries: np.ndarray
    lambda_shift: complex          # removed potential mean, reapplied to eigenvalues
    max_frequency: int

    def slot(self, k: int) -> int:
        return k + self.K

    @property
    def size(self) -> int:
        return 2 * self.K + 1


def build_matrix(q: PotentialModel, bc: str, K: int) -> GalerkinMatrix:
    """Dense truncated matrix of the operator in the exponential basis."""
    theta = bc_theta(bc)
    if K < 1 or 2 * K < q.max_frequency:
        raise TruncationError(
            f"K={K} too small: potential support reaches frequency {q.max_frequency}"
        )
    ks = np.arange(-K, K + 1)
    diag = ((2 * ks + theta) * math.pi) ** 2
    col = q.coefficient_array(np.arange(0, 2 * K + 1))       # q_{k-l}, k-l >= 0
    row = q.coefficient_array(-np.arange(0, 2 * K + 1))      # k-l <= 0
    A = scipy.linalg.toeplitz(col, row).astype(complex)
    A[np.diag_indices_from(A)] = diag
    return GalerkinMatrix(bc=bc, K=K, theta=theta, entries=A,
                          lambda_shift=q.mean_shift, max_frequency=q.max_frequency)


def solve_spectrum(A: GalerkinMatrix, tol_eig: float = 1e-11):
    """Full dense eigendecomposition with a backward-residual contract.

    Returns (eigenvalues, vectors); eigenvalues include the potential's mean
    shift, columns of vectors have unit norm. Raises SolverFailureError when
    any residual ||Aw - lambda w|| exceeds tol_eig * ||A||.
    """
    M = A.entries
    if not np.all(np.isfinite(M)):
        raise SolverFailureError("matrix has non-finite entries")
    try:
        w, V = scipy.linalg.eig(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise SolverFailureError(f"eigensolver did not converge: {exc}") from exc
    V = V / np.linalg.norm(V, axis=0, keepdims=True)
    norm_a = np.linalg.norm(M, ord=np.inf)
    resid = np.linalg.norm(M @ V - V * w, axis=0)
    worst = float(resid.max() / max(norm_a, 1.0))
    if worst > tol_eig:
        raise SolverFailureError(
            f"residual contract violated: {worst:.3e} > {tol_eig:.1e}", residual=worst
        )
    order = np.lexsort((w.imag, w.real))
    return w[order] + A.lambda_shift, V[:, order]


def uv_coefficients(vector: np.ndarray, m: int, bc: str, K: int | None = None):
    """Coefficients of a unit vector at the resonant frequencies +-(2m+theta).

    Returns (u, v, tail_norm) with tail_norm the norm of the remaining
    component, so |u|^2 + |v|^2 + tail_norm^2 = 1 for unit input.
    """
    theta = bc_theta(bc)
    if K is None:
        K = (len(vector) - 1) // 2
    slot_u = K + m
    slot_v = K - m - theta
    u = complex(vector[slot_u])
    v = complex(vector[slot_v])
    rest = vector.copy()
    rest[[slot_u, slot_v]] = 0.0
    return u, v, float(np.linalg.norm(rest))


@dataclass(frozen=True)
class SpectralPair:
    """Per-index record of the eigenvalue pair near ((2m+theta)pi)^2."""

    m: int
    bc: str
    lam: tuple                      # (lambda_{m,1}, lambda_{m,2})
    vectors: tuple                  # two unit coefficient vectors
    kind: PairClass
    u: tuple
    v: tuple
    tail_norm: tuple
    associated_vector: np.ndarray | None = None   # chain-scaled, kind == JORDAN only
    chain_residual: float | None = None

    @property
    def is_simple(self) -> bool:
        return self.kind is PairClass.SIMPLE


@dataclass(frozen=True)
class PairingResult:
    pairs: list
    anomalies: list                 # eigenvalues in the covered band outside all discs
    warnings: list


def _classify_cluster(A, lam_pair_unshifted, tol_rank, spectrum_unshifted=None):
    """Schur-based classification of a clustered pair; returns
    (kind, vectors, associated, chain_residual) in the full space."""
    M = A.entries
    center = complex(np.mean(lam_pair_unshifted))
    if spectrum_unshifted is None:
        spectrum_unshifted = scipy.linalg.eigvals(M)
    dist = np.sort(np.abs(spectrum_unshifted - center))
    r_sel = 0.5 * (dist[1] + dist[2])   # between the pair and the next eigenvalue
    try:
        T, Z, sdim = scipy.linalg.schur(
            M, output="complex", sort=lambda z: abs(z - center) <= r_sel
        )
    except scipy.linalg.LinAlgError:  # pragma: no cover
        return PairClass.INDETERMINATE, None, None, None
    if sdim != 2:
        return PairClass.INDETERMINATE, None, None, None
    B = T[:2, :2]
    Vsub = Z[:, :2]
    delta = abs(B[0, 0] - B[1, 1])
    t = B[0, 1]
    mu = 0.5 * (B[0, 0] + B[1, 1])
    floor = 1e-12 * (1.0 + abs(mu))
    if abs(t) <= max(floor, tol_rank * delta):
        # off-diagonal negligible: full eigenspace
        return PairClass.DOUBLE, (Vsub[:, 0].copy(), Vsub[:, 1].copy()), None, None
    if delta > tol_rank * abs(t):
        # resolved split inside the cluster tolerance: simple, just non-normal
        return PairClass.SIMPLE, None, None, None
    # defective: nilpotent part dominates the split
    N = B - mu * np.eye(2)
    U, s, Vh = np.linalg.svd(N)
    eig_sub = U[:, 0]
    assoc_sub = Vh[0].conj()
    assoc_sub = assoc_sub - (eig_sub.conj() @ assoc_sub) * eig_sub
    assoc_sub /= np.linalg.norm(assoc_sub)
    v_full = Vsub @ eig_sub
    w_unit = Vsub @ assoc_sub
    chain = (M - mu * np.eye(M.shape[0])) @ w_unit
    gamma = (chain.conj() @ v_full) / (chain.conj() @ chain)
    associated = gamma * w_unit
    residual = float(np.linalg.norm(gamma * chain - v_full))
    return PairClass.JORDAN, (v_full, w_unit), associated, residual


def classify_multiplicity(A: GalerkinMatrix, lam_pair, vec_pair,
                          tol_cluster: float = 1e-6, tol_rank: float = 1e-4,
                          spectrum=None):
    """Multiplicity class of an eigenvalue pair.

    Widely split pairs are simple. Clustered pairs are resolved through the
    2x2 block of the reordered Schur form: a negligible off-diagonal means a
    genuine two-dimensional eigenspace, an off-diagonal dominating the split
    means a Jordan chain (the associated vector is solved within the invariant
    subspace, orthogonalized against the eigenvector, and scaled to minimize
    the chain residual).
    """
    lam_unshifted = np.asarray(lam_pair, dtype=complex) - A.lambda_shift
    delta = abs(lam_unshifted[0] - lam_unshifted[1])
    scale = 1.0 + abs(np.mean(lam_unshifted))
    if delta > tol_cluster * scale:
        return PairClass.SIMPLE, (vec_pair[0], vec_pair[1]), None, None
    spec_unshifted = None if spectrum is None else np.asarray(spectrum) - A.lambda_shift
    kind, vectors, associated, residual = _classify_cluster(
        A, lam_unshifted, tol_rank, spec_unshifted
    )
    if vectors is None:
        vectors = (vec_pair[0], vec_pair[1])
    return kind, vectors, associated, residual


def pair_eigenvalues(A: GalerkinMatrix, eigenvalues, vectors, m_max: int,
                     tol_cluster: float = 1e-6, tol_rank: float = 1e-4) -> PairingResult:
    """Assign eigenvalues to index discs and classify each pair.

    For each m <= m_max exactly two eigenvalues must lie in the disc centered
    at ((2m+theta)pi)^2 (plus the recorded mean shift) with radius gap(m)/2;
    anything else raises PairingAmbiguityError. Eigenvalues inside the covered
    band but outside every disc are reported as anomalies.
    """
    theta = A.theta
    if A.K < 2 * m_max + 8:
        raise TruncationError(f"K={A.K} too small to pair up to m_max={m_max}")
    w = np.asarray(eigenvalues)
    shift = A.lambda_shift
    pairs = []
    warnings = []
    claimed = np.zeros(w.size, dtype=bool)
    for m in range(1, m_max + 1):
        center = free_eigenvalue(m, theta) + shift
        radius = 0.5 * pairing_gap(m, theta)
        inside = np.where(np.abs(w - center) < radius)[0]
        if inside.size != 2:
            raise PairingAmbiguityError(m, int(inside.size))
        claimed[inside] = True
        lam_pair = tuple(complex(w[i]) for i in inside)
        vec_pair = tuple(np.array(vectors[:, i]) for i in inside)
        kind, final_vecs, associated, chain_residual = classify_multiplicity(
            A, lam_pair, vec_pair, tol_cluster=tol_cluster, tol_rank=tol_rank,
            spectrum=w,
        )
        if kind is PairClass.INDETERMINATE:
            warnings.append(f"m={m}: invariant-subspace extraction ill-conditioned")
        uvt = [uv_coefficients(vec, m, A.bc, A.K) for vec in final_vecs]
        pairs.append(SpectralPair(
            m=m, bc=A.bc, lam=lam_pair, vectors=final_vecs, kind=kind,
            u=tuple(x[0] for x in uvt), v=tuple(x[1] for x in uvt),
            tail_norm=tuple(x[2] for x in uvt),
            associated_vector=associated, chain_residual=chain_residual,
        ))
    band_lo = free_eigenvalue(1, theta) - pairing_gap(1, theta) + shift.real
    band_hi = free_eigenvalue(m_max, theta) + pairing_gap(m_max, theta) + shift.real
    anomalies = [complex(x) for x in w[~claimed]
                 if band_lo <= x.real <= band_hi]
    return PairingResult(pairs=pairs, anomalies=anomalies, warnings=warnings)


@dataclass(frozen=True)
class NormalSystem:
    """Canonical root-function system: eigenvector pairs for simple/double
    spectra, eigenvector plus orthogonalized associated vector for chains."""

    pairs: list
    jordan_count: int
    lowest_index: int
    highest_index: int
    excluded: list

    def vectors(self, m_start: int | None = None):
        """Root-function coefficient vectors ordered by (m, j)."""
        out = []
        for p in self.pairs:
            if m_start is not None and p.m < m_start:
                continue
            out.extend(p.vectors)
        return out


def normal_system(pairs) -> NormalSystem:
    """Assemble the canonical system, excluding indeterminate indices."""
    kept = [p for p in pairs if p.kind is not PairClass.INDETERMINATE]
    excluded = [p.m for p in pairs if p.kind is PairClass.INDETERMINATE]
    jordan = sum(1 for p in kept if p.kind is PairClass.JORDAN)
    ms = [p.m for p in kept] or [0]
    return NormalSystem(pairs=kept, jordan_count=jordan,
                        lowest_index=min(ms), highest_index=max(ms), excluded=excluded)
