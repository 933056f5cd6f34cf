"""Estimator-style facade over the pipeline.

Each estimator is configured with hyperparameters, fit to one potential
(given as a PotentialModel, a spec dict, or a JSON string), and exposes its
results as fitted attributes; get_params/set_params come from the sklearn
base class so the classes compose with the wider ecosystem.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .asymptotics import asymptotic_report
from .config import Thresholds, default_truncation
from .diagnostics import basis_verdict, gram_diagnostics, simplicity_report, uv_equivalence_check
from .errors import ConfigError, TruncationError
from .floquet import compare_spectra, find_bc_eigenvalues
from .galerkin import build_matrix, normal_system, pair_eigenvalues, solve_spectrum
from .potential import PotentialModel, from_spec, rho_table


def as_potential(X) -> PotentialModel:
    """Validation helper: accept a model, a spec dict, or a JSON string."""
    if isinstance(X, PotentialModel):
        return X
    return from_spec(X)


def check_is_fitted(estimator, attr: str):
    if not hasattr(estimator, attr):
        raise ConfigError(f"{type(estimator).__name__} is not fitted yet (missing {attr})")


class GalerkinSpectrum(BaseEstimator):
    """Truncated Fourier-basis eigensolver with pairing and classification.

    After fit: matrix_, eigenvalues_, eigenvectors_, pairs_, anomalies_,
    warnings_, normal_system_.
    """

    def __init__(self, bc="periodic", m_max=10, K=None, tol_eig=1e-11,
                 tol_cluster=1e-6, tol_rank=1e-4):
        self.bc = bc
        self.m_max = m_max
        self.K = K
        self.tol_eig = tol_eig
        self.tol_cluster = tol_cluster
        self.tol_rank = tol_rank

    def _resolve_K(self, q: PotentialModel) -> int:
        return self.K if self.K is not None else default_truncation(self.m_max, q.max_frequency)

    def fit(self, X, y=None):
        q = as_potential(X)
        K = self._resolve_K(q)
        if K < 2 * q.max_frequency + 8:
            raise TruncationError(
                f"K={K} below the pairing-quality floor 2*max_frequency+8 = "
                f"{2 * q.max_frequency + 8}"
            )
        self.potential_ = q
        self.matrix_ = build_matrix(q, self.bc, K)
        self.eigenvalues_, self.eigenvectors_ = solve_spectrum(self.matrix_, self.tol_eig)
        result = pair_eigenvalues(self.matrix_, self.eigenvalues_, self.eigenvectors_,
                                  self.m_max, tol_cluster=self.tol_cluster,
                                  tol_rank=self.tol_rank)
        self.pairs_ = result.pairs
        self.anomalies_ = result.anomalies
        self.warnings_ = result.warnings
        self.normal_system_ = normal_system(self.pairs_)
        return self

    def predict(self, m_values):
        """Eigenvalue pairs for the requested indices, shape (len, 2)."""
        check_is_fitted(self, "pairs_")
        by_m = {p.m: p.lam for p in self.pairs_}
        return np.array([by_m[int(m)] for m in m_values])


class FloquetOracle(BaseEstimator):
    """Monodromy-based eigenvalue refinement; the independent verification path.

    After fit: roots_ (OracleResult). fit accepts optional seeds
    {m: (lam1, lam2)}; free eigenvalues are used otherwise.
    """

    def __init__(self, bc="periodic", m_max=10, tol_ode=1e-12, tol_root=1e-10,
                 contour_nodes=256, n_jobs=None):
        self.bc = bc
        self.m_max = m_max
        self.tol_ode = tol_ode
        self.tol_root = tol_root
        self.contour_nodes = contour_nodes
        self.n_jobs = n_jobs

    def fit(self, X, y=None, seeds=None):
        q = as_potential(X)
        self.potential_ = q
        self.roots_ = find_bc_eigenvalues(
            q, self.bc, range(1, self.m_max + 1), seeds=seeds,
            tol_ode=self.tol_ode, tol_root=self.tol_root,
            contour_nodes=self.contour_nodes, n_jobs=self.n_jobs,
        )
        return self

    def compare(self, pairs):
        check_is_fitted(self, "roots_")
        return compare_spectra(pairs, self.roots_)


class RieszBasisDiagnostic(BaseEstimator):
    """Full pipeline: rho table, Galerkin spectrum, u/v criterion, Gram
    trajectory, and the final verdict.

    After fit: rho_table_, pairs_, normal_system_, uv_check_, gram_,
    simplicity_, verdict_, asymptotics_ (optional, see with_asymptotics).
    """

    def __init__(self, bc="periodic", m_max=40, m_asym=5, K=None,
                 N_list=(8, 16, 32, 64), trunc=2000, tol_eig=1e-11,
                 tol_cluster=1e-6, tol_rank=1e-4, rho_grid=None,
                 thresholds=None, with_asymptotics=False):
        self.bc = bc
        self.m_max = m_max
        self.m_asym = m_asym
        self.K = K
        self.N_list = N_list
        self.trunc = trunc
        self.tol_eig = tol_eig
        self.tol_cluster = tol_cluster
        self.tol_rank = tol_rank
        self.rho_grid = rho_grid
        self.thresholds = thresholds
        self.with_asymptotics = with_asymptotics

    def fit(self, X, y=None):
        q = as_potential(X)
        if not self.m_asym < self.m_max:
            raise ConfigError("m_asym must be < m_max")
        if max(self.N_list) > 2 * (self.m_max - self.m_asym + 1):
            raise ConfigError("N_list exceeds the root functions available above m_asym")
        thr = self.thresholds or Thresholds()
        self.potential_ = q
        solver = GalerkinSpectrum(bc=self.bc, m_max=self.m_max, K=self.K,
                                  tol_eig=self.tol_eig, tol_cluster=self.tol_cluster,
                                  tol_rank=self.tol_rank).fit(q)
        self.galerkin_ = solver
        self.pairs_ = solver.pairs_
        self.normal_system_ = solver.normal_system_
        self.rho_table_ = rho_table(q, range(1, self.m_max + 1), self.bc, self.rho_grid)
        self.uv_check_ = uv_equivalence_check(self.pairs_, self.m_asym, thr)
        self.gram_ = gram_diagnostics(self.normal_system_, self.N_list, self.m_asym)
        self.simplicity_ = simplicity_report(self.pairs_, self.m_asym)
        self.verdict_ = basis_verdict(q, self.bc, self.pairs_, self.rho_table_,
                                      self.gram_, (self.m_asym, self.m_max), thr,
                                      m_start=self.m_asym)
        if self.with_asymptotics:
            self.asymptotics_ = asymptotic_report(q, self.pairs_, self.rho_table_, self.trunc)
        return self

    def predict(self, X):
        """Verdict labels for one or several potential specs."""
        specs = X if isinstance(X, (list, tuple)) else [X]
        labels = []
        for spec in specs:
            est = RieszBasisDiagnostic(**self.get_params())
            est.fit(spec)
            labels.append(est.verdict_.verdict)
        return labels if isinstance(X, (list, tuple)) else labels[0]
