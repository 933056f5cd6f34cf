"""Matrix construction, eigensolve contract, pairing, and classification."""

import math

import numpy as np
import pytest

import hillriesz as hr
from hillriesz.errors import PairingAmbiguityError, TruncationError
from hillriesz.galerkin import PairClass, free_eigenvalue


class TestBuildMatrix:
    def test_zero_potential_diagonal(self):
        A = hr.build_matrix(hr.zero_potential(), "periodic", 4)
        ks = np.arange(-4, 5)
        expected = np.diag(((2 * ks * math.pi) ** 2).astype(complex))
        assert np.allclose(A.entries, expected, atol=0)

    def test_cosine_off_diagonals(self, cos4):
        A = hr.build_matrix(cos4, "periodic", 4)
        off = A.entries - np.diag(np.diag(A.entries))
        expected = np.diag(np.ones(7), 2) + np.diag(np.ones(7), -2)
        assert np.allclose(off, expected, atol=0)

    def test_one_sided_subdiagonal_only(self, one_sided_single):
        A = hr.build_matrix(one_sided_single, "periodic", 4)
        off = A.entries - np.diag(np.diag(A.entries))
        assert np.allclose(off, np.diag(np.ones(7), -2), atol=0)

    def test_antiperiodic_diagonal(self):
        A = hr.build_matrix(hr.zero_potential(), "antiperiodic", 3)
        ks = np.arange(-3, 4)
        assert np.allclose(np.diag(A.entries), ((2 * ks + 1) * math.pi) ** 2)

    def test_truncation_guard(self):
        q = hr.power_family(1.0, mmax=10)   # max_frequency = 20
        with pytest.raises(TruncationError):
            hr.build_matrix(q, "periodic", 8)          # support falls off the band
        with pytest.raises(TruncationError):
            # estimator enforces the pairing-quality floor 2*max_frequency + 8
            hr.GalerkinSpectrum(bc="periodic", m_max=5, K=30).fit(q)


class TestSolveSpectrum:
    def test_free_eigenvalues_exact(self):
        A = hr.build_matrix(hr.zero_potential(), "periodic", 8)
        w, V = hr.solve_spectrum(A)
        expected = np.sort(((2 * np.arange(-8, 9) * math.pi) ** 2))
        assert np.allclose(np.sort(w.real), expected, rtol=1e-12, atol=1e-12)
        assert np.max(np.abs(w.imag)) == 0.0

    def test_constant_shift(self):
        q = hr.trig_potential([(0, 3.0 + 1.0j)])     # pure mean, recorded as shift
        A = hr.build_matrix(q, "periodic", 6)
        w, _ = hr.solve_spectrum(A)
        free = np.sort(((2 * np.arange(-6, 7) * math.pi) ** 2))
        assert np.allclose(np.sort(w.real), free + 3.0, atol=1e-12)
        assert np.allclose(w.imag, 1.0, atol=1e-12)

    def test_residual_contract(self, cos4):
        A = hr.build_matrix(cos4, "periodic", 32)
        w, V = hr.solve_spectrum(A, tol_eig=1e-11)
        norm_a = np.linalg.norm(A.entries, ord=np.inf)
        resid = np.linalg.norm(A.entries @ V - V * (w - A.lambda_shift), axis=0)
        assert resid.max() <= 1e-11 * norm_a


class TestUVCoefficients:
    def test_basis_vector(self):
        vec = np.zeros(17, dtype=complex)
        vec[8 + 3] = 1.0                       # slot k = +3
        u, v, tail = hr.uv_coefficients(vec, 3, "periodic")
        assert (u, v, tail) == (1.0, 0.0, 0.0)

    def test_symmetric_combination(self):
        vec = np.zeros(17, dtype=complex)
        vec[8 + 3] = vec[8 - 3] = 1 / math.sqrt(2)
        u, v, tail = hr.uv_coefficients(vec, 3, "periodic")
        assert u == pytest.approx(1 / math.sqrt(2))
        assert v == pytest.approx(1 / math.sqrt(2))
        assert tail == 0.0

    def test_antiperiodic_slots(self):
        vec = np.zeros(17, dtype=complex)
        vec[8 - 3] = 1.0                       # k = -3 <-> frequency -(2*2+1)
        u, v, tail = hr.uv_coefficients(vec, 2, "antiperiodic")
        assert (u, v, tail) == (0.0, 1.0, 0.0)

    def test_cosine_eigenvector_balance(self, galerkin_cos4):
        p = next(p for p in galerkin_cos4.pairs_ if p.m == 2)
        for j in (0, 1):
            assert abs(p.u[j]) == pytest.approx(1 / math.sqrt(2), abs=1e-3)
            assert abs(p.v[j]) == pytest.approx(1 / math.sqrt(2), abs=1e-3)
            assert p.tail_norm[j] < 0.3 / p.m

    def test_balance_identity(self, galerkin_cos4):
        # |u|^2 + |v|^2 + tail^2 = 1 for unit vectors
        for p in galerkin_cos4.pairs_:
            for j in (0, 1):
                total = abs(p.u[j]) ** 2 + abs(p.v[j]) ** 2 + p.tail_norm[j] ** 2
                assert total == pytest.approx(1.0, abs=1e-12)


class TestPairing:
    def test_free_double_at_m3(self):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=5, K=32).fit(hr.zero_potential())
        p = next(p for p in est.pairs_ if p.m == 3)
        assert p.kind is PairClass.DOUBLE
        assert p.lam[0] == pytest.approx(36 * math.pi**2, rel=1e-13)
        assert p.lam[1] == pytest.approx(36 * math.pi**2, rel=1e-13)
        # two orthonormal vectors spanning the +-3 slots
        G = np.array([[np.vdot(a, b) for b in p.vectors] for a in p.vectors])
        assert np.allclose(G, np.eye(2), atol=1e-10)

    def test_cosine_m2_split(self, galerkin_cos4):
        # second-order perturbation: split = 2 |q_2|^2 / (16 pi^2) = 1/(8 pi^2)
        p = next(p for p in galerkin_cos4.pairs_ if p.m == 2)
        assert p.kind is PairClass.SIMPLE
        split = abs(p.lam[0] - p.lam[1])
        assert split == pytest.approx(1 / (8 * math.pi**2), abs=1e-5)

    def test_one_sided_m2_jordan(self, one_sided_single):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=3, K=24).fit(one_sided_single)
        p = next(p for p in est.pairs_ if p.m == 2)
        assert p.kind is PairClass.JORDAN
        assert p.associated_vector is not None
        v, w = p.vectors[0], p.associated_vector
        assert abs(np.vdot(v, w)) / np.linalg.norm(w) < 1e-10

    def test_pairing_ambiguity_error(self):
        # huge potential at small K pushes eigenvalues out of their discs
        q = hr.trig_potential([(1, 400.0), (-1, 400.0)])
        est = hr.GalerkinSpectrum(bc="periodic", m_max=6, K=22)
        with pytest.raises(PairingAmbiguityError):
            est.fit(q)

    def test_pairing_stability_under_k_doubling(self, cos4):
        a = hr.GalerkinSpectrum(bc="periodic", m_max=6, K=48).fit(cos4)
        b = hr.GalerkinSpectrum(bc="periodic", m_max=6, K=96).fit(cos4)
        for pa, pb in zip(a.pairs_, b.pairs_):
            assert max(abs(x - y) for x, y in zip(sorted(pa.lam, key=lambda z: z.real),
                                                  sorted(pb.lam, key=lambda z: z.real))) <= 1e-8

    def test_anomaly_reporting_clean_for_builtin(self, galerkin_cos4):
        assert galerkin_cos4.anomalies_ == []


class TestClassification:
    def test_free_is_double(self):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=4, K=32).fit(hr.zero_potential())
        assert all(p.kind is PairClass.DOUBLE for p in est.pairs_)

    def test_rank_oracle_agreement(self, one_sided_single):
        # brute-force oracle: rank deficiency of (A - lambda I) is 1 for a
        # Jordan pair (one eigenvector), 2 for a full eigenspace
        est = hr.GalerkinSpectrum(bc="periodic", m_max=2, K=24).fit(one_sided_single)
        A = est.matrix_.entries
        p = next(p for p in est.pairs_ if p.m == 2)
        lam = 0.5 * (p.lam[0] + p.lam[1])
        s = np.linalg.svd(A - lam * np.eye(A.shape[0]), compute_uv=False)
        # true kernel ~ eps*||A||, nilpotent coupling ~ 1/(16 pi^2): threshold between
        n_null = int(np.sum(s < 1e-8 * s[0]))
        assert n_null == 1
        assert p.kind is PairClass.JORDAN

        est0 = hr.GalerkinSpectrum(bc="periodic", m_max=2, K=24).fit(hr.zero_potential())
        A0 = est0.matrix_.entries
        p0 = next(p for p in est0.pairs_ if p.m == 2)
        s0 = np.linalg.svd(A0 - p0.lam[0] * np.eye(A0.shape[0]), compute_uv=False)
        assert int(np.sum(s0 < 1e-10 * s0[0])) == 2
        assert p0.kind is PairClass.DOUBLE

    def test_chain_relation_residual(self, one_sided_single):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=3, K=24).fit(one_sided_single)
        A = est.matrix_.entries
        for p in est.pairs_:
            if p.kind is not PairClass.JORDAN:
                continue
            lam = 0.5 * (p.lam[0] + p.lam[1])
            resid = np.linalg.norm((A - lam * np.eye(A.shape[0])) @ p.associated_vector
                                   - p.vectors[0])
            # stored residual is taken at the Schur-block eigenvalue; both are tiny
            assert resid < 1e-6
            assert p.chain_residual < 1e-6


class TestNormalSystem:
    def test_free_orthonormal_exponentials(self):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=5, K=32).fit(hr.zero_potential())
        system = est.normal_system_
        vecs = system.vectors()
        assert len(vecs) == 10
        assert system.jordan_count == 0
        V = np.column_stack(vecs)
        assert np.allclose(V.conj().T @ V, np.eye(10), atol=1e-10)

    def test_one_sided_jordan_count(self):
        q = hr.one_sided_family(1.0, c=1.0, mmax=8)
        est = hr.GalerkinSpectrum(bc="periodic", m_max=5).fit(q)
        assert est.normal_system_.jordan_count >= 1

    def test_cosine_no_jordan(self, galerkin_cos4):
        assert galerkin_cos4.normal_system_.jordan_count == 0
        assert all(p.kind in (PairClass.SIMPLE, PairClass.DOUBLE)
                   for p in galerkin_cos4.pairs_)

    def test_nonsimple_vectors_orthogonal(self, one_sided_single):
        est = hr.GalerkinSpectrum(bc="periodic", m_max=3, K=24).fit(one_sided_single)
        for p in est.normal_system_.pairs:
            if p.kind in (PairClass.DOUBLE, PairClass.JORDAN):
                assert abs(np.vdot(p.vectors[0], p.vectors[1])) <= 1e-10


class TestTailTrend:
    def test_tail_norm_decay(self, cos4):
        # (m8): tail_norm = O(1/m), fitted slope <= -0.8 over m in [5, 25]
        est = hr.GalerkinSpectrum(bc="periodic", m_max=25, K=66).fit(cos4)
        ms = [p.m for p in est.pairs_ if p.m >= 5]
        tails = [max(p.tail_norm) for p in est.pairs_ if p.m >= 5]
        assert hr.fitted_loglog_slope(ms, tails) <= -0.8

    def test_jordan_uv_product_bounded(self):
        # one-sided potentials: |u v| m^2 stays bounded on Jordan indices
        q = hr.one_sided_family(1.0, c=1.0, mmax=12)
        est = hr.GalerkinSpectrum(bc="periodic", m_max=10).fit(q)
        prods = [abs(p.u[0] * p.v[0]) * p.m**2 for p in est.pairs_
                 if p.kind is PairClass.JORDAN]
        assert prods and max(prods) < 10.0
