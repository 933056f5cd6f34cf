"""Shared fixtures; the heavy pipeline runs are session-scoped and reused."""

import numpy as np
import pytest

import hillriesz as hr


@pytest.fixture(scope="session")
def cos4():
    """2 cos(4 pi x): q_{+-2} = 1."""
    return hr.cosine_potential(2, 2.0)


@pytest.fixture(scope="session")
def one_sided_single():
    """e^{i 4 pi x}: q_2 = 1 only."""
    return hr.trig_potential([(2, 1.0)])


@pytest.fixture(scope="session")
def galerkin_cos4(cos4):
    return hr.GalerkinSpectrum(bc="periodic", m_max=10, K=64).fit(cos4)


@pytest.fixture(scope="session")
def sym_run():
    """Symmetric power-law family (alpha = 1), periodic, the forward fixture."""
    q = hr.power_family(1.0, c=4.0, mmax=40)
    est = hr.RieszBasisDiagnostic(bc="periodic", m_max=36, m_asym=3, K=176,
                                  N_list=(8, 16, 32, 64)).fit(q)
    return q, est


@pytest.fixture(scope="session")
def asym_run():
    """Asymmetric power-law family (alpha, beta) = (1, 2), periodic."""
    q = hr.asym_power_family(1.0, 2.0, c=4.0, mmax=40)
    est = hr.RieszBasisDiagnostic(bc="periodic", m_max=36, m_asym=3, K=176,
                                  N_list=(8, 16, 32, 64)).fit(q)
    return q, est


@pytest.fixture(scope="session")
def sym_run_anti():
    q = hr.power_family(1.0, c=4.0, mmax=40, parity="odd")
    est = hr.RieszBasisDiagnostic(bc="antiperiodic", m_max=36, m_asym=3, K=176,
                                  N_list=(8, 16, 32, 64)).fit(q)
    return q, est


@pytest.fixture(scope="session")
def asym_run_anti():
    q = hr.asym_power_family(1.0, 2.0, c=4.0, mmax=40, parity="odd")
    est = hr.RieszBasisDiagnostic(bc="antiperiodic", m_max=36, m_asym=3, K=176,
                                  N_list=(8, 16, 32, 64)).fit(q)
    return q, est


def loglog_slope(ms, values):
    ms = np.asarray(ms, dtype=float)
    vals = np.asarray(values, dtype=float)
    mask = vals > 0
    return np.polyfit(np.log(ms[mask]), np.log(vals[mask]), 1)[0]
