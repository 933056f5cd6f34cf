"""Spectral diagnostics for non-self-adjoint periodic and anti-periodic
Hill operators with complex potentials.

Two independent spectral routes (Fourier-basis matrix, Floquet discriminant),
the decay modulus rho(m) with its limit conditions, the correction-sum and
residual machinery, and Gram-section frame diagnostics feeding an empirical
Riesz-basis verdict.
"""

from .asymptotics import (
    AsymptoticReport,
    AuxIntegrands,
    IDecomposition,
    a1_integral_form,
    asymptotic_report,
    aux_integrands,
    correction_sum,
    deviation_ratios,
    harmonic_sum,
    i_decomposition,
    residual_estimate,
    uv_balance,
)
from .config import RunConfig, Thresholds, default_truncation, worker_count
from .diagnostics import (
    BasisVerdict,
    GramDiagnostics,
    SimplicityReport,
    UVCheck,
    basis_verdict,
    frame_bounds,
    gram_diagnostics,
    gram_matrix,
    simplicity_report,
    uv_equivalence_check,
)
from .estimators import FloquetOracle, GalerkinSpectrum, RieszBasisDiagnostic, as_potential
from .floquet import (
    ComparisonReport,
    MonodromyMatrix,
    OracleResult,
    compare_spectra,
    discriminant_batch,
    find_bc_eigenvalues,
    floquet_discriminant,
    integrate_monodromy,
)
from .galerkin import (
    GalerkinMatrix,
    NormalSystem,
    PairClass,
    SpectralPair,
    build_matrix,
    classify_multiplicity,
    free_eigenvalue,
    normal_system,
    pair_eigenvalues,
    solve_spectrum,
    uv_coefficients,
)
from .potential import (
    PotentialModel,
    RhoEntry,
    RhoTable,
    asym_power_family,
    cosine_potential,
    fourier_coefficient,
    from_samples,
    from_spec,
    one_sided_family,
    power_family,
    rho,
    rho_table,
    trig_potential,
    zero_potential,
)
from .sequences import (
    DecayLimitReport,
    EquivalenceVerdict,
    check_decay_condition,
    check_equivalence,
    fitted_loglog_slope,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
