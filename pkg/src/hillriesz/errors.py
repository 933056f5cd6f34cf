"""Exception hierarchy shared across the package."""


class HillRieszError(Exception):
    """Base class for all package errors."""


class ConfigError(HillRieszError):
    """Invalid run configuration (bad window, K too small, N_list not increasing, ...)."""


class PotentialSpecError(ConfigError):
    """Malformed potential specification (JSON form or constructor arguments)."""


class FrequencyRangeError(HillRieszError):
    """Requested Fourier coefficient beyond the Nyquist range of a sampled potential."""


class TruncationError(ConfigError):
    """Galerkin truncation too small relative to the potential's frequency support."""


class SolverFailureError(HillRieszError):
    """Dense eigensolver failed or violated the residual contract."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PairingAmbiguityError(HillRieszError):
    """A pairing disc contained a number of eigenvalues other than two."""

    def __init__(self, m, count):
        super().__init__(
            f"pairing disc for m={m} holds {count} eigenvalues, expected 2 "
            "(K too small or potential too large for the asymptotic regime)"
        )
        self.m = m
        self.count = count


class StiffnessError(HillRieszError):
    """ODE step-size underflow; |lambda| beyond the configured range."""


class DiscAnomalyError(HillRieszError):
    """Argument-principle root count in a search disc was not 1 or 2."""

    def __init__(self, m, count):
        super().__init__(f"contour root count in disc m={m} is {count}, expected 1 or 2")
        self.m = m
        self.count = count


class NearResonanceError(HillRieszError):
    """A sum denominator fell below the isolation floor."""

    def __init__(self, index, value):
        super().__init__(f"denominator at index {index} has modulus {abs(value):.3e} below isolation floor")
        self.index = index
        self.value = value


class GramSizeError(HillRieszError):
    """Requested Gram section exceeds the available root functions."""


class InputError(HillRieszError):
    """An operation received input violating its contract (e.g. non-Hermitian Gram)."""
