"""Complex 1-periodic potentials as finite Fourier sums.

A potential is q(x) = sum_k q_k e^{i 2 pi k x} with q_0 = 0 enforced at
construction (a supplied mean is recorded separately as a spectral shift).
Everything downstream is coefficient-driven: coefficient lookup, the decay
modulus rho(m) built from partial oscillatory integrals, and the builtin
test families.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FrequencyRangeError, PotentialSpecError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PotentialModel:
    """Immutable coefficient model; all operations on it are pure.

    coeffs[j] holds q_k for k = j - max_frequency; the k = 0 entry is always
    zero, with any supplied mean kept in mean_shift.
    """

    coeffs: np.ndarray
    max_frequency: int
    mean_shift: complex = 0.0 + 0.0j
    is_real: bool = False
    is_sampled: bool = False
    sample_grid: np.ndarray | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != (2 * self.max_frequency + 1,):
            raise PotentialSpecError(
                f"coeffs must have length 2*max_frequency+1 = {2 * self.max_frequency + 1}"
            )
        coeffs = coeffs.copy()
        coeffs[self.max_frequency] = 0.0  # q_0 = 0 normalization
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        if self.sample_grid is not None:
            grid = np.asarray(self.sample_grid, dtype=complex)
            grid.setflags(write=False)
            object.__setattr__(self, "sample_grid", grid)

    @property
    def coeff_sup(self) -> float:
        """M = sup_k |q_k|."""
        return float(np.max(np.abs(self.coeffs))) if self.coeffs.size else 0.0

    def support(self) -> np.ndarray:
        """Frequencies k with q_k != 0."""
        ks = np.arange(-self.max_frequency, self.max_frequency + 1)
        return ks[np.abs(self.coeffs) > 0.0]

    def support_amplitudes(self) -> tuple[np.ndarray, np.ndarray]:
        ks = self.support()
        return ks, self.coeffs[ks + self.max_frequency]

    def coefficient(self, m: int) -> complex:
        """Fourier coefficient q_m = (q, e^{i 2 m pi x}); zero beyond the stored
        band for pure Fourier models, out-of-range error beyond Nyquist for
        sampled ones."""
        if abs(m) <= self.max_frequency:
            return complex(self.coeffs[m + self.max_frequency])
        if self.is_sampled:
            raise FrequencyRangeError(
                f"|m|={abs(m)} beyond Nyquist limit {self.max_frequency} of the sample grid"
            )
        return 0.0 + 0.0j

    def coefficient_array(self, ms: np.ndarray) -> np.ndarray:
        """Vectorized coefficient lookup (zero outside the stored band)."""
        ms = np.asarray(ms)
        out = np.zeros(ms.shape, dtype=complex)
        inside = np.abs(ms) <= self.max_frequency
        out[inside] = self.coeffs[ms[inside] + self.max_frequency]
        return out

    def evaluate(self, x) -> np.ndarray | complex:
        """q(x) including the recorded mean, by direct trig summation."""
        ks, amps = self.support_amplitudes()
        xs = np.asarray(x, dtype=float)
        scalar = xs.ndim == 0
        vals = np.exp(1j * TWO_PI * np.outer(np.atleast_1d(xs), ks)) @ amps + self.mean_shift
        return complex(vals[0]) if scalar else vals


# ---------------------------------------------------------------------------
# constructors and builtin families

def _from_pairs(pairs, real=False, sampled=False, grid=None, mean=0.0 + 0.0j):
    if pairs:
        fmax = max(abs(int(k)) for k, _ in pairs)
    else:
        fmax = 0
    coeffs = np.zeros(2 * fmax + 1, dtype=complex)
    for k, amp in pairs:
        k = int(k)
        if k == 0:
            mean = mean + complex(amp)
            continue
        coeffs[k + fmax] += complex(amp)
    if real:
        for k in range(1, fmax + 1):  # q_{-k} = conj(q_k)
            if coeffs[-k + fmax] == 0.0:
                coeffs[-k + fmax] = np.conj(coeffs[k + fmax])
            elif abs(coeffs[-k + fmax] - np.conj(coeffs[k + fmax])) > 1e-14:
                raise PotentialSpecError(f"realness flag set but q_{-k} != conj(q_{k})")
    return PotentialModel(
        coeffs=coeffs,
        max_frequency=fmax,
        mean_shift=complex(mean),
        is_real=bool(real),
        is_sampled=sampled,
        sample_grid=grid,
    )


def zero_potential() -> PotentialModel:
    return PotentialModel(coeffs=np.zeros(1, dtype=complex), max_frequency=0)


def trig_potential(pairs, real=False) -> PotentialModel:
    """Finite trig polynomial from (frequency, amplitude) pairs."""
    return _from_pairs(list(pairs), real=real)


def cosine_potential(freq: int, amplitude: float = 2.0) -> PotentialModel:
    """amplitude * cos(2 pi freq x) as a real trig polynomial."""
    a = amplitude / 2.0
    return _from_pairs([(freq, a), (-freq, a)], real=True)


def _family_freqs(m_values: np.ndarray, parity: str) -> np.ndarray:
    if parity == "even":
        return 2 * m_values
    if parity == "odd":
        return 2 * m_values + 1
    raise PotentialSpecError(f"parity must be 'even' or 'odd', got {parity!r}")


def power_family(alpha: float, c: float = 1.0, mmax: int = 20, parity: str = "even") -> PotentialModel:
    """Symmetric power law q_{+-n(m)} = c/m^alpha at n(m) = 2m (even) or 2m+1 (odd)."""
    ms = np.arange(1, mmax + 1)
    freqs = _family_freqs(ms, parity)
    amps = c / ms.astype(float) ** alpha
    pairs = [(int(f), a) for f, a in zip(freqs, amps)]
    pairs += [(-int(f), a) for f, a in zip(freqs, amps)]
    return _from_pairs(pairs, real=True)


def asym_power_family(alpha: float, beta: float, c: float = 1.0, mmax: int = 20,
                      parity: str = "even") -> PotentialModel:
    """Asymmetric power law: q_{+n(m)} = c/m^alpha, q_{-n(m)} = c/m^beta."""
    ms = np.arange(1, mmax + 1)
    freqs = _family_freqs(ms, parity)
    pairs = [(int(f), c / float(m) ** alpha) for f, m in zip(freqs, ms)]
    pairs += [(-int(f), c / float(m) ** beta) for f, m in zip(freqs, ms)]
    return _from_pairs(pairs)


def one_sided_family(alpha: float = 1.0, c: float = 1.0, mmax: int = 20,
                     parity: str = "even") -> PotentialModel:
    """Positive-frequency-only potential; produces persistently defective spectra."""
    ms = np.arange(1, mmax + 1)
    freqs = _family_freqs(ms, parity)
    pairs = [(int(f), c / float(m) ** alpha) for f, m in zip(freqs, ms)]
    return _from_pairs(pairs)


def from_samples(values) -> PotentialModel:
    """Potential from complex samples on a uniform power-of-two grid over [0, 1).

    Coefficients are the DFT values (trapezoid-exact for band-limited inputs);
    the DFT mean is removed and recorded as the spectral shift.
    """
    grid = np.asarray(values, dtype=complex)
    n = grid.size
    if n < 2 or (n & (n - 1)) != 0:
        raise PotentialSpecError(f"sample grid length must be a power of two >= 2, got {n}")
    spec = np.fft.fft(grid) / n
    fmax = n // 2 - 1
    coeffs = np.zeros(2 * fmax + 1, dtype=complex)
    for k in range(1, fmax + 1):
        coeffs[k + fmax] = spec[k]
        coeffs[-k + fmax] = spec[n - k]
    mean = complex(spec[0])
    is_real = bool(np.max(np.abs(grid.imag)) == 0.0)
    return PotentialModel(
        coeffs=coeffs,
        max_frequency=fmax,
        mean_shift=mean,
        is_real=is_real,
        is_sampled=True,
        sample_grid=grid,
    )


def from_spec(spec) -> PotentialModel:
    """Potential from its JSON document form.

    Accepted types: trig, power, asym-power, one-sided, samples.
    """
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise PotentialSpecError(f"potential spec is not valid JSON: {exc}") from exc
    if isinstance(spec, PotentialModel):
        return spec
    if not isinstance(spec, dict) or "type" not in spec:
        raise PotentialSpecError("potential spec must be an object with a 'type' key")
    kind = spec["type"]
    try:
        if kind == "trig":
            pairs = [(int(k), complex(re, im)) for k, re, im in spec.get("coeffs", [])]
            return trig_potential(pairs, real=bool(spec.get("real", False)))
        if kind == "power":
            return power_family(float(spec["alpha"]), float(spec.get("c", 1.0)),
                                int(spec["mmax"]), spec.get("parity", "even"))
        if kind == "asym-power":
            return asym_power_family(float(spec["alpha"]), float(spec["beta"]),
                                     float(spec.get("c", 1.0)), int(spec["mmax"]),
                                     spec.get("parity", "even"))
        if kind == "one-sided":
            return one_sided_family(float(spec.get("alpha", 1.0)), float(spec.get("c", 1.0)),
                                    int(spec["mmax"]), spec.get("parity", "even"))
        if kind == "samples":
            vals = spec["values"]
            vals = [complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)
                    for v in vals]
            return from_samples(vals)
    except (KeyError, TypeError, ValueError) as exc:
        raise PotentialSpecError(f"malformed {kind!r} potential spec: {exc}") from exc
    raise PotentialSpecError(f"unknown potential type {kind!r}")


def fourier_coefficient(q: PotentialModel, m: int) -> complex:
    """q_m = (q, e^{i 2 m pi x}) = int_0^1 q(x) e^{-i 2 m pi x} dx."""
    return q.coefficient(m)


# ---------------------------------------------------------------------------
# rho(m): decay modulus from partial oscillatory integrals

@dataclass(frozen=True)
class RhoEntry:
    rho: float
    branch: str      # "minus": integrand q e^{-i 2 n pi t}; "plus": q e^{+i 2 n pi t}
    witness_x: float


@dataclass(frozen=True)
class RhoTable:
    """m -> rho(m) with the maximizing branch and witness abscissa."""

    entries: dict
    bc_parity: str   # "periodic" (frequency 2m) | "antiperiodic" (2m+1)

    def rho(self, m: int) -> float:
        return self.entries[m].rho

    def ms(self) -> list:
        return sorted(self.entries)


def partial_integral(q: PotentialModel, freq: int, xs: np.ndarray) -> np.ndarray:
    """int_0^x q(t) e^{-i 2 pi freq t} dt on the grid xs, term-by-term exact.

    Resonant terms (k = freq) integrate to q_k * x; the rest to
    q_k (e^{i 2 pi (k - freq) x} - 1)/(i 2 pi (k - freq)).
    """
    ks, amps = q.support_amplitudes()
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape, dtype=complex)
    if ks.size == 0:
        return out
    j = ks - freq
    res = j == 0
    if np.any(res):
        out += amps[res].sum() * xs
    if np.any(~res):
        jn = j[~res]
        phases = np.exp(1j * TWO_PI * np.outer(xs, jn)) - 1.0
        out += phases @ (amps[~res] / (1j * TWO_PI * jn))
    return out


def _golden_max(f, a: float, b: float, tol: float = 1e-12) -> tuple[float, float]:
    """Golden-section maximum of f on [a, b]; returns (x, f(x))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = f(x1)
    x = 0.5 * (a + b)
    return x, f(x)


def _theta(parity: str) -> int:
    if parity in ("periodic", 0):
        return 0
    if parity in ("antiperiodic", 1):
        return 1
    raise PotentialSpecError(f"parity must be 'periodic' or 'antiperiodic', got {parity!r}")


def rho(q: PotentialModel, m: int, parity: str = "periodic",
        grid_size: int | None = None) -> RhoEntry:
    """Decay modulus rho(m): max over both branches of sup_x of the partial
    oscillatory integral of q at frequency +-(2m + theta)*2pi.

    The partial integral is an exact trig polynomial evaluated on a dense grid
    and refined by golden-section search around the grid maximizer.
    """
    if m < 1:
        raise ValueError("rho requires m >= 1")
    theta = _theta(parity)
    n = 2 * m + theta
    if grid_size is None:
        grid_size = max(4096, 64 * max(q.max_frequency, n))
    xs = np.linspace(0.0, 1.0, grid_size + 1)
    best = RhoEntry(rho=-1.0, branch="minus", witness_x=0.0)
    for branch, freq in (("minus", n), ("plus", -n)):
        vals = np.abs(partial_integral(q, freq, xs))
        i = int(np.argmax(vals))
        lo = xs[max(i - 1, 0)]
        hi = xs[min(i + 1, grid_size)]
        fn = lambda x: float(np.abs(partial_integral(q, freq, np.array([x]))[0]))
        x_star, v_star = _golden_max(fn, lo, hi)
        if vals[i] >= v_star:
            x_star, v_star = float(xs[i]), float(vals[i])
        if v_star > best.rho:
            best = RhoEntry(rho=v_star, branch=branch, witness_x=x_star)
    return best


def rho_table(q: PotentialModel, ms, parity: str = "periodic",
              grid_size: int | None = None) -> RhoTable:
    entries = {int(m): rho(q, int(m), parity, grid_size) for m in ms}
    return RhoTable(entries=entries, bc_parity="periodic" if _theta(parity) == 0 else "antiperiodic")
