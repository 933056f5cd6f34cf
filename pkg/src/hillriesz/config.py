"""Run configuration, decision thresholds, and worker-count control."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field, replace

from .errors import ConfigError

ENV_THREADS = "HILLRIESZ_THREADS"


@dataclass(frozen=True)
class Thresholds:
    """All finite-window decision thresholds in one place.

    Asymptotic statements are tested as bounded-ratio-plus-slope checks over a
    window; these constants pin every such check.
    """

    ratio_band_max: float = 20.0        # holds requires ratio_max/ratio_min <= this
    drift_holds: float = 0.15           # |log-log slope| <= this => no drift
    drift_indeterminate: float = 0.30   # slope in (holds, this] => indeterminate
    gram_slope_consistent: float = 0.2  # log(cond) vs log(N) slope at or below => bounded
    gram_slope_fail: float = 0.5        # slope at or above => growth (basis failure)
    min_simple_pairs: int = 4           # fewer simple pairs in window => indeterminate


def default_truncation(m_max: int, max_frequency: int) -> int:
    """Default Galerkin half-width: coupling of target modes to the boundary
    stays below solver tolerance."""
    return max(2 * m_max + 16, 4 * max_frequency)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration for a full diagnostic run."""

    potential: dict = field(default_factory=lambda: {"type": "trig", "coeffs": []})
    bc: str = "periodic"
    m_max: int = 12
    m_asym: int = 5
    K: int | None = None
    trunc: int = 2000
    N_list: tuple[int, ...] = (4, 8, 16)
    tol_eig: float = 1e-11
    tol_ode: float = 1e-12
    tol_root: float = 1e-10
    tol_cluster: float = 1e-6
    tol_rank: float = 1e-4
    rho_grid: int | None = None
    out: str | None = None
    fmt: str = "json"
    strict: bool = False
    thresholds: Thresholds = field(default_factory=Thresholds)

    def validate(self) -> "RunConfig":
        if self.bc not in ("periodic", "antiperiodic"):
            raise ConfigError(f"bc must be 'periodic' or 'antiperiodic', got {self.bc!r}")
        if self.m_max < 1:
            raise ConfigError("m_max must be >= 1")
        if not self.m_asym < self.m_max:
            raise ConfigError(f"m_asym ({self.m_asym}) must be < m_max ({self.m_max})")
        if self.K is not None and self.K < 2 * self.m_max + 16:
            raise ConfigError(f"K ({self.K}) must be >= 2*m_max + 16 = {2 * self.m_max + 16}")
        if list(self.N_list) != sorted(set(self.N_list)) or len(self.N_list) == 0:
            raise ConfigError("N_list must be strictly increasing and non-empty")
        available = 2 * (self.m_max - self.m_asym + 1)
        if max(self.N_list) > available:
            raise ConfigError(
                f"max(N_list)={max(self.N_list)} exceeds the {available} root functions "
                f"available from indices [{self.m_asym}, {self.m_max}]"
            )
        if self.trunc < 1:
            raise ConfigError("trunc must be >= 1")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format must be 'json' or 'csv', got {self.fmt!r}")
        if not (1e-13 <= self.tol_ode <= 1e-6):
            raise ConfigError("tol_ode must lie in [1e-13, 1e-6]")
        return self

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        data = dict(data)
        thr = data.pop("thresholds", None)
        unknown = set(data) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "N_list" in data:
            data["N_list"] = tuple(int(n) for n in data["N_list"])
        cfg = cls(**data)
        if thr is not None:
            cfg = replace(cfg, thresholds=Thresholds(**thr))
        return cfg.validate()

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def resolved(self) -> dict:
        """Plain-dict form embedded in every output document."""
        doc = asdict(self)
        doc["N_list"] = list(self.N_list)
        return doc


def worker_count(n_jobs: int | None = None) -> int:
    """Worker cap: min(requested, HILLRIESZ_THREADS, cpu count)."""
    cap = os.cpu_count() or 1
    env = os.environ.get(ENV_THREADS)
    if env:
        try:
            cap = min(cap, max(1, int(env)))
        except ValueError:
            raise ConfigError(f"{ENV_THREADS} must be an integer, got {env!r}")
    if n_jobs is not None:
        cap = min(cap, max(1, n_jobs))
    return cap
