# src/config/settings.py
import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

from src.utils.errors import ConfigurationError

# Numeric defaults shared by every module
RANK_TOL = 1e-10          # relative to the largest singular value
PSD_TOL = 1e-10           # absolute floor on partial-transpose eigenvalues
RECON_TOL = 1e-8          # Frobenius reconstruction residual
RANGE_TOL = 1e-8          # mutual projection residual for "same face"
HERMITIAN_TOL = 1e-10     # relative anti-Hermitian part
PD_TOL = 1e-12            # relative minimum eigenvalue of a metric
PPT_BISECTION_TOL = 1e-10
PPT_MAX_ITER = 200
DECISION_TOL = 1e-10      # slack when comparing lambda against a threshold
MAX_TOTAL_DIM = 4096
N_JOBS = 1

ENV_PREFIX = "SEPCONE_"


@dataclass(frozen=True)
class Settings:
    """
    Tolerances and resource limits for one CLI invocation or library session
    """
    rank_tol: float = RANK_TOL
    psd_tol: float = PSD_TOL
    recon_tol: float = RECON_TOL
    max_total_dim: int = MAX_TOTAL_DIM
    n_jobs: int = N_JOBS

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "Settings":
        """
        Build settings from the environment, loading a .env file first

        Parameters:
        -----------
        dotenv_path : str, optional
            Explicit .env file; by default python-dotenv searches upwards from cwd

        Returns:
        --------
        Settings : defaults overridden by any SEPCONE_* variables
        """
        load_dotenv(dotenv_path, override=False)

        return cls(
            rank_tol=_read_env("RANK_TOL", float, RANK_TOL),
            psd_tol=_read_env("PSD_TOL", float, PSD_TOL),
            recon_tol=_read_env("RECON_TOL", float, RECON_TOL),
            max_total_dim=_read_env("MAX_TOTAL_DIM", int, MAX_TOTAL_DIM),
            n_jobs=_read_env("N_JOBS", int, N_JOBS),
        )

    def with_overrides(self, **overrides) -> "Settings":
        """Return a copy with every non-None override applied"""
        changes = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **changes)


def _read_env(name, cast, default):
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = cast(raw)
    except ValueError:
        raise ConfigurationError(f"{ENV_PREFIX}{name} must be {cast.__name__}, got '{raw}'")
    if value <= 0:
        raise ConfigurationError(f"{ENV_PREFIX}{name} must be positive, got '{raw}'")
    return value
