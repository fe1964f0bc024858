"""
params.py
---------
Physical constants of the isentropic two-phase model and the pressure law.

    p(ρ)  = Cp · ρ^γ
    p'(ρ) = Cp · γ · ρ^(γ−1)

The sound speed √p'(ρ) bounds the characteristic speeds used by the
numerical fluxes and by the time-step rule.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from staggered_chns.exceptions import ConfigurationError


@dataclass(frozen=True)
class ModelParams:
    gamma: float = 5.0 / 3.0
    Cp: float = 1.0
    eps: float = 1e-4
    nu: float = 1.0
    lam: float = 0.1     # bulk viscosity λ ("lambda" in config files)
    g: float = -10.0     # acts on the y-momentum only

    def __post_init__(self):
        if not self.gamma > 1:
            raise ConfigurationError(f"gamma must be > 1, got {self.gamma}")
        if not self.Cp > 0:
            raise ConfigurationError(f"Cp must be > 0, got {self.Cp}")
        if not self.eps > 0:
            raise ConfigurationError(f"eps must be > 0, got {self.eps}")
        if not self.nu > 0:
            raise ConfigurationError(f"nu must be > 0, got {self.nu}")
        if not self.lam >= 0:
            raise ConfigurationError(f"lambda must be ≥ 0, got {self.lam}")
        if not np.isfinite(self.g):
            raise ConfigurationError(f"g must be finite, got {self.g}")

    def with_overrides(self, **overrides) -> "ModelParams":
        """Copy with some constants replaced; None values are ignored."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    # ── Pressure law ─────────────────────────────────────────────────────────

    def pressure(self, rho: np.ndarray) -> np.ndarray:
        return self.Cp * np.power(rho, self.gamma)

    def pressure_derivative(self, rho: np.ndarray) -> np.ndarray:
        return self.Cp * self.gamma * np.power(rho, self.gamma - 1.0)

    def sound_speed(self, rho: np.ndarray) -> np.ndarray:
        return np.sqrt(self.pressure_derivative(rho))
