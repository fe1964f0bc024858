"""
tableaus.py
-----------
Registry of partitioned IMEX Runge-Kutta pairs.

Each pair couples an explicit tableau (α̃, γ̃) for convection and the
concave Cahn-Hilliard part with a diagonally implicit one (α, γ) for
everything else. Both share the weights β.

  ee_ie   forward/backward Euler, first order
  dirksa  second order, stiffly accurate, α_ij ≥ 0 (s = 1/√2)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from staggered_chns.exceptions import ConfigurationError

TOL = 1e-14


@dataclass(frozen=True)
class ButcherPair:
    name: str
    alpha_tilde: np.ndarray
    gamma_tilde: np.ndarray
    alpha: np.ndarray
    gamma: np.ndarray
    beta: np.ndarray
    order: int = 1

    @property
    def s(self) -> int:
        return len(self.beta)

    def validate(self) -> None:
        s = self.s
        for label, arr in (("alpha_tilde", self.alpha_tilde), ("alpha", self.alpha)):
            if arr.shape != (s, s):
                raise ConfigurationError(f"{self.name}: {label} must be {s}×{s}")
        if np.any(np.triu(self.alpha_tilde) != 0.0):
            raise ConfigurationError(f"{self.name}: explicit tableau must be strictly lower triangular")
        if np.any(np.triu(self.alpha, 1) != 0.0) or np.any(np.diag(self.alpha) < 0.0):
            raise ConfigurationError(f"{self.name}: implicit tableau must be lower triangular with α_ii ≥ 0")
        if not np.allclose(self.alpha_tilde.sum(axis=1), self.gamma_tilde, atol=TOL):
            raise ConfigurationError(f"{self.name}: explicit row sums differ from γ̃")
        if not np.allclose(self.alpha.sum(axis=1), self.gamma, atol=TOL):
            raise ConfigurationError(f"{self.name}: implicit row sums differ from γ")
        if abs(self.beta.sum() - 1.0) > TOL:
            raise ConfigurationError(f"{self.name}: weights must sum to 1")
        if self.order >= 2:
            for label, gam in (("explicit", self.gamma_tilde), ("implicit", self.gamma)):
                if abs(self.beta @ gam - 0.5) > TOL:
                    raise ConfigurationError(f"{self.name}: {label} tableau fails Σβγ = ½")


def _ee_ie() -> ButcherPair:
    return ButcherPair(
        name="ee_ie",
        alpha_tilde=np.array([[0.0]]),
        gamma_tilde=np.array([0.0]),
        alpha=np.array([[1.0]]),
        gamma=np.array([1.0]),
        beta=np.array([1.0]),
        order=1,
    )


def _dirksa() -> ButcherPair:
    s = 1.0 / np.sqrt(2.0)
    return ButcherPair(
        name="dirksa",
        alpha_tilde=np.array([[0.0, 0.0], [1.0 + s, 0.0]]),
        gamma_tilde=np.array([0.0, 1.0 + s]),
        alpha=np.array([[1.0 - s, 0.0], [s, 1.0 - s]]),
        gamma=np.array([1.0 - s, 1.0]),
        beta=np.array([s, 1.0 - s]),
        order=2,
    )


TABLEAUS = {"ee_ie": _ee_ie, "dirksa": _dirksa}


def available_tableaus() -> list[str]:
    return list(TABLEAUS)


def tableau(name: str) -> ButcherPair:
    if name not in TABLEAUS:
        raise ConfigurationError(f"Unknown scheme {name!r}; choose from {available_tableaus()}")
    pair = TABLEAUS[name]()
    pair.validate()
    return pair
