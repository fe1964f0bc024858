"""
cahn_hilliard.py
----------------
The Cahn-Hilliard part ℒ₃ of the right-hand side and its stage operator.

The double-well ψ(c) = ¼(c²−1)² is split the convex/concave way

    ψ'(c) = ψ₁'(c) + ψ₂'(c),   ψ₁'(c) = 2c,   ψ₂'(c) = c³ − 3c

ψ₁ (linear in c) goes implicit, ψ₂ explicit. The tendency of q = ρc is

    ℒ̃₃ = 2Δ_h c + 𝓜₂(c̃)c̃ − ε Δ_h(D(ρ)⁻¹ Δ_h c)

with 𝓜₂(c̃)c̃ the discrete ∇·(ψ₂''(c̃)∇c̃). With c̃ = c this is Δ_h μ,
μ = ψ'(c) − (ε/ρ)Δc the chemical potential.

Beginner tip: why split?
  Treating the convex half implicitly and the concave half explicitly
  keeps the free energy from blowing up at large time steps, while the
  implicit part stays linear so each stage is one SPD solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from staggered_chns.exceptions import PositivityError
from staggered_chns.grid.fields import unvec_field, vec_field
from staggered_chns.ops.fdops import laplacian2d, laplacian_matrix
from staggered_chns.solve.linear_operator import MatrixFreeOperator


@dataclass(frozen=True)
class PotentialSplit:
    psi1_prime: Callable[[np.ndarray], np.ndarray]
    psi2_prime: Callable[[np.ndarray], np.ndarray]
    psi2_second: Callable[[np.ndarray], np.ndarray]

    @staticmethod
    def psi_prime(c):
        return c**3 - c


EYRE_SPLIT = PotentialSplit(
    psi1_prime=lambda c: 2.0 * c,
    psi2_prime=lambda c: c**3 - 3.0 * c,
    psi2_second=lambda c: 3.0 * c**2 - 3.0,
)


def _check_density(rho: np.ndarray, where: str) -> None:
    if np.any(rho <= 0.0):
        raise PositivityError(f"density ≤ 0 passed to {where}", where=where)


def m2_apply(c_tilde: np.ndarray) -> np.ndarray:
    """(ψ₂''(c)c_x)_x + (ψ₂''(c)c_y)_y with arithmetic-mean face coefficients."""
    c = np.asarray(c_tilde, dtype=float)
    h = 1.0 / c.shape[0]
    k = EYRE_SPLIT.psi2_second(c)

    flux_x = 0.5 * (k[1:, :] + k[:-1, :]) * (c[1:, :] - c[:-1, :]) / h
    flux_y = 0.5 * (k[:, 1:] + k[:, :-1]) * (c[:, 1:] - c[:, :-1]) / h
    flux_x = np.pad(flux_x, ((1, 1), (0, 0)))
    flux_y = np.pad(flux_y, ((0, 0), (1, 1)))
    return (flux_x[1:, :] - flux_x[:-1, :]) / h + (flux_y[:, 1:] - flux_y[:, :-1]) / h


def ch_rhs(rho: np.ndarray, c: np.ndarray, c_tilde: np.ndarray, eps: float) -> np.ndarray:
    _check_density(rho, "ch_rhs")
    lap_c = laplacian2d(c)
    return 2.0 * lap_c + m2_apply(c_tilde) - eps * laplacian2d(lap_c / rho)


def chemical_potential(rho: np.ndarray, c: np.ndarray, eps: float) -> np.ndarray:
    """Discrete μ = ψ'(c) − (ε/ρ)Δ_h c on the primal grid (output only)."""
    _check_density(rho, "chemical_potential")
    return PotentialSplit.psi_prime(c) - eps * laplacian2d(c) / rho


# ── Stage operator ───────────────────────────────────────────────────────────

def ch_system_matrix(rho: np.ndarray, coeff: float, eps: float) -> sp.csr_matrix:
    """Sparse D(ρ) − 2·coeff·Δ_h + coeff·ε·Δ_h D(ρ)⁻¹ Δ_h on vec'd fields."""
    _check_density(rho, "ch_system_matrix")
    lap = laplacian_matrix(rho.shape[0])
    r = vec_field(rho)
    mat = sp.diags(r) - 2.0 * coeff * lap + coeff * eps * (lap @ sp.diags(1.0 / r) @ lap)
    return sp.csr_matrix(mat)


def ch_system_operator(rho: np.ndarray, coeff: float, eps: float) -> MatrixFreeOperator:
    """C ↦ D(ρ)C − 2·coeff·Δ_h C + coeff·ε·Δ_h(D(ρ)⁻¹Δ_h C), symmetric positive definite."""
    rho = np.asarray(rho, dtype=float)
    _check_density(rho, "ch_system_operator")
    shape = rho.shape

    def apply(x: np.ndarray) -> np.ndarray:
        C = unvec_field(x, shape)
        lap_c = laplacian2d(C)
        out = rho * C - 2.0 * coeff * lap_c + coeff * eps * laplacian2d(lap_c / rho)
        return vec_field(out)

    return MatrixFreeOperator(
        n=rho.size,
        apply=apply,
        assemble=lambda: ch_system_matrix(rho, coeff, eps),
        name="Cahn-Hilliard stage operator",
    )
