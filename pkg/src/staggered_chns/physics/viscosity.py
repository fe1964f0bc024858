"""
viscosity.py
------------
Viscous tendencies ℒ₄ and the velocity stage operator.

    ℒ₄(U)₂ = (2ν+λ) v1_xx + ν v1_yy + (ν+λ) v2_xy
    ℒ₄(U)₃ = (2ν+λ) v2_yy + ν v2_xx + (ν+λ) v1_xy

No-slip walls: the normal velocity is 0 on the wall faces; the tangential
velocity uses the ghost −v half a cell outside, which gives the "−3v"
rows next to the walls.

In matrix form ℒ₄ = −A v with the Kronecker blocks

    A11 = (2ν+λ) I_M ⊗ DᵀD + ν (D_extᵀ D*_ext) ⊗ I_{M−1}
    A12 = (ν+λ) D ⊗ Dᵀ
    A21 = (ν+λ) Dᵀ ⊗ D
    A22 = (2ν+λ) DᵀD ⊗ I_M + ν I_{M−1} ⊗ D_extᵀ D*_ext

The runtime path never builds these; it applies the small 1D matrices
from both sides. viscous_blocks() assembles them for the multigrid
smoother and for tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from staggered_chns.exceptions import ContractError, PositivityError
from staggered_chns.grid.fields import unvec_field, vec_field
from staggered_chns.ops.fdops import build_fd_matrices, left, right
from staggered_chns.solve.linear_operator import MatrixFreeOperator


@dataclass(frozen=True)
class ViscousBlocks:
    A11: sp.csr_matrix
    A12: sp.csr_matrix
    A21: sp.csr_matrix
    A22: sp.csr_matrix

    def full(self) -> sp.csr_matrix:
        return sp.bmat([[self.A11, self.A12], [self.A21, self.A22]], format="csr")


def viscous_blocks(M: int, nu: float, lam: float) -> ViscousBlocks:
    fd = build_fd_matrices(M)
    D = fd.D
    DtD = (D.T @ D).tocsr()
    X = (fd.D_ext.T @ fd.Dstar_ext).tocsr()        # M×M, tangential second difference
    I_M = sp.identity(M, format="csr")
    I_m = sp.identity(M - 1, format="csr")
    return ViscousBlocks(
        A11=((2 * nu + lam) * sp.kron(I_M, DtD) + nu * sp.kron(X, I_m)).tocsr(),
        A12=((nu + lam) * sp.kron(D, D.T)).tocsr(),
        A21=((nu + lam) * sp.kron(D.T, D)).tocsr(),
        A22=((2 * nu + lam) * sp.kron(DtD, I_M) + nu * sp.kron(I_m, X)).tocsr(),
    )


# ── Stencil path ─────────────────────────────────────────────────────────────

def _second_normal(v: np.ndarray, h: float) -> np.ndarray:
    """∂² along axis 0 for a face-normal component (zero on the walls)."""
    vp = np.pad(v, ((1, 1), (0, 0)))
    return (vp[2:] - 2.0 * vp[1:-1] + vp[:-2]) / h**2


def _second_tangential(v: np.ndarray, h: float) -> np.ndarray:
    """∂² along axis 1 for a wall-tangential component (ghost = −v)."""
    vp = np.concatenate([-v[:, :1], v, -v[:, -1:]], axis=1)
    return (vp[:, 2:] - 2.0 * vp[:, 1:-1] + vp[:, :-2]) / h**2


def _cross(v2: np.ndarray, h: float) -> np.ndarray:
    """∂x∂y of a y-face field, evaluated on the x-faces."""
    vp = np.pad(v2, ((0, 0), (1, 1)))
    dx = vp[1:, :] - vp[:-1, :]
    return (dx[:, 1:] - dx[:, :-1]) / h**2


def _visc_stencil(v1, v2, nu, lam):
    h = 1.0 / v2.shape[0]
    L4_2 = (
        (2 * nu + lam) * _second_normal(v1, h)
        + nu * _second_tangential(v1, h)
        + (nu + lam) * _cross(v2, h)
    )
    L4_3 = (
        (2 * nu + lam) * _second_normal(v2.T, h).T
        + nu * _second_tangential(v2.T, h).T
        + (nu + lam) * _cross(v1.T, h).T
    )
    return L4_2, L4_3


def _visc_matrix(v1, v2, nu, lam):
    fd = build_fd_matrices(v2.shape[0])
    D = fd.D
    L4_2 = -(
        (2 * nu + lam) * left(D.T, left(D, v1))
        + nu * right(v1, (fd.Dstar_ext.T @ fd.D_ext).tocsr())
        + (nu + lam) * right(left(D.T, v2), D.T)
    )
    L4_3 = -(
        (2 * nu + lam) * right(right(v2, D.T), D)
        + nu * left((fd.D_ext.T @ fd.Dstar_ext).tocsr(), v2)
        + (nu + lam) * right(left(D, v1), D)
    )
    return L4_2, L4_3


def _check_shapes(v1: np.ndarray, v2: np.ndarray) -> None:
    M = v2.shape[0]
    if v1.shape != (M - 1, M) or v2.shape != (M, M - 1):
        raise ContractError(f"velocity shapes {v1.shape}, {v2.shape} do not form a MAC pair")


def visc_apply(v1, v2, nu: float, lam: float, method: str = "stencil"):
    """(ℒ₄(U)₂, ℒ₄(U)₃) = −A (v1, v2)."""
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    _check_shapes(v1, v2)
    if method == "stencil":
        return _visc_stencil(v1, v2, nu, lam)
    if method == "matrix":
        return _visc_matrix(v1, v2, nu, lam)
    raise ContractError(f"method must be 'stencil' or 'matrix', got {method!r}")


# ── Stage operator ───────────────────────────────────────────────────────────

def visc_system_matrix(rho_x, rho_y, coeff: float, nu: float, lam: float) -> sp.csr_matrix:
    M = rho_y.shape[0]
    mass = sp.diags(np.concatenate([vec_field(rho_x), vec_field(rho_y)]))
    return sp.csr_matrix(mass + coeff * viscous_blocks(M, nu, lam).full())


def visc_system_operator(rho_x, rho_y, coeff: float, nu: float, lam: float) -> MatrixFreeOperator:
    """(v1, v2) ↦ blockdiag(D(ρ_x), D(ρ_y)) v + coeff · A v on the stacked vec'd velocities."""
    rho_x = np.asarray(rho_x, dtype=float)
    rho_y = np.asarray(rho_y, dtype=float)
    _check_shapes(rho_x, rho_y)
    if np.any(rho_x <= 0.0) or np.any(rho_y <= 0.0):
        raise PositivityError("staggered density ≤ 0 in the velocity system", where="visc_system_operator")
    n1 = rho_x.size

    def apply(x: np.ndarray) -> np.ndarray:
        v1 = unvec_field(x[:n1], rho_x.shape)
        v2 = unvec_field(x[n1:], rho_y.shape)
        L4_2, L4_3 = _visc_stencil(v1, v2, nu, lam)
        return np.concatenate([
            vec_field(rho_x * v1 - coeff * L4_2),
            vec_field(rho_y * v2 - coeff * L4_3),
        ])

    return MatrixFreeOperator(
        n=n1 + rho_y.size,
        apply=apply,
        assemble=lambda: visc_system_matrix(rho_x, rho_y, coeff, nu, lam),
        name="velocity stage operator",
    )
