"""
fdops.py
--------
One-dimensional finite-difference matrices and the 2D Neumann Laplacian.

All matrices are scipy.sparse CSR with integer stencils scaled by the
grid spacing:

  Dc        M×M       central difference, one-sided half-weights at the ends   · 1/(2h)
  D         M×(M−1)   dual derivative (+1 on the diagonal, −1 below)          · 1/h
  Dstar     M×(M−1)   as D with the end entries doubled                       · 1/h
  L         M×M       Laplacian with homogeneous Neumann ends, L = −D Dᵀ      · 1/h²
  A         (M−1)×M   two-point average                                       · ½
  D_ext, Dstar_ext    the (M+1)×M versions used by the viscous blocks

Sign convention: (D f)_i = f_i − f_{i−1} over h, so Dᵀ acting on a primal
column gives −∂/∂x at the faces.

Beginner tip: field layout:
  A primal field f is an M×M array, rows = x index, columns = y index.
  "L @ f" differentiates along x, "f @ L.T" along y.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from staggered_chns.exceptions import ConfigurationError, ContractError
from staggered_chns.grid.mac_grid import MIN_CELLS


@dataclass(frozen=True)
class FdMatrices:
    M: int
    h: float
    Dc: sp.csr_matrix
    D: sp.csr_matrix
    Dstar: sp.csr_matrix
    L: sp.csr_matrix
    A: sp.csr_matrix
    D_ext: sp.csr_matrix
    Dstar_ext: sp.csr_matrix


def _dual_derivative(n: int, doubled_ends: bool) -> sp.csr_matrix:
    """n×(n−1) integer stencil: +1 on the diagonal, −1 one below."""
    D = sp.lil_matrix((n, n - 1))
    for k in range(n - 1):
        D[k, k] = 1.0
        D[k + 1, k] = -1.0
    if doubled_ends:
        D[0, 0] = 2.0
        D[n - 1, n - 2] = -2.0
    return D.tocsr()


@lru_cache(maxsize=32)
def build_fd_matrices(M: int, h: float | None = None) -> FdMatrices:
    if M < MIN_CELLS:
        raise ConfigurationError(f"M must be ≥ {MIN_CELLS}, got {M}")
    if h is None:
        h = 1.0 / M

    Dc = sp.lil_matrix((M, M))
    Dc[0, 0], Dc[0, 1] = -1.0, 1.0
    for i in range(1, M - 1):
        Dc[i, i - 1], Dc[i, i + 1] = -1.0, 1.0
    Dc[M - 1, M - 2], Dc[M - 1, M - 1] = -1.0, 1.0

    L = sp.diags(
        [np.ones(M - 1), np.full(M, -2.0), np.ones(M - 1)], [-1, 0, 1], format="lil"
    )
    L[0, 0] = -1.0
    L[M - 1, M - 1] = -1.0

    A = sp.diags([np.ones(M - 1), np.ones(M - 1)], [0, 1], shape=(M - 1, M))

    return FdMatrices(
        M=M,
        h=h,
        Dc=(Dc.tocsr() / (2.0 * h)).tocsr(),
        D=(_dual_derivative(M, False) / h).tocsr(),
        Dstar=(_dual_derivative(M, True) / h).tocsr(),
        L=(L.tocsr() / h**2).tocsr(),
        A=(A.tocsr() * 0.5).tocsr(),
        D_ext=(_dual_derivative(M + 1, False) / h).tocsr(),
        Dstar_ext=(_dual_derivative(M + 1, True) / h).tocsr(),
    )


def fd_for(field: np.ndarray) -> FdMatrices:
    """FD matrices matching a primal field (M inferred from its shape)."""
    if field.ndim != 2 or field.shape[0] != field.shape[1]:
        raise ContractError(f"expected a square primal field, got shape {field.shape}")
    return build_fd_matrices(field.shape[0])


# ── Products with sparse factors on either side ──────────────────────────────

def left(mat: sp.spmatrix, f: np.ndarray) -> np.ndarray:
    """mat @ f as a dense array."""
    return np.asarray(mat @ f)


def right(f: np.ndarray, mat: sp.spmatrix) -> np.ndarray:
    """f @ mat as a dense array."""
    return np.asarray((mat.T @ f.T).T)


# ── 2D operators ─────────────────────────────────────────────────────────────

def laplacian2d(f: np.ndarray) -> np.ndarray:
    """Δ_h f = L f + f Lᵀ with homogeneous Neumann walls."""
    f = np.asarray(f, dtype=float)
    fd = fd_for(f)
    return left(fd.L, f) + right(f, fd.L.T)


@lru_cache(maxsize=16)
def laplacian_matrix(M: int) -> sp.csr_matrix:
    """Sparse Δ_h acting on vec'd primal fields: I⊗L + L⊗I."""
    L = build_fd_matrices(M).L
    eye = sp.identity(M, format="csr")
    return (sp.kron(eye, L) + sp.kron(L, eye)).tocsr()


def diag_apply(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """(D(v) w)_{i,j} = v_{i,j} w_{i,j}."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    if v.shape != w.shape:
        raise ContractError(f"diag_apply shape mismatch: {v.shape} vs {w.shape}")
    return v * w
