"""
forces.py
---------
Body and capillary forces on the momenta.

  gravity   ℒ₁: ρ averaged to the y-faces, times g (y-momentum only)
  capillary ℒ₂: the Korteweg stress of the order parameter

      L2_2 = ε[ ½(c_y²)_x − ½(c_x²)_x − (c_x c_y)_y ]   on x-faces
      L2_3 = ε[ ½(c_x²)_y − ½(c_y²)_y − (c_x c_y)_x ]   on y-faces

c_x, c_y are central differences at the primal points (one-sided at
the walls); c_x c_y lives on the interior cell corners and vanishes on
the walls. The stencil path below is the one the integrator calls; the
matrix path is the same discretization written with the FD matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from staggered_chns.exceptions import ContractError
from staggered_chns.ops.fdops import fd_for, left, right


@dataclass
class CapillaryBlocks:
    L2_2: np.ndarray   # x-faces (M−1)×M
    L2_3: np.ndarray   # y-faces M×(M−1)


def gravity_apply(rho: np.ndarray, g: float) -> np.ndarray:
    """ρ A_Mᵀ g: density averaged onto the y-faces, scaled by g."""
    rho = np.asarray(rho, dtype=float)
    fd = fd_for(rho)
    return right(rho, fd.A.T) * g


# ── Stencil path ─────────────────────────────────────────────────────────────

def _central_x(c: np.ndarray, h: float) -> np.ndarray:
    cx = np.empty_like(c)
    cx[1:-1] = (c[2:] - c[:-2]) / (2.0 * h)
    cx[0] = (c[1] - c[0]) / (2.0 * h)
    cx[-1] = (c[-1] - c[-2]) / (2.0 * h)
    return cx


def _corner_product(c: np.ndarray, h: float) -> np.ndarray:
    """c_x c_y on the interior corners (i+½, j+½), shape (M−1)×(M−1)."""
    cx = (c[1:, 1:] + c[1:, :-1] - c[:-1, 1:] - c[:-1, :-1]) / (2.0 * h)
    cy = (c[1:, 1:] + c[:-1, 1:] - c[1:, :-1] - c[:-1, :-1]) / (2.0 * h)
    return cx * cy


def _capillary_stencil(c: np.ndarray, eps: float) -> CapillaryBlocks:
    M = c.shape[0]
    h = 1.0 / M
    cx2 = _central_x(c, h) ** 2
    cy2 = _central_x(c.T, h).T ** 2
    z = _corner_product(c, h)

    z_y = np.pad(z, ((0, 0), (1, 1)))
    z_y = (z_y[:, 1:] - z_y[:, :-1]) / h
    z_x = np.pad(z, ((1, 1), (0, 0)))
    z_x = (z_x[1:, :] - z_x[:-1, :]) / h

    L2_2 = eps * (
        0.5 * (cy2[1:, :] - cy2[:-1, :]) / h
        - 0.5 * (cx2[1:, :] - cx2[:-1, :]) / h
        - z_y
    )
    L2_3 = eps * (
        0.5 * (cx2[:, 1:] - cx2[:, :-1]) / h
        - 0.5 * (cy2[:, 1:] - cy2[:, :-1]) / h
        - z_x
    )
    return CapillaryBlocks(L2_2=L2_2, L2_3=L2_3)


# ── Matrix path ──────────────────────────────────────────────────────────────

def _capillary_matrix(c: np.ndarray, eps: float) -> CapillaryBlocks:
    fd = fd_for(c)
    D, Dc, A = fd.D, fd.Dc, fd.A
    cx = left(Dc, c)
    cy = right(c, Dc.T)
    # (Dᵀ c Aᵀ) ∘ (A c D) = c_x c_y on the corners
    z = right(left(D.T, c), A.T) * right(left(A, c), D)

    L2_2 = -0.5 * eps * (left(D.T, cy * cy) - left(D.T, cx * cx)) - eps * right(z, D.T)
    L2_3 = -0.5 * eps * (right(cx * cx, D) - right(cy * cy, D)) - eps * left(D, z)
    return CapillaryBlocks(L2_2=L2_2, L2_3=L2_3)


def capillary_apply(c: np.ndarray, eps: float, method: str = "stencil") -> CapillaryBlocks:
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ContractError(f"capillary_apply expects a square primal field, got {c.shape}")
    if method == "stencil":
        return _capillary_stencil(c, eps)
    if method == "matrix":
        return _capillary_matrix(c, eps)
    raise ContractError(f"method must be 'stencil' or 'matrix', got {method!r}")
