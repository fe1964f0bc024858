"""
multigrid.py
------------
Gauss-Seidel smoothing and a geometric V-cycle preconditioner.

Hierarchy: M → M/2 → … while M stays even and M/2 ≥ the coarsest size.
Coarse operators are Galerkin products R A P with bilinear prolongation P
and full-weighting restriction R = Pᵀ/4. Pre-smoothing sweeps forward,
post-smoothing backward, and the coarsest level is solved exactly, so one
cycle is a symmetric linear map and can precondition CG.

Prolongation per field layout (1D factors, combined with kron):
  cell-centred axis   fine = ¾·own coarse cell + ¼·neighbour
                      (missing neighbour at a wall: mirror, or −mirror for
                      a no-slip tangential velocity)
  face axis           even fine faces copy the coarse face, odd ones
                      average the two neighbours (walls are 0)
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, spsolve_triangular, splu

from staggered_chns.exceptions import SolverError
from staggered_chns.solve.linear_operator import as_sparse

log = logging.getLogger(__name__)


# ── Gauss-Seidel ─────────────────────────────────────────────────────────────

def gs_smooth(A, x, b, sweeps: int = 1, reverse: bool = False, _parts=None) -> np.ndarray:
    """
    Lexicographic Gauss-Seidel sweeps x ← x + (D+L)⁻¹(b − Ax).

    reverse=True sweeps in the opposite order, x ← x + (D+U)⁻¹(b − Ax).
    """
    A = as_sparse(A)
    if _parts is None:
        if np.any(A.diagonal() == 0.0):
            raise SolverError("Gauss-Seidel needs a nonzero diagonal")
        _parts = (sp.tril(A, format="csr"), sp.triu(A, format="csr"))
    lower, upper = _parts
    x = np.array(x, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    for _ in range(sweeps):
        r = b - A @ x
        if reverse:
            x += spsolve_triangular(upper, r, lower=False)
        else:
            x += spsolve_triangular(lower, r, lower=True)
    return x


# ── 1D prolongations ─────────────────────────────────────────────────────────

def prolong_cells(nc: int, odd: bool = False) -> sp.csr_matrix:
    """(2nc)×nc cell-centred linear interpolation."""
    wall = -1.0 if odd else 1.0
    P = sp.lil_matrix((2 * nc, nc))
    for k in range(nc):
        P[2 * k, k] += 0.75
        P[2 * k + 1, k] += 0.75
        if k > 0:
            P[2 * k, k - 1] += 0.25
        else:
            P[2 * k, k] += 0.25 * wall
        if k < nc - 1:
            P[2 * k + 1, k + 1] += 0.25
        else:
            P[2 * k + 1, k] += 0.25 * wall
    return P.tocsr()


def prolong_faces(nc: int) -> sp.csr_matrix:
    """(2nc−1)×(nc−1) interpolation between interior faces, zero walls."""
    P = sp.lil_matrix((2 * nc - 1, nc - 1))
    for k in range(nc - 1):
        fine = 2 * k + 1            # fine face index (0-based interior) of coarse face k
        P[fine, k] = 1.0
        P[fine - 1, k] += 0.5
        P[fine + 1, k] += 0.5
    return P.tocsr()


def primal_prolongation(Mc: int) -> sp.csr_matrix:
    """Scalar primal fields (Neumann), vec'd column-major."""
    p = prolong_cells(Mc)
    return sp.kron(p, p).tocsr()


def velocity_prolongation(Mc: int) -> sp.csr_matrix:
    """Stacked (v1, v2) with no-slip walls."""
    cells = prolong_cells(Mc, odd=True)
    faces = prolong_faces(Mc)
    P1 = sp.kron(cells, faces)      # v1: faces along x (fast index), cells along y
    P2 = sp.kron(faces, cells)      # v2: cells along x, faces along y
    return sp.block_diag([P1, P2], format="csr")


PROLONGATIONS = {"primal": primal_prolongation, "velocity": velocity_prolongation}


# ── V-cycle ──────────────────────────────────────────────────────────────────

class MultigridPreconditioner(LinearOperator):
    """One V(pre, post) cycle applied to a residual, starting from zero."""

    def __init__(self, A, prolongations: list[sp.csr_matrix], sweeps: int = 1):
        fine = as_sparse(A)
        super().__init__(dtype=np.float64, shape=fine.shape)
        self.sweeps = sweeps
        self.prolongations = prolongations
        self.ops = [fine]
        for P in prolongations:
            R = P.T / 4.0
            self.ops.append(sp.csr_matrix(R @ self.ops[-1] @ P))

        self._parts = []
        for op in self.ops:
            if np.any(op.diagonal() == 0.0):
                raise SolverError("multigrid level has a zero diagonal entry")
            self._parts.append((sp.tril(op, format="csr"), sp.triu(op, format="csr")))
        self._coarse = splu(sp.csc_matrix(self.ops[-1])) if prolongations else None

    @property
    def levels(self) -> int:
        return len(self.ops)

    def _cycle(self, level: int, b: np.ndarray) -> np.ndarray:
        if self._coarse is not None and level == len(self.ops) - 1:
            return self._coarse.solve(b)
        A = self.ops[level]
        x = gs_smooth(A, np.zeros_like(b), b, self.sweeps, reverse=False, _parts=self._parts[level])
        if level < len(self.ops) - 1:
            P = self.prolongations[level]
            residual = b - A @ x
            x += P @ self._cycle(level + 1, (P.T @ residual) / 4.0)
        return gs_smooth(A, x, b, self.sweeps, reverse=True, _parts=self._parts[level])

    def _matvec(self, r):
        return self._cycle(0, np.asarray(r, dtype=float).ravel())

    def _rmatvec(self, r):
        return self._matvec(r)


def coarse_sizes(M: int, coarsest: int) -> list[int]:
    """Coarse resolutions below M, e.g. 32 → [16, 8, 4] for coarsest 4."""
    sizes = []
    while M % 2 == 0 and M // 2 >= coarsest:
        M //= 2
        sizes.append(M)
    return sizes


def build_preconditioner(A, M: int, layout: str, coarsest: int = 4, sweeps: int = 1):
    """
    V-cycle preconditioner for a stage operator on an M-grid.

    Returns None (plain CG) with a warning when M cannot be halved.
    """
    if M % 2 != 0:
        log.warning("multigrid needs an even M, got %d; falling back to no preconditioner", M)
        return None
    make = PROLONGATIONS[layout]
    prolongations = [make(Mc) for Mc in coarse_sizes(M, coarsest)]
    return MultigridPreconditioner(A, prolongations, sweeps=sweeps)
