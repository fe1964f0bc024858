"""
linear_operator.py
------------------
The "apply to a vector" contract shared by the stage systems and the solvers.

MatrixFreeOperator is a scipy LinearOperator that also knows its
diagonal and, when asked, can assemble itself as a sparse matrix (the
Gauss-Seidel smoother and the multigrid hierarchy need explicit rows).
CG itself only ever calls the matrix-free apply.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator

from staggered_chns.exceptions import ContractError


@dataclass
class SolveReport:
    iterations: int
    final_residual: float
    converged: bool
    rhs_norm: float = 0.0
    tol: float = 0.0

    @property
    def relative_residual(self) -> float:
        return self.final_residual / self.rhs_norm if self.rhs_norm > 0 else 0.0


class MatrixFreeOperator(LinearOperator):
    """
    Symmetric operator given by an apply function on flat vectors.

    apply:    x ↦ A x (length n in, length n out)
    diagonal: () ↦ diag(A), optional
    assemble: () ↦ sparse A, optional
    """

    def __init__(
        self,
        n: int,
        apply: Callable[[np.ndarray], np.ndarray],
        diagonal: Callable[[], np.ndarray] | None = None,
        assemble: Callable[[], sp.spmatrix] | None = None,
        name: str = "operator",
    ):
        super().__init__(dtype=np.float64, shape=(n, n))
        self._apply = apply
        self._diagonal = diagonal
        self._assemble = assemble
        self.name = name

    def _matvec(self, x):
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.shape[0]:
            raise ContractError(f"{self.name}: vector of length {x.size}, expected {self.shape[0]}")
        return self._apply(x)

    def _rmatvec(self, x):
        return self._matvec(x)

    def diagonal(self) -> np.ndarray:
        if self._diagonal is not None:
            return self._diagonal()
        return self.assemble().diagonal()

    def assemble(self) -> sp.csr_matrix:
        if self._assemble is None:
            raise ContractError(f"{self.name} cannot be assembled")
        return sp.csr_matrix(self._assemble())


def dense_matrix(op: LinearOperator) -> np.ndarray:
    """Apply op to every unit vector; for small test operators only."""
    n = op.shape[1]
    eye = np.eye(n)
    return np.column_stack([op @ eye[:, k] for k in range(n)])


def as_sparse(A) -> sp.csr_matrix:
    """Explicit sparse form of an operator, matrix or array."""
    if isinstance(A, MatrixFreeOperator):
        return A.assemble()
    if sp.issparse(A):
        return sp.csr_matrix(A)
    if isinstance(A, np.ndarray):
        return sp.csr_matrix(A)
    raise ContractError(f"cannot obtain explicit rows from {type(A).__name__}")
