"""
cg.py
-----
Preconditioned conjugate gradient for symmetric positive definite operators.

The loop runs on the recursively updated residual; before reporting, the
true residual ‖b − Ax‖ is recomputed and, if round-off made it drift above
the tolerance, the iteration restarts from the current x.
"""

from __future__ import annotations

import logging

import numpy as np

from staggered_chns.exceptions import NotSpdError
from staggered_chns.solve.linear_operator import SolveReport

log = logging.getLogger(__name__)

MAX_RESTARTS = 3


def cg(A, b, tol: float = 1e-10, max_iter: int | None = None, preconditioner=None, x0=None):
    """
    Solve A x = b to ‖b − Ax‖₂ ≤ tol·‖b‖₂.

    A and preconditioner only need to support `@` with a 1D vector.
    Returns (x, SolveReport); converged=False after max_iter iterations.
    Raises NotSpdError when pᵀAp ≤ 0.
    """
    b = np.asarray(b, dtype=float).ravel()
    n = b.size
    if max_iter is None:
        max_iter = 10 * n
    b_norm = float(np.linalg.norm(b))
    target = tol * b_norm

    x = np.zeros(n) if x0 is None else np.array(x0, dtype=float).ravel()
    if b_norm == 0.0:
        return np.zeros(n), SolveReport(0, 0.0, True, 0.0, tol)

    iterations = 0
    restarts = 0
    while True:
        r = b - A @ x
        res = float(np.linalg.norm(r))
        if res <= target or iterations >= max_iter or restarts > MAX_RESTARTS:
            break
        z = r if preconditioner is None else preconditioner @ r
        p = z.copy()
        rz = float(r @ z)

        while iterations < max_iter:
            Ap = A @ p
            pAp = float(p @ Ap)
            if pAp <= 0.0:
                report = SolveReport(iterations, float(np.linalg.norm(b - A @ x)), False, b_norm, tol)
                raise NotSpdError(f"CG breakdown: pᵀAp = {pAp:.3e} ≤ 0 (operator not SPD)", report)
            alpha = rz / pAp
            x += alpha * p
            r -= alpha * Ap
            iterations += 1
            if np.linalg.norm(r) <= target:
                break
            z = r if preconditioner is None else preconditioner @ r
            rz_new = float(r @ z)
            p = z + (rz_new / rz) * p
            rz = rz_new
        restarts += 1

    report = SolveReport(iterations, res, res <= target, b_norm, tol)
    log.debug("cg: %d iterations, relative residual %.2e", iterations, report.relative_residual)
    return x, report
