"""
errors.py
---------
Error measure and experimental order of convergence for the order test.

    e_M   = (1/M²) Σ_{k,i,j} |u_k,i,j − u_k(x_i,j, T)|      over ρ, m1, m2, q
    EOC_M = log₂(e_M / e_2M)
"""

from __future__ import annotations

import math

import numpy as np

from staggered_chns.exceptions import ContractError
from staggered_chns.grid.fields import Fields


def compute_error(U: Fields, exact: Fields) -> float:
    M = U.M
    if exact.M != M:
        raise ContractError(f"exact sample is on M={exact.M}, state on M={M}")
    total = sum(float(np.sum(np.abs(a - b))) for a, b in zip(U.blocks(), exact.blocks()))
    return total / M**2


def eoc(e_M: float, e_2M: float) -> float:
    if e_M <= 0.0 or e_2M <= 0.0:
        return math.nan
    return math.log2(e_M / e_2M)


def eoc_table(levels: list[int], errors: list[float]) -> list[dict]:
    """Rows {M, e_M, EOC_M}; the finest level has EOC None."""
    rows = []
    for k, (M, e) in enumerate(zip(levels, errors)):
        order = eoc(e, errors[k + 1]) if k + 1 < len(errors) else None
        rows.append({"M": M, "e_M": e, "EOC_M": order})
    return rows
