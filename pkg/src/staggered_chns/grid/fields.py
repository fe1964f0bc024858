"""
fields.py
---------
The discrete state and its flat-vector form.

Fields holds the four conserved blocks

    rho : density            primal   M×M
    m1  : ρ_x · v1           x-faces  (M−1)×M
    m2  : ρ_y · v2           y-faces  M×(M−1)
    q   : ρ · c              primal   M×M

where ρ_x, ρ_y are two-point averages of ρ. The same container is used
for tendencies, so U + dt * L reads like the formula it implements.

vec() flattens column-major (vec(A)_{i+m(j−1)} = A_{i,j}) and stacks
the four blocks in the order above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from staggered_chns.exceptions import ContractError, NumericError, PositivityError
from staggered_chns.grid.mac_grid import MacGrid, to_staggered


@dataclass
class Fields:
    rho: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        M = self.rho.shape[0]
        expected = {
            "rho": (M, M),
            "m1": (M - 1, M),
            "m2": (M, M - 1),
            "q": (M, M),
        }
        for name, shape in expected.items():
            value = np.asarray(getattr(self, name), dtype=float)
            if value.shape != shape:
                raise ContractError(f"Fields.{name} has shape {value.shape}, expected {shape}")
            setattr(self, name, value)

    @classmethod
    def from_primitive(cls, rho, v1, v2, c) -> "Fields":
        rho = np.asarray(rho, dtype=float)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ContractError(f"rho must be a square primal field, got {rho.shape}")
        return cls(
            rho=rho,
            m1=to_staggered(rho, "x") * v1,
            m2=to_staggered(rho, "y") * v2,
            q=rho * c,
        )

    @classmethod
    def zeros(cls, grid: MacGrid) -> "Fields":
        return cls(
            rho=np.zeros(grid.primal_shape),
            m1=np.zeros(grid.xface_shape),
            m2=np.zeros(grid.yface_shape),
            q=np.zeros(grid.primal_shape),
        )

    @property
    def M(self) -> int:
        return self.rho.shape[0]

    # ── Primitive views ──────────────────────────────────────────────────────

    @property
    def v1(self) -> np.ndarray:
        return self.m1 / to_staggered(self.rho, "x")

    @property
    def v2(self) -> np.ndarray:
        return self.m2 / to_staggered(self.rho, "y")

    @property
    def c(self) -> np.ndarray:
        return self.q / self.rho

    # ── Arithmetic ───────────────────────────────────────────────────────────

    def blocks(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        return (self.rho, self.m1, self.m2, self.q)

    def __add__(self, other: "Fields") -> "Fields":
        return Fields(*(a + b for a, b in zip(self.blocks(), other.blocks())))

    def __sub__(self, other: "Fields") -> "Fields":
        return Fields(*(a - b for a, b in zip(self.blocks(), other.blocks())))

    def __mul__(self, scalar: float) -> "Fields":
        return Fields(*(scalar * a for a in self.blocks()))

    __rmul__ = __mul__

    def copy(self) -> "Fields":
        return Fields(*(a.copy() for a in self.blocks()))

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(a))) for a in self.blocks())


# ── Flattening ───────────────────────────────────────────────────────────────

def vec_field(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float).ravel(order="F")


def unvec_field(x: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.size != shape[0] * shape[1]:
        raise ContractError(f"vector of length {x.size} cannot fill a {shape} field")
    return x.reshape(shape, order="F")


def vec(U: Fields) -> np.ndarray:
    """Flatten a state to [vec ρ; vec m1; vec m2; vec q]."""
    return np.concatenate([vec_field(block) for block in U.blocks()])


def unvec(x: np.ndarray, grid: MacGrid) -> Fields:
    x = np.asarray(x, dtype=float)
    if x.shape != (grid.state_size,):
        raise ContractError(f"state vector has length {x.size}, expected {grid.state_size}")
    shapes = [grid.primal_shape, grid.xface_shape, grid.yface_shape, grid.primal_shape]
    parts = []
    start = 0
    for shape in shapes:
        size = shape[0] * shape[1]
        parts.append(unvec_field(x[start:start + size], shape).copy())
        start += size
    return Fields(*parts)


# ── Admissibility ────────────────────────────────────────────────────────────

def check_admissible(U: Fields, where: str = "state", time: float | None = None) -> None:
    """Raise if ρ ≤ 0 anywhere or any entry is not finite."""
    for name, block in zip(("rho", "m1", "m2", "q"), U.blocks()):
        if not np.all(np.isfinite(block)):
            raise NumericError(f"non-finite values in {where}.{name}")
    if np.any(U.rho <= 0.0):
        i, j = np.unravel_index(np.argmin(U.rho), U.rho.shape)
        raise PositivityError(
            f"density {U.rho[i, j]:.3e} ≤ 0 at node ({i + 1},{j + 1}) in {where}",
            where=where,
            time=time,
        )
