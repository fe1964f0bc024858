"""
manufactured.py
---------------
Manufactured solution for the convergence test and the forcing that makes
it an exact solution of the forced system.

    ρ  = 1.25 + 0.1 cos(2πx) cos(πy) (t+1)
    v1 = sin(πx) sin(πy) (1 − 2t²)
    v2 = sin(πx) sin(2πy) (1 + t²)
    c  = 0.75 + 0.1 cos(πx) cos(πy) (1 − t)

The sources are the residuals of the four balance laws

    S_ρ  = ρ_t + (ρv1)_x + (ρv2)_y
    S_m1 = (ρv1)_t + (ρv1² + p)_x + (ρv1v2)_y
           − ε[½(c_y² − c_x²)_x − (c_x c_y)_y] − νΔv1 − (ν+λ)(v1_x + v2_y)_x
    S_m2 = (ρv2)_t + (ρv1v2)_x + (ρv2² + p)_y − ρg
           − ε[½(c_x² − c_y²)_y − (c_x c_y)_x] − νΔv2 − (ν+λ)(v1_x + v2_y)_y
    S_q  = (ρc)_t + (ρcv1)_x + (ρcv2)_y − Δ(ψ'(c) − (ε/ρ)Δc)

differentiated symbolically with sympy and turned into numpy callables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp

from staggered_chns.grid.fields import Fields
from staggered_chns.grid.mac_grid import MacGrid
from staggered_chns.physics.params import ModelParams

X, Y, T = sp.symbols("x y t", real=True)


def exact_expressions() -> dict[str, sp.Expr]:
    pi = sp.pi
    return {
        "rho": sp.Rational(5, 4) + sp.Rational(1, 10) * sp.cos(2 * pi * X) * sp.cos(pi * Y) * (T + 1),
        "v1": sp.sin(pi * X) * sp.sin(pi * Y) * (1 - 2 * T**2),
        "v2": sp.sin(pi * X) * sp.sin(2 * pi * Y) * (1 + T**2),
        "c": sp.Rational(3, 4) + sp.Rational(1, 10) * sp.cos(pi * X) * sp.cos(pi * Y) * (1 - T),
    }


def source_expressions(params: ModelParams) -> dict[str, sp.Expr]:
    e = exact_expressions()
    rho, v1, v2, c = e["rho"], e["v1"], e["v2"], e["c"]
    gamma, Cp = sp.Float(params.gamma), sp.Float(params.Cp)
    eps, nu, lam, g = (sp.Float(v) for v in (params.eps, params.nu, params.lam, params.g))

    def d(f, *args):
        return sp.diff(f, *args)

    def lap(f):
        return d(f, X, 2) + d(f, Y, 2)

    p = Cp * rho**gamma
    cx, cy = d(c, X), d(c, Y)
    div_v = d(v1, X) + d(v2, Y)
    mu = c**3 - c - eps / rho * lap(c)

    S_rho = d(rho, T) + d(rho * v1, X) + d(rho * v2, Y)
    S_m1 = (
        d(rho * v1, T) + d(rho * v1**2 + p, X) + d(rho * v1 * v2, Y)
        - eps * (sp.Rational(1, 2) * d(cy**2 - cx**2, X) - d(cx * cy, Y))
        - nu * lap(v1) - (nu + lam) * d(div_v, X)
    )
    S_m2 = (
        d(rho * v2, T) + d(rho * v1 * v2, X) + d(rho * v2**2 + p, Y) - rho * g
        - eps * (sp.Rational(1, 2) * d(cx**2 - cy**2, Y) - d(cx * cy, X))
        - nu * lap(v2) - (nu + lam) * d(div_v, Y)
    )
    S_q = d(rho * c, T) + d(rho * c * v1, X) + d(rho * c * v2, Y) - lap(mu)
    return {"rho": S_rho, "m1": S_m1, "m2": S_m2, "q": S_q}


def _numpy_callable(expr: sp.Expr) -> Callable[[np.ndarray, np.ndarray, float], np.ndarray]:
    fn = sp.lambdify((X, Y, T), expr, modules="numpy")

    def evaluate(x, y, t):
        x = np.asarray(x, dtype=float)
        return np.asarray(fn(x, np.asarray(y, dtype=float), float(t)), dtype=float) + np.zeros_like(x)

    return evaluate


@dataclass(frozen=True)
class ManufacturedSolution:
    rho: Callable
    v1: Callable
    v2: Callable
    c: Callable
    sources: dict[str, Callable]

    def sample(self, grid: MacGrid, t: float) -> Fields:
        """Exact conserved blocks on their native grids at time t."""
        xp, yp = grid.primal_nodes()
        xu, yu = grid.xface_nodes()
        xv, yv = grid.yface_nodes()
        rho = self.rho(xp, yp, t)
        return Fields(
            rho=rho,
            m1=self.rho(xu, yu, t) * self.v1(xu, yu, t),
            m2=self.rho(xv, yv, t) * self.v2(xv, yv, t),
            q=rho * self.c(xp, yp, t),
        )

    def forcing(self, grid: MacGrid) -> Callable[[float], Fields]:
        xp, yp = grid.primal_nodes()
        xu, yu = grid.xface_nodes()
        xv, yv = grid.yface_nodes()
        S = self.sources

        def at(t: float) -> Fields:
            return Fields(
                rho=S["rho"](xp, yp, t),
                m1=S["m1"](xu, yu, t),
                m2=S["m2"](xv, yv, t),
                q=S["q"](xp, yp, t),
            )

        return at


@lru_cache(maxsize=8)
def manufactured_solution(params: ModelParams) -> ManufacturedSolution:
    exact = {k: _numpy_callable(v) for k, v in exact_expressions().items()}
    sources = {k: _numpy_callable(v) for k, v in source_expressions(params).items()}
    return ManufacturedSolution(sources=sources, **exact)


def manufactured_forcing(x, y, t, params: ModelParams) -> dict[str, np.ndarray]:
    """(S_ρ, S_m1, S_m2, S_q) evaluated at the given points."""
    sol = manufactured_solution(params)
    return {name: fn(x, y, t) for name, fn in sol.sources.items()}
