"""
registry.py
-----------
The named scenarios: initial data, parameters, final time, snapshot times.

  order  manufactured solution with forcing, T = 0.01
  test1  c₀ inside the spinodal (unstable) region
  test2  c₀ in the stable region around ¾
  test3  spinodal decomposition from tiny Gaussian noise
  test4  two kissing bubbles, stiff pressure (Cp = 10⁴)

Every initial velocity is sampled on the interior faces only, so the
no-slip wall faces are zero by construction.

Beginner tip: reproducibility:
  test3 draws its noise from numpy's PCG64 generator seeded with --seed,
  using the Box-Muller transform, so the same (M, seed) always gives
  bitwise the same field on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from staggered_chns.exceptions import ConfigurationError
from staggered_chns.grid.fields import Fields
from staggered_chns.grid.mac_grid import MacGrid, make_grid
from staggered_chns.physics.params import ModelParams
from staggered_chns.scenarios.manufactured import manufactured_solution

DEFAULT_PARAMS = ModelParams(gamma=5.0 / 3.0, Cp=1.0, eps=1e-4, nu=1.0, lam=0.1, g=-10.0)
TEST3_VARIANCE = 1e-10


@dataclass
class Scenario:
    name: str
    description: str
    grid: MacGrid
    params: ModelParams
    T: float
    initial: Fields
    seed: int = 0
    snapshot_times: list[float] = field(default_factory=list)
    forcing: Callable[[float], Fields] | None = None
    exact: Callable[[float], Fields] | None = None


# ── Initial data ─────────────────────────────────────────────────────────────

def _smooth_flow(grid: MacGrid, c0: Callable) -> Fields:
    xp, yp = grid.primal_nodes()
    xu, yu = grid.xface_nodes()
    xv, yv = grid.yface_nodes()
    rho = 1.25 + 0.1 * np.cos(2 * np.pi * xp) * np.cos(np.pi * yp)
    v1 = np.sin(np.pi * xu) * np.sin(np.pi * yu)
    v2 = np.sin(np.pi * xv) * np.sin(2 * np.pi * yv)
    return Fields.from_primitive(rho, v1, v2, c0(xp, yp))


def gaussian_noise(shape: tuple[int, int], seed: int, variance: float) -> np.ndarray:
    """Box-Muller normal samples from a seeded PCG64 stream."""
    rng = np.random.Generator(np.random.PCG64(seed))
    n = shape[0] * shape[1]
    u1 = 1.0 - rng.random(n)          # (0, 1]
    u2 = rng.random(n)
    z = np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
    return (np.sqrt(variance) * z).reshape(shape)


def _at_rest(grid: MacGrid, c0: np.ndarray) -> Fields:
    rho = np.ones(grid.primal_shape)
    return Fields.from_primitive(rho, np.zeros(grid.xface_shape), np.zeros(grid.yface_shape), c0)


def kissing_bubbles(grid: MacGrid, eps: float) -> np.ndarray:
    xp, yp = grid.primal_nodes()
    width = 2.0 * eps * np.sqrt(2.0)
    left = np.tanh((np.hypot(xp - 0.4, yp - 0.5) - 0.1) / width)
    right = np.tanh((np.hypot(xp - 0.6, yp - 0.5) - 0.1) / width)
    return left * right


# ── Builders ─────────────────────────────────────────────────────────────────

def _order(grid, seed, params):
    sol = manufactured_solution(params)
    return Scenario(
        name="order",
        description="manufactured solution with analytic forcing",
        grid=grid, params=params, T=0.01, seed=seed,
        initial=sol.sample(grid, 0.0),
        forcing=sol.forcing(grid),
        exact=lambda t: sol.sample(grid, t),
    )


def _test1(grid, seed, params):
    return Scenario(
        name="test1",
        description="c₀ in the unstable region",
        grid=grid, params=params, T=1.0, seed=seed,
        initial=_smooth_flow(grid, lambda x, y: 0.1 * np.cos(np.pi * x) * np.cos(np.pi * y)),
        snapshot_times=[0.0, 0.1, 0.3, 0.5, 0.7, 1.0],
    )


def _test2(grid, seed, params):
    return Scenario(
        name="test2",
        description="c₀ in the stable region",
        grid=grid, params=params, T=1.0, seed=seed,
        initial=_smooth_flow(grid, lambda x, y: 0.75 + 0.1 * np.cos(np.pi * x) * np.cos(np.pi * y)),
        snapshot_times=[0.0, 0.1, 0.3, 0.5, 0.7, 1.0],
    )


def _test3(grid, seed, params):
    return Scenario(
        name="test3",
        description="spinodal decomposition from Gaussian noise",
        grid=grid, params=params, T=1.0, seed=seed,
        initial=_at_rest(grid, gaussian_noise(grid.primal_shape, seed, TEST3_VARIANCE)),
        snapshot_times=[0.0, 0.1, 0.3, 0.5, 0.7, 1.0],
    )


def _test4(grid, seed, params):
    return Scenario(
        name="test4",
        description="two kissing bubbles",
        grid=grid, params=params, T=5e-3, seed=seed,
        initial=_at_rest(grid, kissing_bubbles(grid, params.eps)),
        snapshot_times=[0.0, 5e-5, 5e-4, 1e-3, 3e-3, 5e-3],
    )


SCENARIOS: dict[str, tuple[Callable, dict]] = {
    "order": (_order, {}),
    "test1": (_test1, {}),
    "test2": (_test2, {}),
    "test3": (_test3, {"nu": 1e-3, "lam": 1e-4}),
    "test4": (_test4, {"Cp": 1e4, "nu": 0.1, "lam": 0.1, "eps": 0.01}),
}


def scenario_params(name: str, overrides: dict | None = None) -> ModelParams:
    if name not in SCENARIOS:
        raise ConfigurationError(f"Unknown scenario {name!r}; choose from {list(SCENARIOS)}")
    params = DEFAULT_PARAMS.with_overrides(**SCENARIOS[name][1])
    return params.with_overrides(**(overrides or {}))


def scenario(name: str, M: int, seed: int = 0, overrides: dict | None = None) -> Scenario:
    """Build a scenario on an M×M grid. overrides replace ModelParams fields."""
    params = scenario_params(name, overrides)
    builder = SCENARIOS[name][0]
    return builder(make_grid(M), seed, params)
