"""
test_scenarios.py: Tests for the scenario registry, the manufactured solution and the EOC helpers.
Run with: python -m pytest tests/
"""

import math

import numpy as np
import pytest

from staggered_chns.exceptions import ConfigurationError, ContractError
from staggered_chns.grid.mac_grid import make_grid
from staggered_chns.scenarios.errors import compute_error, eoc, eoc_table
from staggered_chns.scenarios.manufactured import manufactured_forcing, manufactured_solution
from staggered_chns.scenarios.registry import (
    DEFAULT_PARAMS,
    SCENARIOS,
    gaussian_noise,
    scenario,
    scenario_params,
)

SAMPLE_STEP = 1e-4


def test_registry_names():
    assert set(SCENARIOS) == {"order", "test1", "test2", "test3", "test4"}
    with pytest.raises(ConfigurationError):
        scenario("test9", 8)


def test_default_and_overridden_parameters():
    assert scenario_params("test1") == DEFAULT_PARAMS
    p3 = scenario_params("test3")
    assert (p3.nu, p3.lam) == (1e-3, 1e-4)
    p4 = scenario_params("test4")
    assert (p4.Cp, p4.nu, p4.lam, p4.eps) == (1e4, 0.1, 0.1, 0.01)
    assert scenario_params("test1", {"nu": 0.5}).nu == 0.5


def test_final_and_snapshot_times():
    assert scenario("order", 8).T == 0.01
    assert scenario("order", 8).snapshot_times == []
    for name in ("test1", "test2", "test3"):
        assert scenario(name, 8).snapshot_times == [0.0, 0.1, 0.3, 0.5, 0.7, 1.0]
    assert scenario("test4", 8).T == 5e-3


def test_test1_starts_in_unstable_region():
    c0 = scenario("test1", 64).initial.c
    assert np.max(np.abs(c0)) <= 0.1 < 1 / math.sqrt(3)


def test_test2_starts_in_stable_region():
    c0 = scenario("test2", 64).initial.c
    assert np.min(c0) >= 0.65 > 1 / math.sqrt(3)


def test_test3_noise_is_reproducible():
    a = scenario("test3", 16, seed=3).initial.c
    b = scenario("test3", 16, seed=3).initial.c
    c = scenario("test3", 16, seed=4).initial.c
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_gaussian_noise_statistics():
    z = gaussian_noise((128, 128), seed=0, variance=1e-10)
    assert abs(z.mean()) < 1e-6
    assert z.std() == pytest.approx(1e-5, rel=0.05)


def test_test4_bubbles():
    sc = scenario("test4", 64)
    c0 = sc.initial.c
    assert np.all(np.abs(c0) <= 1.0)
    assert c0[0, 0] == pytest.approx(1.0, abs=1e-6)
    assert c0[int(0.4 * 64), 32] < -0.9
    assert np.all(sc.initial.m1 == 0.0) and np.all(sc.initial.m2 == 0.0)


def test_manufactured_sample_matches_formulas():
    grid = make_grid(8)
    sol = manufactured_solution(DEFAULT_PARAMS)
    U = sol.sample(grid, 0.0)
    x, y = grid.primal_nodes()
    assert np.allclose(U.rho, 1.25 + 0.1 * np.cos(2 * np.pi * x) * np.cos(np.pi * y))
    assert np.allclose(U.c, 0.75 + 0.1 * np.cos(np.pi * x) * np.cos(np.pi * y))
    xu, yu = grid.xface_nodes()
    rho_u = 1.25 + 0.1 * np.cos(2 * np.pi * xu) * np.cos(np.pi * yu)
    assert np.allclose(U.m1, rho_u * np.sin(np.pi * xu) * np.sin(np.pi * yu))


def _fd(fn, point, axis, step=SAMPLE_STEP):
    lo, hi = list(point), list(point)
    lo[axis] -= step
    hi[axis] += step
    return (fn(*hi) - fn(*lo)) / (2 * step)


def test_continuity_source_matches_finite_differences():
    sol = manufactured_solution(DEFAULT_PARAMS)
    x, y, t = (0.3, 0.7, 0.2)
    rho_v1 = lambda a, b, c: sol.rho(a, b, c) * sol.v1(a, b, c)   # noqa: E731
    rho_v2 = lambda a, b, c: sol.rho(a, b, c) * sol.v2(a, b, c)   # noqa: E731
    point = (x, y, t)
    expected = _fd(sol.rho, point, 2) + _fd(rho_v1, point, 0) + _fd(rho_v2, point, 1)
    analytic = float(manufactured_forcing(x, y, t, DEFAULT_PARAMS)["rho"])
    assert analytic == pytest.approx(float(expected), abs=1e-6)


def test_gravity_enters_the_vertical_momentum_source():
    with_g = manufactured_forcing(0.3, 0.6, 0.1, DEFAULT_PARAMS)["m2"]
    without = manufactured_forcing(0.3, 0.6, 0.1, DEFAULT_PARAMS.with_overrides(g=0.0))["m2"]
    rho = manufactured_solution(DEFAULT_PARAMS).rho(0.3, 0.6, 0.1)
    assert float(with_g - without) == pytest.approx(float(10.0 * rho))


def test_compute_error_of_exact_sample_is_zero():
    sc = scenario("order", 8)
    assert compute_error(sc.initial, sc.exact(0.0)) == 0.0
    with pytest.raises(ContractError):
        compute_error(sc.initial, scenario("order", 16).initial)


def test_eoc_definition_and_scale_invariance():
    assert eoc(4.0, 1.0) == pytest.approx(2.0)
    assert math.isnan(eoc(0.0, 1.0))
    rows = eoc_table([8, 16, 32], [4e-2, 1e-2, 2.5e-3])
    assert [r["EOC_M"] for r in rows[:2]] == pytest.approx([2.0, 2.0])
    assert rows[-1]["EOC_M"] is None
    scaled = eoc_table([8, 16, 32], [7 * e for e in (4e-2, 1e-2, 2.5e-3)])
    assert [r["EOC_M"] for r in scaled[:2]] == pytest.approx([2.0, 2.0])
