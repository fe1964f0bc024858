"""
test_imex.py: Tests for the Butcher pairs, the time-step rule and the IMEX step.
Run with: python -m pytest tests/
"""

import numpy as np
import pytest

from staggered_chns.config import SolverSettings
from staggered_chns.exceptions import ConfigurationError
from staggered_chns.grid.fields import Fields
from staggered_chns.grid.mac_grid import make_grid
from staggered_chns.integrate.imex import TimeControls, dt_select, rhs_tilde, step
from staggered_chns.integrate.tableaus import ButcherPair, available_tableaus, tableau
from staggered_chns.physics.cahn_hilliard import ch_rhs
from staggered_chns.physics.convection import conv_apply
from staggered_chns.physics.forces import capillary_apply, gravity_apply
from staggered_chns.physics.viscosity import visc_apply
from staggered_chns.scenarios.registry import scenario

SAMPLE_M = 8


def _integrate(U, pair, params, T, n, settings=None):
    dt = T / n
    t = 0.0
    for _ in range(n):
        U, _ = step(U, dt, pair, params, t=t, settings=settings)
        t += dt
    return U


def test_registry():
    assert available_tableaus() == ["ee_ie", "dirksa"]
    with pytest.raises(ConfigurationError):
        tableau("rk4")


def test_dirksa_is_stiffly_accurate_second_order():
    pair = tableau("dirksa")
    assert pair.s == 2
    assert np.allclose(pair.alpha[-1], pair.beta)
    assert pair.beta @ pair.gamma == pytest.approx(0.5)
    assert pair.beta @ pair.gamma_tilde == pytest.approx(0.5)
    assert np.all(pair.alpha >= 0.0)


def test_time_controls_validate():
    with pytest.raises(ConfigurationError):
        TimeControls(cfl=1.5, T=1.0)
    with pytest.raises(ConfigurationError):
        TimeControls(cfl=0.4, T=0.0)


def test_dt_select_follows_cfl_and_final_time():
    grid = make_grid(SAMPLE_M)
    U = Fields.zeros(grid)
    U.rho[:] = 1.0
    params = scenario("test1", SAMPLE_M).params
    dt = dt_select(U, TimeControls(cfl=0.4, T=1.0), params)
    assert dt == pytest.approx(0.4 * grid.h / np.sqrt(5.0 / 3.0))
    assert dt_select(U, TimeControls(cfl=0.4, T=1.0, t=1.0 - 1e-4), params) == pytest.approx(1e-4)


def test_rhs_tilde_is_sum_of_parts(rng):
    sc = scenario("test1", SAMPLE_M)
    U, p = sc.initial, sc.params
    total = rhs_tilde(U, U, p)
    cap = capillary_apply(U.c, p.eps)
    visc = visc_apply(U.v1, U.v2, p.nu, p.lam)
    conv = conv_apply(U, p)
    assert np.array_equal(total.rho, conv.rho)
    assert np.allclose(total.m1, conv.m1 + cap.L2_2 + visc[0], rtol=0, atol=1e-12)
    assert np.allclose(total.m2, conv.m2 + gravity_apply(U.rho, p.g) + cap.L2_3 + visc[1], rtol=0, atol=1e-12)
    assert np.allclose(total.q, conv.q + ch_rhs(U.rho, U.c, U.c, p.eps), rtol=0, atol=1e-12)


@pytest.mark.parametrize("scheme", ["ee_ie", "dirksa"])
def test_uniform_rest_state_is_a_fixed_point(scheme):
    grid = make_grid(SAMPLE_M)
    params = scenario("test1", SAMPLE_M, overrides={"g": 0.0}).params
    U = Fields.from_primitive(
        np.full(grid.primal_shape, 1.1), np.zeros(grid.xface_shape),
        np.zeros(grid.yface_shape), np.full(grid.primal_shape, 0.3),
    )
    U_new, report = step(U, 1e-3, tableau(scheme), params)
    assert (U_new - U).max_abs() < 1e-12
    assert report.dt == 1e-3


@pytest.mark.parametrize("scheme", ["ee_ie", "dirksa"])
def test_step_conserves_mass_and_species(scheme):
    sc = scenario("test1", SAMPLE_M)
    U0 = sc.initial
    U = _integrate(U0, tableau(scheme), sc.params, 3e-3, 3)
    scale = U0.rho.sum()
    assert abs(U.rho.sum() - scale) <= 1e-12 * scale
    assert abs(U.q.sum() - U0.q.sum()) <= 1e-12 * scale


def test_step_report_contents():
    sc = scenario("test1", SAMPLE_M)
    _, report = step(sc.initial, 1e-3, tableau("dirksa"), sc.params)
    assert len(report.it_ch) == 2 and len(report.it_vel) == 2
    assert report.stage_cs > 0.0
    assert report.realized_cfl == pytest.approx(1e-3 * report.stage_cs / (1.0 / SAMPLE_M))
    assert report.ch_residual <= 1e-10 and report.vel_residual <= 1e-10


def test_dirksa_is_second_order_in_time():
    sc = scenario("test1", SAMPLE_M)
    pair = tableau("dirksa")
    T = 2e-4
    ref = _integrate(sc.initial, pair, sc.params, T, 64)
    e4 = (_integrate(sc.initial, pair, sc.params, T, 4) - ref).max_abs()
    e8 = (_integrate(sc.initial, pair, sc.params, T, 8) - ref).max_abs()
    assert e8 < e4 / 2.5


def test_dirksa_beats_euler_pair():
    sc = scenario("test1", SAMPLE_M)
    T = 2e-4
    ref = _integrate(sc.initial, tableau("dirksa"), sc.params, T, 64)
    e_ee = (_integrate(sc.initial, tableau("ee_ie"), sc.params, T, 8) - ref).max_abs()
    e_dirk = (_integrate(sc.initial, tableau("dirksa"), sc.params, T, 8) - ref).max_abs()
    assert e_dirk < e_ee


def test_matches_explicit_rk4_reference():
    sc = scenario("test1", SAMPLE_M)
    p = sc.params
    T, n_ref = 1e-4, 100
    dt = T / n_ref
    U = sc.initial
    for _ in range(n_ref):
        k1 = rhs_tilde(U, U, p)
        U2 = U + (0.5 * dt) * k1
        k2 = rhs_tilde(U2, U2, p)
        U3 = U + (0.5 * dt) * k2
        k3 = rhs_tilde(U3, U3, p)
        U4 = U + dt * k3
        k4 = rhs_tilde(U4, U4, p)
        U = U + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    imex = _integrate(sc.initial, tableau("dirksa"), p, T, 10)
    assert (imex - U).max_abs() < 1e-6


def test_multigrid_setting_gives_same_step():
    sc = scenario("test1", SAMPLE_M)
    a, _ = step(sc.initial, 1e-3, tableau("dirksa"), sc.params)
    b, report = step(sc.initial, 1e-3, tableau("dirksa"), sc.params,
                     settings=SolverSettings(precond="mg"))
    assert (a - b).max_abs() < 1e-7
    assert report.ch_residual <= 1e-10


def test_forcing_is_added_to_the_tendency():
    grid = make_grid(SAMPLE_M)
    params = scenario("test1", SAMPLE_M, overrides={"g": 0.0}).params
    U = Fields.from_primitive(
        np.ones(grid.primal_shape), np.zeros(grid.xface_shape),
        np.zeros(grid.yface_shape), np.zeros(grid.primal_shape),
    )
    source = Fields.zeros(grid)
    source.rho[:] = 2.0
    U_new, _ = step(U, 1e-3, tableau("ee_ie"), params, forcing=lambda t: source)
    assert np.allclose(U_new.rho, 1.0 + 2e-3)


def _heun_pair():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    g = np.array([0.0, 1.0])
    return ButcherPair("heun", a, g, a.copy(), g.copy(), np.array([0.5, 0.5]), order=2)


def test_equal_explicit_tableaus_reduce_to_explicit_runge_kutta():
    sc = scenario("test1", SAMPLE_M)
    p, U = sc.params, sc.initial
    pair = _heun_pair()
    pair.validate()
    dt = 1e-4
    k1 = rhs_tilde(U, U, p)
    Y = U + dt * k1
    k2 = rhs_tilde(Y, Y, p)
    expected = U + (0.5 * dt) * (k1 + k2)
    U_new, report = step(U, dt, pair, p)
    assert (U_new - expected).max_abs() < 1e-11
    assert report.it_ch == [0, 0] and report.it_vel == [0, 0]


def _linear_model_error(pair, lam_implicit, lam_explicit, T, n):
    """Same stage form as step() on u' = λ_E u + λ_I u, with λ_E at the explicit stage value."""
    dt = T / n
    u = 1.0
    for _ in range(n):
        K = []
        for i in range(pair.s):
            u_tilde = u + dt * sum(pair.alpha_tilde[i, j] * K[j] for j in range(i))
            base = u + dt * sum(pair.alpha[i, j] * K[j] for j in range(i))
            coeff = dt * pair.alpha[i, i]
            u_stage = (base + coeff * lam_explicit * u_tilde) / (1.0 - coeff * lam_implicit)
            K.append(lam_explicit * u_tilde + lam_implicit * u_stage)
        u = u + dt * sum(b * k for b, k in zip(pair.beta, K))
    return abs(u - np.exp((lam_implicit + lam_explicit) * T))


@pytest.mark.parametrize("scheme, ratio", [("ee_ie", 2.0), ("dirksa", 4.0)])
@pytest.mark.parametrize("lam_explicit", [-0.5, 0.5])
def test_linear_model_error_ratio_under_step_halving(scheme, ratio, lam_explicit):
    pair = tableau(scheme)
    coarse = _linear_model_error(pair, -1.0, lam_explicit, 1.0, 400)
    fine = _linear_model_error(pair, -1.0, lam_explicit, 1.0, 800)
    assert coarse / fine == pytest.approx(ratio, abs=0.1)
