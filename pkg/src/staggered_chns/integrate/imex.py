"""
imex.py
-------
One step of the partitioned IMEX Runge-Kutta scheme.

Notation: U = (ρ, m1, m2, q) the conserved state, ℒ̃(Ũ, U) the full
tendency with convection and 𝓜₂(c̃)c̃ taking the explicit argument Ũ and
every other term taking U.

Stage i of an s-stage pair:
  a. Ũ⁽ⁱ⁾ = Uⁿ + Δt Σ_{j<i} α̃_ij K_j
  b. ρ⁽ⁱ⁾ = ρⁿ + Δt Σ_{j<i} α_ij K_j,ρ + Δt α_ii 𝒞(Ũ⁽ⁱ⁾)_ρ          (explicit)
  c. CH system for C⁽ⁱ⁾ (SPD, CG)
  d. velocity system for (V1, V2)⁽ⁱ⁾ with ρ_x, ρ_y from ρ⁽ⁱ⁾ (SPD, CG)
  e. K_i = ℒ̃(Ũ⁽ⁱ⁾, U⁽ⁱ⁾)
Finally Uⁿ⁺¹ = Uⁿ + Δt Σ β_j K_j.

Because convection never sees the implicit unknowns and the capillary
term only sees C, the stage is a chain of two linear solves rather than a
nonlinear system.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from staggered_chns.config import DT_MAX, SolverSettings
from staggered_chns.exceptions import ConfigurationError, PositivityError, SolverError
from staggered_chns.grid.fields import Fields, check_admissible, unvec_field, vec_field
from staggered_chns.grid.mac_grid import to_staggered
from staggered_chns.integrate.tableaus import ButcherPair
from staggered_chns.physics.cahn_hilliard import ch_rhs, ch_system_operator, m2_apply
from staggered_chns.physics.convection import conv_apply, max_char_speed
from staggered_chns.physics.forces import capillary_apply, gravity_apply
from staggered_chns.physics.params import ModelParams
from staggered_chns.physics.viscosity import visc_apply, visc_system_operator
from staggered_chns.solve.cg import cg
from staggered_chns.solve.linear_operator import SolveReport
from staggered_chns.solve.multigrid import build_preconditioner

log = logging.getLogger(__name__)

Forcing = Callable[[float], Fields]


@dataclass
class TimeControls:
    cfl: float
    T: float
    t: float = 0.0
    dt: float | None = None

    def __post_init__(self):
        if not 0.0 < self.cfl < 1.0:
            raise ConfigurationError(f"CFL must lie in (0, 1), got {self.cfl}")
        if self.T <= 0.0:
            raise ConfigurationError(f"final time must be positive, got {self.T}")


@dataclass
class StepReport:
    t: float
    dt: float
    stage_cs: float = 0.0
    realized_cfl: float = 0.0
    it_ch: list[int] = field(default_factory=list)
    it_vel: list[int] = field(default_factory=list)
    ch_residual: float = 0.0
    vel_residual: float = 0.0


# ── Time step ────────────────────────────────────────────────────────────────

def dt_select(
    U: Fields,
    controls: TimeControls,
    params: ModelParams,
    stage_cs: float | None = None,
    dt_max: float = DT_MAX,
) -> float:
    """Δt = CFL·h/cs, clipped so that t + Δt ≤ T."""
    h = 1.0 / U.M
    cs = max_char_speed(U, params)
    if stage_cs is not None:
        cs = max(cs, stage_cs)
    dt = controls.cfl * h / cs if cs > 0.0 else dt_max
    return min(dt, controls.T - controls.t)


# ── Right-hand side ──────────────────────────────────────────────────────────

def _assemble_tendency(conv: Fields, U_tilde: Fields, U: Fields, params: ModelParams,
                       source: Fields | None) -> Fields:
    rho, c = U.rho, U.c
    cap = capillary_apply(c, params.eps)
    L4_2, L4_3 = visc_apply(U.v1, U.v2, params.nu, params.lam)
    out = Fields(
        rho=conv.rho,
        m1=conv.m1 + cap.L2_2 + L4_2,
        m2=conv.m2 + gravity_apply(rho, params.g) + cap.L2_3 + L4_3,
        q=conv.q + ch_rhs(rho, c, U_tilde.c, params.eps),
    )
    return out if source is None else out + source


def rhs_tilde(
    U_tilde: Fields,
    U: Fields,
    params: ModelParams,
    source: Fields | None = None,
    flux_viscosity: str = "local",
) -> Fields:
    """ℒ̃(Ũ, U) = 𝒞(Ũ) + ℒ₁(U) + ℒ₂(U) + ℒ̃₃(Ũ, U) + ℒ₄(U) (+ source)."""
    conv = conv_apply(U_tilde, params, flux_viscosity)
    return _assemble_tendency(conv, U_tilde, U, params, source)


# ── Stage solves ─────────────────────────────────────────────────────────────

def _stage_cg(op, rhs, guess, tol, settings: SolverSettings, layout: str, M: int, what: str):
    pre = None
    if settings.precond == "mg":
        pre = build_preconditioner(op, M, layout, settings.mg_coarsest, settings.mg_sweeps)
    x, report = cg(op, rhs, tol=tol, max_iter=settings.max_iter_factor * rhs.size,
                   preconditioner=pre, x0=guess)
    if not report.converged:
        raise SolverError(
            f"{what} did not converge: {report.iterations} iterations, "
            f"relative residual {report.relative_residual:.2e}",
            report,
        )
    return x, report


def _solve_concentration(rho, coeff, rhs, guess, params, settings):
    if coeff == 0.0:
        return rhs / rho, SolveReport(0, 0.0, True)
    op = ch_system_operator(rho, coeff, params.eps)
    x, report = _stage_cg(op, vec_field(rhs), vec_field(guess), settings.ch_tol,
                          settings, "primal", rho.shape[0], "Cahn-Hilliard solve")
    return unvec_field(x, rho.shape), report


def _solve_velocity(rho_x, rho_y, coeff, rhs1, rhs2, guess, params, settings):
    if coeff == 0.0:
        return rhs1 / rho_x, rhs2 / rho_y, SolveReport(0, 0.0, True)
    op = visc_system_operator(rho_x, rho_y, coeff, params.nu, params.lam)
    rhs = np.concatenate([vec_field(rhs1), vec_field(rhs2)])
    x0 = np.concatenate([vec_field(guess[0]), vec_field(guess[1])])
    x, report = _stage_cg(op, rhs, x0, settings.vel_tol, settings, "velocity",
                          rho_y.shape[0], "velocity solve")
    n1 = rho_x.size
    return unvec_field(x[:n1], rho_x.shape), unvec_field(x[n1:], rho_y.shape), report


def _combine(base: Fields, dt: float, weights, tendencies: list[Fields]) -> Fields:
    out = base.copy()
    for w, K in zip(weights, tendencies):
        if w != 0.0:
            out = out + (dt * w) * K
    return out


# ── Step ─────────────────────────────────────────────────────────────────────

def step(
    U: Fields,
    dt: float,
    pair: ButcherPair,
    params: ModelParams,
    t: float = 0.0,
    settings: SolverSettings | None = None,
    forcing: Forcing | None = None,
) -> tuple[Fields, StepReport]:
    """Advance Uⁿ by Δt. Returns (Uⁿ⁺¹, StepReport)."""
    settings = settings or SolverSettings()
    check_admissible(U, where="step input", time=t)
    h = 1.0 / U.M
    report = StepReport(t=t, dt=dt)

    K: list[Fields] = []
    cs = 0.0
    C_guess = U.c
    V_guess = (U.v1, U.v2)

    for i in range(pair.s):
        U_tilde = _combine(U, dt, pair.alpha_tilde[i, :i], K)
        check_admissible(U_tilde, where=f"stage {i + 1} explicit state", time=t)
        source = forcing(t + pair.gamma_tilde[i] * dt) if forcing is not None else None

        conv = conv_apply(U_tilde, params, settings.flux_viscosity)
        base = _combine(U, dt, pair.alpha[i, :i], K)
        coeff = dt * pair.alpha[i, i]
        explicit = conv if source is None else conv + source

        rho = base.rho + coeff * explicit.rho
        if np.any(rho <= 0.0):
            raise PositivityError(f"stage {i + 1} density ≤ 0 (min {rho.min():.3e})",
                                  where=f"stage {i + 1}", time=t)

        rhs_q = base.q + coeff * (explicit.q + m2_apply(U_tilde.c))
        C, rep_ch = _solve_concentration(rho, coeff, rhs_q, C_guess, params, settings)

        rho_x = to_staggered(rho, "x")
        rho_y = to_staggered(rho, "y")
        cap = capillary_apply(C, params.eps)
        rhs1 = base.m1 + coeff * (explicit.m1 + cap.L2_2)
        rhs2 = base.m2 + coeff * (explicit.m2 + gravity_apply(rho, params.g) + cap.L2_3)
        v1, v2, rep_v = _solve_velocity(rho_x, rho_y, coeff, rhs1, rhs2, V_guess, params, settings)

        U_stage = Fields(rho=rho, m1=rho_x * v1, m2=rho_y * v2, q=rho * C)
        K.append(_assemble_tendency(conv, U_tilde, U_stage, params, source))

        C_guess, V_guess = C, (v1, v2)
        cs = max(cs, max_char_speed(U_tilde, params), max_char_speed(U_stage, params))
        report.it_ch.append(rep_ch.iterations)
        report.it_vel.append(rep_v.iterations)
        report.ch_residual = max(report.ch_residual, rep_ch.relative_residual)
        report.vel_residual = max(report.vel_residual, rep_v.relative_residual)
        log.debug("stage %d: CH %d its, velocity %d its", i + 1, rep_ch.iterations, rep_v.iterations)

    U_new = _combine(U, dt, pair.beta, K)
    check_admissible(U_new, where="step result", time=t + dt)
    report.stage_cs = cs
    report.realized_cfl = dt * cs / h
    return U_new, report
