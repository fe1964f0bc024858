"""
convection.py
-------------
The explicit convective operator 𝒞(U).

Pipeline for every flux:
  1. extend the variables across the walls by reflection
     (ρ, q symmetric; m1, m2 antisymmetric, zero on the wall faces)
  2. reconstruct left/right interface values with WENO5
  3. combine them with the Rusanov flux
         F̂ = ½(f⁺ + f⁻) − ½ λ (u⁺ − u⁻)
     where λ bounds |v| + √p'(ρ) at the two reconstructed states
  4. return −(F̂_{k+½} − F̂_{k−½}) / h

Values move between primal points and faces with the 6-point transfer
from mac_grid.py; the only two-point average is the vertical one used
to bring m1 to the cell corners.

The y-direction fluxes are the x-direction fluxes of the transposed
state with the two momenta swapped, so only _x_tendencies is written
out in full.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from staggered_chns.config import WENO_EPS
from staggered_chns.exceptions import ContractError, NumericError
from staggered_chns.grid.fields import Fields, check_admissible
from staggered_chns.grid.mac_grid import (
    extend_axis0,
    to_staggered,
    transfer_to_interfaces,
    with_walls,
)
from staggered_chns.physics.params import ModelParams

GHOST_DEPTH = 3
WENO_LINEAR_WEIGHTS = (0.1, 0.6, 0.3)


# ── Ghost extension ──────────────────────────────────────────────────────────

@dataclass
class GhostField:
    values: np.ndarray     # interior plus `depth` ghost layers on both sides of `axis`
    depth: int
    axis: int
    parity: str
    staggered: bool        # True: face field, wall faces included in `values`

    @property
    def interior(self) -> np.ndarray:
        lo = self.depth + (1 if self.staggered else 0)
        n = self.values.shape[self.axis] - 2 * lo
        return np.take(self.values, np.arange(lo, lo + n), axis=self.axis)


def reflect_extend(
    f: np.ndarray,
    parity: str,
    axis: int,
    depth: int = GHOST_DEPTH,
    staggered: bool = False,
) -> GhostField:
    """
    Mirror a field across the two walls normal to `axis`.

    staggered=False: f is cell-centred along `axis`.
    staggered=True:  f holds the interior faces along `axis`; the wall
                     faces are inserted with value 0, which is only
                     meaningful for antisymmetric (momentum) fields.
    """
    if parity not in ("symmetric", "antisymmetric"):
        raise ContractError(f"parity must be 'symmetric' or 'antisymmetric', got {parity!r}")
    if staggered and parity == "symmetric":
        raise ContractError("symmetric extension of a face field needs wall values")
    work = np.moveaxis(np.asarray(f, dtype=float), axis, 0)
    odd = parity == "antisymmetric"
    if staggered:
        ext = extend_axis0(with_walls(work), odd, "face", depth)
    else:
        ext = extend_axis0(work, odd, "cell", depth)
    return GhostField(np.moveaxis(ext, 0, axis), depth, axis, parity, staggered)


# ── WENO5 ────────────────────────────────────────────────────────────────────

def weno5(a, b, c, d, e, eps: float = WENO_EPS):
    """
    Left-biased fifth-order value at the interface between c and d,
    from the five values f_{i−2..i+2}.
    """
    q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0
    q1 = (-b + 5.0 * c + 2.0 * d) / 6.0
    q2 = (2.0 * c + 5.0 * d - e) / 6.0

    beta0 = 13.0 / 12.0 * (a - 2.0 * b + c) ** 2 + 0.25 * (a - 4.0 * b + 3.0 * c) ** 2
    beta1 = 13.0 / 12.0 * (b - 2.0 * c + d) ** 2 + 0.25 * (b - d) ** 2
    beta2 = 13.0 / 12.0 * (c - 2.0 * d + e) ** 2 + 0.25 * (3.0 * c - 4.0 * d + e) ** 2

    d0, d1, d2 = WENO_LINEAR_WEIGHTS
    alpha0 = d0 / (eps + beta0) ** 2
    alpha1 = d1 / (eps + beta1) ** 2
    alpha2 = d2 / (eps + beta2) ** 2
    return (alpha0 * q0 + alpha1 * q1 + alpha2 * q2) / (alpha0 + alpha1 + alpha2)


def weno5_pair(window_plus, window_minus):
    """
    (f⁺, f⁻) at one interface.

    window_minus = (f_{i−2}, …, f_{i+2}), window_plus = (f_{i+3}, …, f_{i−1}).
    """
    if len(window_plus) != 5 or len(window_minus) != 5:
        raise ContractError("WENO5 windows need exactly 5 values")
    return weno5(*window_plus), weno5(*window_minus)


def weno_interfaces(fe: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    (f⁻, f⁺) at every interface of an extended array along axis 0.

    The interface between positions p and p+1 is reconstructed for
    p = 2 .. len−4, giving len − 5 values.
    """
    minus = weno5(fe[0:-5], fe[1:-4], fe[2:-3], fe[3:-2], fe[4:-1])
    plus = weno5(fe[5:], fe[4:-1], fe[3:-2], fe[2:-3], fe[1:-4])
    return minus, plus


# ── Fluxes ───────────────────────────────────────────────────────────────────

def rusanov_flux(f_minus, f_plus, u_minus, u_plus, lam):
    return 0.5 * (f_plus + f_minus) - 0.5 * lam * (u_plus - u_minus)


def _state_speed(m, rho, params: ModelParams):
    return np.abs(m / rho) + params.sound_speed(rho)


def _lam(m_minus, rho_minus, m_plus, rho_plus, params, lam_global):
    if lam_global is not None:
        return lam_global
    return np.maximum(
        _state_speed(m_minus, rho_minus, params),
        _state_speed(m_plus, rho_plus, params),
    )


def _x_tendencies(rho, m1, m2, q, params: ModelParams, lam_global: float | None):
    """x-flux contributions to the four conserved tendencies."""
    M = rho.shape[0]
    h = 1.0 / M

    rho_e = extend_axis0(rho, False, "cell")
    q_e = extend_axis0(q, False, "cell")
    m1_full = with_walls(m1)
    m1_fe = extend_axis0(m1_full, True, "face")

    # ρ and q: fluxes on the x-faces, walls included
    m1c = transfer_to_interfaces(m1_fe)[1:-1]
    m1c_e = extend_axis0(m1c, True, "cell")
    rho_m, rho_p = weno_interfaces(rho_e)
    q_m, q_p = weno_interfaces(q_e)
    mc_m, mc_p = weno_interfaces(m1c_e)
    fq_m, fq_p = weno_interfaces(m1c_e * q_e / rho_e)
    lam = _lam(mc_m, rho_m, mc_p, rho_p, params, lam_global)

    flux_rho = rusanov_flux(m1_full, m1_full, rho_m, rho_p, lam)
    flux_q = rusanov_flux(fq_m, fq_p, q_m, q_p, lam)
    for flux in (flux_rho, flux_q):
        flux[0] = 0.0
        flux[-1] = 0.0
    d_rho = -(flux_rho[1:] - flux_rho[:-1]) / h
    d_q = -(flux_q[1:] - flux_q[:-1]) / h

    # m1: flux m1²/ρ + p at the primal points
    rho_f = transfer_to_interfaces(rho_e)
    rho_fe = extend_axis0(rho_f, False, "face")
    f_m1 = m1_fe**2 / rho_fe + params.pressure(rho_fe)
    f_m, f_p = (r[1:-1] for r in weno_interfaces(f_m1))
    m_m, m_p = (r[1:-1] for r in weno_interfaces(m1_fe))
    r_m, r_p = (r[1:-1] for r in weno_interfaces(rho_fe))
    lam = _lam(m_m, r_m, m_p, r_p, params, lam_global)
    flux_m1 = rusanov_flux(f_m, f_p, m_m, m_p, lam)
    d_m1 = -(flux_m1[1:] - flux_m1[:-1]) / h

    # m2: flux m1·m2/ρ at the corners (i+½, j+½)
    rho_yf = transfer_to_interfaces(extend_axis0(rho.T, False, "cell"))[1:-1].T
    m1_corner = 0.5 * (m1_full[:, :-1] + m1_full[:, 1:])
    m1_yf = transfer_to_interfaces(extend_axis0(m1_corner, True, "face"))[1:-1]
    m1_yf_e = extend_axis0(m1_yf, True, "cell")
    m2_e = extend_axis0(m2, True, "cell")
    rho_yf_e = extend_axis0(rho_yf, False, "cell")
    f_m, f_p = weno_interfaces(m1_yf_e * m2_e / rho_yf_e)
    u_m, u_p = weno_interfaces(m2_e)
    a_m, a_p = weno_interfaces(m1_yf_e)
    r_m, r_p = weno_interfaces(rho_yf_e)
    lam = _lam(a_m, r_m, a_p, r_p, params, lam_global)
    flux_m2 = rusanov_flux(f_m, f_p, u_m, u_p, lam)
    d_m2 = -(flux_m2[1:] - flux_m2[:-1]) / h

    return d_rho, d_m1, d_m2, d_q


def conv_apply(U: Fields, params: ModelParams, flux_viscosity: str = "local") -> Fields:
    """Convective tendency 𝒞(U) for all four conserved blocks."""
    check_admissible(U, where="convection input")
    if flux_viscosity not in ("local", "global"):
        raise ContractError(f"flux_viscosity must be 'local' or 'global', got {flux_viscosity!r}")
    lam_global = max_char_speed(U, params) if flux_viscosity == "global" else None

    dx = _x_tendencies(U.rho, U.m1, U.m2, U.q, params, lam_global)
    dy = _x_tendencies(U.rho.T, U.m2.T, U.m1.T, U.q.T, params, lam_global)

    out = Fields(
        rho=dx[0] + dy[0].T,
        m1=dx[1] + dy[2].T,
        m2=dx[2] + dy[1].T,
        q=dx[3] + dy[3].T,
    )
    for name, block in zip(("rho", "m1", "m2", "q"), out.blocks()):
        if not np.all(np.isfinite(block)):
            raise NumericError(f"non-finite convective flux in block {name}")
    return out


def max_char_speed(U: Fields, params: ModelParams) -> float:
    """cs = max of |v_k| + √p'(ρ) over the primal points and both face sets."""
    check_admissible(U, where="characteristic speed")
    rho_x = to_staggered(U.rho, "x")
    rho_y = to_staggered(U.rho, "y")
    return float(max(
        np.max(params.sound_speed(U.rho)),
        np.max(np.abs(U.m1 / rho_x) + params.sound_speed(rho_x)),
        np.max(np.abs(U.m2 / rho_y) + params.sound_speed(rho_y)),
    ))
