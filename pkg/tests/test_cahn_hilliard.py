"""
test_cahn_hilliard.py: Tests for the Cahn-Hilliard tendency and its stage operator.
Run with: python -m pytest tests/
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from staggered_chns.exceptions import PositivityError
from staggered_chns.grid.fields import vec_field
from staggered_chns.ops.fdops import laplacian2d
from staggered_chns.physics.cahn_hilliard import (
    EYRE_SPLIT,
    PotentialSplit,
    ch_rhs,
    ch_system_matrix,
    ch_system_operator,
    chemical_potential,
    m2_apply,
)
from staggered_chns.solve.linear_operator import dense_matrix

SAMPLE_EPS = 1e-4
SAMPLE_COEFFS = [0.0, 1e-3]


def test_split_adds_up_to_double_well_derivative():
    c = np.linspace(-1.5, 1.5, 31)
    total = EYRE_SPLIT.psi1_prime(c) + EYRE_SPLIT.psi2_prime(c)
    assert np.allclose(total, PotentialSplit.psi_prime(c))
    assert np.all(EYRE_SPLIT.psi2_second(np.array([-1.0, 0.0, 1.0])) <= 0.0)


def test_constant_c_has_no_tendency():
    rho = np.full((8, 8), 1.3)
    c = np.full((8, 8), 0.25)
    assert np.max(np.abs(ch_rhs(rho, c, c, SAMPLE_EPS))) < 1e-10


def test_tendency_conserves_species(rng):
    rho = rng.uniform(0.5, 2.0, (8, 8))
    c = rng.uniform(-1, 1, (8, 8))
    c_tilde = rng.uniform(-1, 1, (8, 8))
    assert abs(ch_rhs(rho, c, c_tilde, SAMPLE_EPS).sum()) < 1e-8


def test_concave_part_for_small_c_is_minus_three_laplacian(rng):
    # ψ₂''(c) → −3 as c → 0, so 𝓜₂(c)c ≈ −3 Δ_h c
    c = 1e-6 * rng.standard_normal((8, 8))
    assert np.allclose(m2_apply(c), -3.0 * laplacian2d(c), rtol=1e-8, atol=1e-14)


def test_chemical_potential_of_pure_phase():
    rho = np.ones((8, 8))
    assert np.allclose(chemical_potential(rho, np.ones((8, 8)), SAMPLE_EPS), 0.0)


@pytest.mark.parametrize("M", [4, 8, 16])
@pytest.mark.parametrize("coeff", SAMPLE_COEFFS)
@pytest.mark.parametrize("random_rho", [False, True])
def test_stage_operator_is_spd(M, coeff, random_rho, rng):
    rho = rng.uniform(0.5, 2.0, (M, M)) if random_rho else np.ones((M, M))
    A = dense_matrix(ch_system_operator(rho, coeff, SAMPLE_EPS))
    assert np.max(np.abs(A - A.T)) < 1e-10 * max(1.0, np.max(np.abs(A)))
    np.linalg.cholesky(A)


def test_operator_matches_assembled_matrix(rng):
    rho = rng.uniform(0.5, 2.0, (8, 8))
    op = ch_system_operator(rho, 1e-2, 1e-3)
    x = rng.standard_normal(64)
    assert np.allclose(op @ x, ch_system_matrix(rho, 1e-2, 1e-3) @ x)


def test_zero_coefficient_is_density_mass_matrix(rng):
    rho = rng.uniform(0.5, 2.0, (4, 4))
    x = rng.standard_normal(16)
    assert np.allclose(ch_system_operator(rho, 0.0, SAMPLE_EPS) @ x, vec_field(rho) * x)


def test_nonpositive_density_is_rejected():
    rho = np.ones((4, 4))
    rho[1, 2] = 0.0
    with pytest.raises(PositivityError):
        ch_system_operator(rho, 1e-3, SAMPLE_EPS)
    with pytest.raises(PositivityError):
        ch_rhs(rho, rho, rho, SAMPLE_EPS)


@settings(max_examples=20, deadline=None)
@given(
    a=st.floats(-3, 3, allow_nan=False),
    seed=st.integers(0, 2**16),
)
def test_operator_is_linear(a, seed):
    gen = np.random.default_rng(seed)
    rho = gen.uniform(0.5, 2.0, (6, 6))
    op = ch_system_operator(rho, 1e-3, SAMPLE_EPS)
    x, y = gen.standard_normal(36), gen.standard_normal(36)
    assert np.allclose(op @ (a * x + y), a * (op @ x) + op @ y, atol=1e-9)


@pytest.mark.parametrize("coeff", SAMPLE_COEFFS + [1.0])
def test_unit_density_operator_is_bounded_below_by_identity(coeff):
    A = dense_matrix(ch_system_operator(np.ones((8, 8)), coeff, SAMPLE_EPS))
    eigenvalues = np.linalg.eigvalsh(0.5 * (A + A.T))
    assert eigenvalues.min() >= 1.0 - 1e-10
    assert eigenvalues.min() == pytest.approx(1.0, abs=1e-10)
