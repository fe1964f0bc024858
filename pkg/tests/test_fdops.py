"""
test_fdops.py: Tests for the 1D finite-difference matrices and the Neumann Laplacian.
Run with: python -m pytest tests/
"""

import numpy as np
import pytest

from staggered_chns.exceptions import ConfigurationError, ContractError
from staggered_chns.grid.fields import vec_field
from staggered_chns.grid.mac_grid import make_grid
from staggered_chns.ops.fdops import build_fd_matrices, diag_apply, laplacian2d, laplacian_matrix

SAMPLE_SIZES = [4, 8, 16]


@pytest.mark.parametrize("M", SAMPLE_SIZES)
def test_matrix_shapes(M):
    fd = build_fd_matrices(M)
    assert fd.Dc.shape == (M, M)
    assert fd.D.shape == (M, M - 1)
    assert fd.Dstar.shape == (M, M - 1)
    assert fd.L.shape == (M, M)
    assert fd.A.shape == (M - 1, M)
    assert fd.D_ext.shape == (M + 1, M)
    assert fd.Dstar_ext.shape == (M + 1, M)


@pytest.mark.parametrize("M", SAMPLE_SIZES)
def test_laplacian_is_minus_d_dt(M):
    fd = build_fd_matrices(M)
    assert np.allclose(fd.L.toarray(), -(fd.D @ fd.D.T).toarray())


def test_dstar_doubles_the_end_entries():
    fd = build_fd_matrices(8)
    h = fd.h
    assert fd.Dstar[0, 0] * h == pytest.approx(2.0)
    assert fd.Dstar[7, 6] * h == pytest.approx(-2.0)
    assert fd.D[0, 0] * h == pytest.approx(1.0)


def test_central_difference_rows_sum_to_zero():
    fd = build_fd_matrices(8)
    assert np.allclose(np.asarray(fd.Dc.sum(axis=1)).ravel(), 0.0)


def test_laplacian_annihilates_constants():
    f = np.full((8, 8), 3.0)
    assert np.max(np.abs(laplacian2d(f))) < 1e-10


def test_laplacian_second_order_on_neumann_mode():
    M = 32
    grid = make_grid(M)
    x, y = grid.primal_nodes()
    f = np.cos(np.pi * x) * np.cos(np.pi * y)
    rel = np.max(np.abs(laplacian2d(f) + 2 * np.pi**2 * f)) / (2 * np.pi**2)
    assert rel < 5e-3


@pytest.mark.parametrize("M", SAMPLE_SIZES)
def test_kronecker_laplacian_matches_apply(M, rng):
    f = rng.standard_normal((M, M))
    assert np.allclose(laplacian_matrix(M) @ vec_field(f), vec_field(laplacian2d(f)))


def test_laplacian_is_symmetric_negative_semidefinite():
    L = laplacian_matrix(8).toarray()
    assert np.allclose(L, L.T)
    assert np.max(np.linalg.eigvalsh(L)) < 1e-8


def test_laplacian_sums_to_zero(rng):
    f = rng.standard_normal((8, 8))
    assert abs(laplacian2d(f).sum()) < 1e-9


def test_build_rejects_tiny_grid():
    with pytest.raises(ConfigurationError):
        build_fd_matrices(2)


def test_diag_apply_checks_shapes():
    assert np.all(diag_apply(np.ones((2, 2)), np.full((2, 2), 3.0)) == 3.0)
    with pytest.raises(ContractError):
        diag_apply(np.ones((2, 2)), np.ones((2, 3)))
