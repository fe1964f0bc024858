"""
test_forces.py: Tests for gravity and the capillary (Korteweg) force.
Run with: python -m pytest tests/
"""

import numpy as np
import pytest

from staggered_chns.exceptions import ContractError
from staggered_chns.grid.mac_grid import make_grid
from staggered_chns.physics.forces import capillary_apply, gravity_apply

SAMPLE_SIZES = [4, 8, 16]
SAMPLE_EPS = 0.7


def test_gravity_acts_on_y_faces():
    rho = np.full((8, 8), 2.0)
    out = gravity_apply(rho, -10.0)
    assert out.shape == (8, 7)
    assert np.allclose(out, -20.0)


def test_gravity_averages_density():
    rho = np.tile(np.arange(1.0, 5.0)[None, :], (4, 1))
    out = gravity_apply(rho, 1.0)
    assert np.allclose(out[0], [1.5, 2.5, 3.5])


@pytest.mark.parametrize("M", SAMPLE_SIZES)
def test_stencil_matches_matrix_form(M, rng):
    for _ in range(100 if M < 16 else 20):
        c = rng.uniform(-1, 1, (M, M))
        a = capillary_apply(c, SAMPLE_EPS, "stencil")
        b = capillary_apply(c, SAMPLE_EPS, "matrix")
        scale = max(1.0, np.max(np.abs(a.L2_2)), np.max(np.abs(a.L2_3)))
        assert np.max(np.abs(a.L2_2 - b.L2_2)) < 1e-12 * scale
        assert np.max(np.abs(a.L2_3 - b.L2_3)) < 1e-12 * scale


def test_output_shapes():
    blocks = capillary_apply(np.zeros((8, 8)), SAMPLE_EPS)
    assert blocks.L2_2.shape == (7, 8)
    assert blocks.L2_3.shape == (8, 7)


def test_constant_order_parameter_exerts_no_force():
    blocks = capillary_apply(np.full((8, 8), 0.4), SAMPLE_EPS)
    assert np.max(np.abs(blocks.L2_2)) < 1e-12
    assert np.max(np.abs(blocks.L2_3)) < 1e-12


def test_x_only_profile_pushes_along_x_only():
    grid = make_grid(16)
    x, _ = grid.primal_nodes()
    c = np.tanh((x - 0.5) / 0.1)
    blocks = capillary_apply(c, SAMPLE_EPS)
    assert np.max(np.abs(blocks.L2_3)) < 1e-10
    h = grid.h
    cx = np.gradient(c[:, 0], h)
    cx[0] = (c[1, 0] - c[0, 0]) / (2 * h)
    cx[-1] = (c[-1, 0] - c[-2, 0]) / (2 * h)
    expected = -0.5 * SAMPLE_EPS * (cx[1:] ** 2 - cx[:-1] ** 2) / h
    assert np.allclose(blocks.L2_2[:, 3], expected)


def test_unknown_method():
    with pytest.raises(ContractError):
        capillary_apply(np.zeros((4, 4)), 1.0, method="spectral")
