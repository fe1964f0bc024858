"""
mac_grid.py
-----------
Geometry of the MAC (marker-and-cell) staggered grid on the unit square.

Three node sets, all stored as dense 2D arrays indexed [i, j] with i
running along x and j along y:

  primal   x_{i,j}     = ((i−½)h, (j−½)h)   i,j = 1..M        shape M×M
  x-faces  x_{i+½,j}   = (ih, (j−½)h)       i = 1..M−1        shape (M−1)×M
  y-faces  x_{i,j+½}   = ((i−½)h, jh)       j = 1..M−1        shape M×(M−1)

Wall faces (i = 0, M on x; j = 0, M on y) carry zero normal velocity and
are never stored.

Beginner tip: why stagger?
  Keeping velocities on faces and scalars at cell centres means every
  "difference of neighbours" lands exactly where it is needed, so the
  pressure/velocity coupling cannot develop checkerboard modes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from staggered_chns.exceptions import ConfigurationError, ContractError

MIN_CELLS = 4

# 6-point transfer stencil, exact for polynomials of degree ≤ 5
TRANSFER6 = np.array([3.0, -25.0, 150.0, 150.0, -25.0, 3.0]) / 256.0


@dataclass(frozen=True)
class MacGrid:
    M: int
    h: float

    @property
    def primal_shape(self) -> tuple[int, int]:
        return (self.M, self.M)

    @property
    def xface_shape(self) -> tuple[int, int]:
        return (self.M - 1, self.M)

    @property
    def yface_shape(self) -> tuple[int, int]:
        return (self.M, self.M - 1)

    @property
    def state_size(self) -> int:
        """Length N of the flattened state [ρ; m1; m2; q]."""
        return 2 * self.M**2 + 2 * self.M * (self.M - 1)

    def centers(self) -> np.ndarray:
        """1D cell-centre coordinates (k−½)h, k = 1..M."""
        return (np.arange(1, self.M + 1) - 0.5) * self.h

    def faces(self) -> np.ndarray:
        """1D interior face coordinates kh, k = 1..M−1."""
        return np.arange(1, self.M) * self.h

    def primal_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.centers(), self.centers(), indexing="ij")

    def xface_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.faces(), self.centers(), indexing="ij")

    def yface_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.centers(), self.faces(), indexing="ij")


def make_grid(M: int) -> MacGrid:
    """Build the grid with M cells per direction (M ≥ 4)."""
    if int(M) != M or M < MIN_CELLS:
        raise ConfigurationError(
            f"M must be an integer ≥ {MIN_CELLS} (WENO5 needs the width), got {M}"
        )
    M = int(M)
    return MacGrid(M=M, h=1.0 / M)


# ── Primal → dual averaging ──────────────────────────────────────────────────

def to_staggered(rho: np.ndarray, axis: str) -> np.ndarray:
    """
    Two-point average of a primal field onto the interior faces.

    axis="x" → (ρ_{i,j} + ρ_{i+1,j})/2, shape (M−1)×M
    axis="y" → (ρ_{i,j} + ρ_{i,j+1})/2, shape M×(M−1)
    """
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ContractError(f"to_staggered expects a square primal field, got {rho.shape}")
    if axis == "x":
        return 0.5 * (rho[:-1, :] + rho[1:, :])
    if axis == "y":
        return 0.5 * (rho[:, :-1] + rho[:, 1:])
    raise ContractError(f"axis must be 'x' or 'y', got {axis!r}")


# ── Reflection ghosts ────────────────────────────────────────────────────────
# Used by transfer6 here and by every WENO reconstruction in convection.py.

def ghost_map(n: int, depth: int, kind: str) -> tuple[np.ndarray, np.ndarray]:
    """
    Source index and sign for each position of an extended 1D axis.

    kind="cell": n cell values, walls half a cell outside the first/last.
    kind="face": n+1 face values 0..n, walls on faces 0 and n.
    Reflection is repeated until the index lands inside, each mirror
    flipping the sign once.
    """
    if kind == "cell":
        last = n - 1
        virtual = np.arange(-depth, n + depth)
    elif kind == "face":
        last = n
        virtual = np.arange(-depth, n + 1 + depth)
    else:
        raise ContractError(f"kind must be 'cell' or 'face', got {kind!r}")

    src = virtual.copy()
    sign = np.ones_like(src, dtype=float)
    while True:
        low = src < 0
        high = src > last
        if not (low.any() or high.any()):
            break
        if kind == "cell":
            src[low] = -1 - src[low]
            src[high] = 2 * n - 1 - src[high]
        else:
            src[low] = -src[low]
            src[high] = 2 * n - src[high]
        sign[low | high] *= -1.0
    return src, sign


def extend_axis0(f: np.ndarray, odd: bool, kind: str, depth: int = 3) -> np.ndarray:
    """Extend f along axis 0 by mirror reflection (sign flip per mirror when odd)."""
    n = f.shape[0] if kind == "cell" else f.shape[0] - 1
    src, sign = ghost_map(n, depth, kind)
    out = f[src]
    if odd:
        out = out * sign.reshape((-1,) + (1,) * (f.ndim - 1))
    return out


def with_walls(f: np.ndarray) -> np.ndarray:
    """Add the two zero wall rows to an interior face field (axis 0)."""
    zero = np.zeros((1,) + f.shape[1:])
    return np.concatenate([zero, f, zero], axis=0)


def transfer_to_interfaces(fe: np.ndarray) -> np.ndarray:
    """
    Centered 6-point transfer at every interface of an extended array.

    The interface between positions p and p+1 uses p−2..p+3; the result
    has len(fe) − 5 entries along axis 0.
    """
    n = fe.shape[0] - 5
    out = np.zeros((n,) + fe.shape[1:])
    for k, weight in enumerate(TRANSFER6):
        out += weight * fe[k:k + n]
    return out


def transfer6(f: np.ndarray, axis: str, direction: str, parity: str | None = None) -> np.ndarray:
    """
    Move a field between the primal grid and a dual grid with the
    sixth-order stencil (3, −25, 150, 150, −25, 3)/256.

    direction="primal->dual": M×M → interior faces along axis
    direction="dual->primal": interior faces along axis → M×M
    parity defaults to "symmetric" for primal→dual (densities) and
    "antisymmetric" for dual→primal (momenta).
    """
    f = np.asarray(f, dtype=float)
    if axis not in ("x", "y"):
        raise ContractError(f"axis must be 'x' or 'y', got {axis!r}")
    if direction not in ("primal->dual", "dual->primal"):
        raise ContractError(f"unknown direction {direction!r}")
    if parity is None:
        parity = "symmetric" if direction == "primal->dual" else "antisymmetric"
    if parity not in ("symmetric", "antisymmetric"):
        raise ContractError(f"unknown parity {parity!r}")
    odd = parity == "antisymmetric"

    work = f if axis == "x" else f.T
    if direction == "primal->dual":
        out = transfer_to_interfaces(extend_axis0(work, odd, "cell"))[1:-1]
    else:
        if not odd:
            raise ContractError("dual->primal transfer needs wall values; only antisymmetric fields are supported")
        out = transfer_to_interfaces(extend_axis0(with_walls(work), odd, "face"))[1:-1]
    return out if axis == "x" else out.T
