"""
snapshots.py
------------
Field snapshots on the cell centres, written in two formats:

  snapshot_<tag>.csv   x, y, rho, v1c, v2c, c, p, dp   (one row per cell)
  snapshot_<tag>.vtk   legacy VTK ASCII STRUCTURED_POINTS, for ParaView/VisIt
  levelset_<tag>.csv   x0, y0, x1, y1 segments of the zero level set of c

v1c, v2c are face velocities averaged to the cell centres (output only);
dp = p − mean(p) is the pressure fluctuation.

Beginner tip: why two formats?
  The CSV is easy to load into pandas or a spreadsheet; the VTK file
  opens directly in visualization tools for contour plots.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from staggered_chns.grid.fields import Fields
from staggered_chns.grid.mac_grid import MacGrid, with_walls
from staggered_chns.physics.params import ModelParams

log = logging.getLogger(__name__)

SNAPSHOT_COLUMNS = ["x", "y", "rho", "v1c", "v2c", "c", "p", "dp"]


def snapshot_tag(t: float) -> str:
    return f"t{t:.6e}".replace("+", "")


def cell_centred(U: Fields, params: ModelParams) -> dict[str, np.ndarray]:
    """All output quantities on the primal grid."""
    v1 = with_walls(U.v1)
    v2 = with_walls(U.v2.T).T
    p = params.pressure(U.rho)
    return {
        "rho": U.rho,
        "v1c": 0.5 * (v1[1:, :] + v1[:-1, :]),
        "v2c": 0.5 * (v2[:, 1:] + v2[:, :-1]),
        "c": U.c,
        "p": p,
        "dp": p - p.mean(),
    }


# ── CSV ──────────────────────────────────────────────────────────────────────

def write_snapshot_csv(path: Path, grid: MacGrid, values: dict[str, np.ndarray]) -> Path:
    xp, yp = grid.primal_nodes()
    columns = [xp, yp] + [values[name] for name in SNAPSHOT_COLUMNS[2:]]
    flat = [vec.ravel(order="F") for vec in columns]
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SNAPSHOT_COLUMNS)
        for k in range(flat[0].size):
            writer.writerow([repr(float(col[k])) for col in flat])
    return Path(path)


def read_snapshot_csv(path: Path) -> dict[str, np.ndarray]:
    """Columns of a snapshot CSV as 1D arrays (x fastest)."""
    with Path(path).open(newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    return {name: np.array([float(r[name]) for r in rows]) for name in SNAPSHOT_COLUMNS}


# ── VTK ──────────────────────────────────────────────────────────────────────

def write_vtk(path: Path, grid: MacGrid, values: dict[str, np.ndarray], t: float) -> Path:
    M, h = grid.M, grid.h
    lines = [
        "# vtk DataFile Version 3.0",
        f"staggered-chns snapshot t={t!r}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {M} {M} 1",
        f"ORIGIN {h / 2!r} {h / 2!r} 0.0",
        f"SPACING {h!r} {h!r} 1.0",
        f"POINT_DATA {M * M}",
    ]
    for name in ("rho", "c", "p", "dp"):
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default"]
        lines += [repr(float(v)) for v in values[name].ravel(order="F")]
    lines.append("VECTORS velocity double")
    for u, v in zip(values["v1c"].ravel(order="F"), values["v2c"].ravel(order="F")):
        lines.append(f"{float(u)!r} {float(v)!r} 0.0")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return Path(path)


# ── Zero level set ───────────────────────────────────────────────────────────

def _crossing(p0, p1, f0, f1):
    s = f0 / (f0 - f1)
    return (p0[0] + s * (p1[0] - p0[0]), p0[1] + s * (p1[1] - p0[1]))


def zero_level_segments(grid: MacGrid, c: np.ndarray) -> list[tuple[float, float, float, float]]:
    """Marching squares on the primal nodes: segments where c changes sign."""
    xs = grid.centers()
    segments = []
    positive = c >= 0.0
    for i in range(grid.M - 1):
        for j in range(grid.M - 1):
            corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
            signs = [positive[a, b] for a, b in corners]
            if all(signs) or not any(signs):
                continue
            points = []
            for k in range(4):
                a, b = corners[k], corners[(k + 1) % 4]
                if signs[k] != signs[(k + 1) % 4]:
                    points.append(_crossing(
                        (xs[a[0]], xs[a[1]]), (xs[b[0]], xs[b[1]]), c[a], c[b]
                    ))
            if len(points) == 2:
                segments.append((*points[0], *points[1]))
            else:
                # saddle: join according to the sign of the cell average
                centre_positive = np.mean([c[a, b] for a, b in corners]) >= 0.0
                if centre_positive == signs[0]:
                    pairs = ((0, 1), (2, 3))
                else:
                    pairs = ((3, 0), (1, 2))
                for p, q in pairs:
                    segments.append((*points[p], *points[q]))
    return segments


def write_level_set(path: Path, segments) -> Path:
    with Path(path).open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["x0", "y0", "x1", "y1"])
        for seg in segments:
            writer.writerow([repr(float(v)) for v in seg])
    return Path(path)


def write_snapshot(out_dir: Path, grid: MacGrid, U: Fields, params: ModelParams, t: float) -> dict[str, Path]:
    """Write the CSV, VTK and level-set files for one output time."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tag = snapshot_tag(t)
    values = cell_centred(U, params)
    try:
        paths = {
            "csv": write_snapshot_csv(out_dir / f"snapshot_{tag}.csv", grid, values),
            "vtk": write_vtk(out_dir / f"snapshot_{tag}.vtk", grid, values, t),
            "levelset": write_level_set(out_dir / f"levelset_{tag}.csv",
                                        zero_level_segments(grid, values["c"])),
        }
    except OSError as exc:
        raise OSError(f"cannot write snapshot at t={t} into {out_dir}: {exc}") from exc
    log.info("snapshot t=%.4g written to %s", t, out_dir)
    return paths
