"""
diagnostics.py
--------------
Per-step diagnostics: mass conservation errors, bounds, solver effort.

    err_rho(tⁿ) = Σ (ρⁿ − ρ⁰)
    err_q(tⁿ)   = Σ ((ρc)ⁿ − (ρc)⁰)

One CSV row per step, appended and flushed as the run goes, so a crashed
run still leaves its history behind.
"""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from staggered_chns.exceptions import ContractError
from staggered_chns.grid.fields import Fields

COLUMNS = ["t", "dt", "cs", "err_rho", "err_q", "cmin", "cmax", "rhomin", "it_ch", "it_vel"]


@dataclass
class DiagnosticsRow:
    t: float
    dt: float
    cs: float
    err_rho: float
    err_q: float
    cmin: float
    cmax: float
    rhomin: float
    it_ch: int
    it_vel: int


class Diagnostics:
    """Running time series; optionally mirrored to <out_dir>/diagnostics.csv."""

    def __init__(self, U0: Fields, out_dir: Path | None = None):
        self.mass0 = float(np.sum(U0.rho))
        self.q0 = float(np.sum(U0.q))
        self.rows: list[DiagnosticsRow] = []
        self.path: Path | None = None
        if out_dir is not None:
            out_dir = Path(out_dir)
            out_dir.mkdir(parents=True, exist_ok=True)
            self.path = out_dir / "diagnostics.csv"
            try:
                with self.path.open("w", newline="", encoding="utf-8") as f:
                    csv.writer(f).writerow(COLUMNS)
            except OSError as exc:
                raise OSError(f"cannot write diagnostics to {self.path}: {exc}") from exc

    def update(self, t: float, dt: float, cs: float, U: Fields, it_ch: int = 0, it_vel: int = 0) -> DiagnosticsRow:
        if self.rows and t < self.rows[-1].t:
            raise ContractError(f"diagnostics must be written in time order ({t} < {self.rows[-1].t})")
        c = U.c
        row = DiagnosticsRow(
            t=t, dt=dt, cs=cs,
            err_rho=float(np.sum(U.rho)) - self.mass0,
            err_q=float(np.sum(U.q)) - self.q0,
            cmin=float(c.min()), cmax=float(c.max()),
            rhomin=float(U.rho.min()),
            it_ch=int(it_ch), it_vel=int(it_vel),
        )
        self.rows.append(row)
        if self.path is not None:
            with self.path.open("a", newline="", encoding="utf-8") as f:
                csv.writer(f).writerow([_fmt(v) for v in asdict(row).values()])
        return row

    @property
    def last(self) -> DiagnosticsRow | None:
        return self.rows[-1] if self.rows else None

    def max_relative_mass_error(self) -> tuple[float, float]:
        """(max |err_rho|/|Σρ⁰|, max |err_q|/|Σq⁰|) over all rows."""
        er = max((abs(r.err_rho) for r in self.rows), default=0.0)
        eq = max((abs(r.err_q) for r in self.rows), default=0.0)
        return er / abs(self.mass0), (eq / abs(self.q0) if self.q0 != 0.0 else eq)


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def read_diagnostics(path: Path) -> list[dict[str, float]]:
    with Path(path).open(newline="", encoding="utf-8") as f:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(f)]
