"""
driver.py
---------
The simulation loop and the convergence sweep.

  run_scenario   dt_select → step → diagnostics → snapshots, until T
  run_order_level  one manufactured-solution run, returns e_M
  eoc_sweep      e_M and EOC over a list of grid sizes

Beginner tip: why clip Δt to the snapshot times?
  The CFL condition only bounds Δt from above. Shortening the step that
  would jump over an output time lands the run exactly on it, so the
  snapshot shows the state at t = 0.1, not at t = 0.1037.

Outputs in <out_dir>/ (when an output directory is given):
  diagnostics.csv, snapshot_*.csv, snapshot_*.vtk, levelset_*.csv, run.json
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from staggered_chns.config import CFL_REDO_FACTOR, DEFAULT_CFL, OUT_DIR, SolverSettings
from staggered_chns.exceptions import ConfigurationError, PositivityError
from staggered_chns.grid.fields import Fields, check_admissible
from staggered_chns.integrate.imex import TimeControls, dt_select, step
from staggered_chns.integrate.tableaus import tableau
from staggered_chns.output.diagnostics import Diagnostics
from staggered_chns.output.snapshots import write_snapshot
from staggered_chns.physics.convection import max_char_speed
from staggered_chns.scenarios.errors import compute_error, eoc_table
from staggered_chns.scenarios.registry import Scenario, scenario

log = logging.getLogger(__name__)

TIME_TOL = 1e-12


@dataclass
class RunResult:
    scenario: str
    M: int
    scheme: str
    cfl: float
    t: float
    steps: int
    U: Fields
    diagnostics: Diagnostics
    seed: int = 0
    redos: int = 0
    wall_time: float = 0.0
    out_dir: Path | None = None
    snapshots: list[dict[str, Path]] = field(default_factory=list)

    def summary(self) -> dict:
        last = self.diagnostics.last
        return {
            "scenario": self.scenario,
            "M": self.M,
            "scheme": self.scheme,
            "cfl": self.cfl,
            "seed": self.seed,
            "steps": self.steps,
            "redos": self.redos,
            "final_t": self.t,
            "wall_time_s": round(self.wall_time, 3),
            "final_diagnostics": vars(last) if last is not None else None,
        }


def _dump_state(U: Fields, t: float, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"positivity_dump_{t:.6e}.npz"
    np.savez_compressed(path, rho=U.rho, m1=U.m1, m2=U.m2, q=U.q, t=t)
    return path


def _due(pending: list[float], t: float) -> bool:
    return bool(pending) and pending[0] <= t + TIME_TOL


def run_scenario(
    sc: Scenario,
    scheme: str = "dirksa",
    cfl: float = DEFAULT_CFL,
    T: float | None = None,
    out_dir: Path | None = None,
    snapshot_times: list[float] | None = None,
    settings: SolverSettings | None = None,
    on_step: Callable[[float, float], None] | None = None,
) -> RunResult:
    """
    Integrate a scenario from t = 0 to T.

    snapshot_times defaults to the scenario's own list; times beyond T are
    dropped. on_step(t, dt) is called after every accepted step.
    """
    settings = settings or SolverSettings()
    pair = tableau(scheme)
    T = sc.T if T is None else T
    controls = TimeControls(cfl=cfl, T=T)
    params = sc.params
    out_dir = Path(out_dir) if out_dir is not None else None
    started = time.perf_counter()

    U = sc.initial.copy()
    check_admissible(U, where="initial data", time=0.0)
    diagnostics = Diagnostics(U, out_dir)
    diagnostics.update(0.0, 0.0, max_char_speed(U, params), U)

    times = sc.snapshot_times if snapshot_times is None else snapshot_times
    pending = sorted(t for t in times if 0.0 <= t <= T + TIME_TOL)
    result = RunResult(sc.name, sc.grid.M, scheme, cfl, 0.0, 0, U, diagnostics,
                       seed=sc.seed, out_dir=out_dir)

    def flush_snapshots(t_now: float) -> None:
        while _due(pending, t_now):
            pending.pop(0)
            if out_dir is not None:
                result.snapshots.append(write_snapshot(out_dir, sc.grid, U, params, t_now))

    flush_snapshots(0.0)
    stage_cs = None

    while T - controls.t > TIME_TOL * max(T, 1.0):
        dt = dt_select(U, controls, params, stage_cs, settings.dt_max)
        if pending:
            dt = min(dt, pending[0] - controls.t)

        try:
            U_new, report = step(U, dt, pair, params, t=controls.t,
                                 settings=settings, forcing=sc.forcing)
            if report.realized_cfl > cfl * CFL_REDO_FACTOR:
                log.warning("step at t=%.6g: realized CFL %.3f exceeds target %.3f",
                            controls.t, report.realized_cfl, cfl)
                if settings.redo_on_cfl_violation:
                    dt = 0.5 * dt
                    log.info("redoing step at t=%.6g with dt=%.3e", controls.t, dt)
                    U_new, report = step(U, dt, pair, params, t=controls.t,
                                         settings=settings, forcing=sc.forcing)
                    result.redos += 1
        except PositivityError as exc:
            exc.dump_path = _dump_state(U, controls.t, out_dir or OUT_DIR)
            raise

        U = U_new
        controls.t += dt
        if pending and abs(pending[0] - controls.t) <= TIME_TOL:
            controls.t = pending[0]
        stage_cs = report.stage_cs
        result.steps += 1
        diagnostics.update(controls.t, dt, report.stage_cs, U,
                           sum(report.it_ch), sum(report.it_vel))
        flush_snapshots(controls.t)
        if on_step is not None:
            on_step(controls.t, dt)

    result.U = U
    result.t = controls.t
    result.wall_time = time.perf_counter() - started
    if out_dir is not None:
        (out_dir / "run.json").write_text(json.dumps(result.summary(), indent=2), encoding="utf-8")
    log.info("%s M=%d finished: %d steps to t=%.6g", sc.name, sc.grid.M, result.steps, result.t)
    return result


# ── Convergence sweep ────────────────────────────────────────────────────────

def run_order_level(
    M: int,
    scheme: str = "dirksa",
    cfl: float = DEFAULT_CFL,
    T: float | None = None,
    settings: SolverSettings | None = None,
    overrides: dict | None = None,
    out_dir: Path | None = None,
) -> tuple[float, RunResult]:
    """Run the manufactured solution on an M×M grid; returns (e_M, RunResult)."""
    sc = scenario("order", M, overrides=overrides)
    result = run_scenario(sc, scheme=scheme, cfl=cfl, T=T, out_dir=out_dir, settings=settings)
    return compute_error(result.U, sc.exact(result.t)), result


def parse_levels(text: str) -> list[int]:
    """'8,16,32' → [8, 16, 32]."""
    try:
        levels = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"levels must be comma-separated integers, got {text!r}") from exc
    if not levels:
        raise ConfigurationError("at least one level is required")
    return levels


def eoc_sweep(
    levels: list[int],
    scheme: str = "dirksa",
    cfl: float = DEFAULT_CFL,
    T: float | None = None,
    settings: SolverSettings | None = None,
    overrides: dict | None = None,
    jobs: int = 1,
    out_dir: Path | None = None,
    on_level: Callable[[int, float], None] | None = None,
) -> list[dict]:
    """
    e_M on every level and EOC between consecutive ones.

    jobs > 1 runs that many levels at a time as background jobs.
    """
    levels = sorted(levels)
    if jobs < 1:
        raise ConfigurationError(f"jobs must be at least 1, got {jobs}")

    errors: dict[int, float] = {}
    if jobs == 1:
        for M in levels:
            errors[M], _ = run_order_level(M, scheme, cfl, T, settings, overrides)
            if on_level is not None:
                on_level(M, errors[M])
    else:
        from staggered_chns.jobs import run_level_jobs
        jobs_dir = (Path(out_dir) if out_dir is not None else OUT_DIR) / "jobs"
        errors = run_level_jobs(levels, jobs, jobs_dir, scheme=scheme, cfl=cfl, T=T,
                                settings=settings, overrides=overrides, on_level=on_level)

    return eoc_table(levels, [errors[M] for M in levels])
