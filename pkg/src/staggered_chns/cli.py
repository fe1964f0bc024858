"""
cli.py
------
Command-line interface for staggered-chns.

Beginner tip: what is a CLI?
  CLI = Command Line Interface. Instead of editing a script, you type
  commands in the Terminal. Each command here runs one kind of job:
  a single simulation, a convergence sweep, or a quick self-check.

Usage examples:
  python -m staggered_chns.cli run --scenario test1 --M 64 --T 0.1
  python -m staggered_chns.cli run --scenario test4 --M 128 --precond mg
  python -m staggered_chns.cli eoc --scheme dirksa --levels 8,16,32,64 --jobs 2
  python -m staggered_chns.cli show-scenario --scenario test3
  python -m staggered_chns.cli smoke-test
  python -m staggered_chns.cli --verbose run --scenario order --M 16

Exit codes: 0 ok, 2 positivity abort, 3 solver failure, 4 bad input.
"""

from __future__ import annotations

import logging
from pathlib import Path

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from staggered_chns.config import (
    DEFAULT_CFL,
    FLUX_VISCOSITY_CHOICES,
    LOG_LEVEL,
    OUT_DIR,
    PRECOND_CHOICES,
    SolverSettings,
    apply_solver_overrides,
    load_config_file,
)
from staggered_chns.exceptions import ChnsError, ConfigurationError
from staggered_chns.integrate.tableaus import available_tableaus
from staggered_chns.scenarios.registry import SCENARIOS

console = Console()
log = logging.getLogger("staggered_chns")


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level="DEBUG" if verbose else LOG_LEVEL,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


def _fail(exc: ChnsError):
    console.print(f"[bold red]Error:[/] {exc}")
    raise SystemExit(exc.exit_code)


def _parse_times(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"--snapshots must be comma-separated numbers, got {text!r}") from exc


def _resolve_settings(config: dict, precond, flux_viscosity, redo=False) -> SolverSettings:
    settings = apply_solver_overrides(SolverSettings(), config["solver"])
    return apply_solver_overrides(settings, {
        "precond": precond,
        "flux_viscosity": flux_viscosity,
        "redo_on_cfl_violation": redo or None,
    })


def _read_config(path: str | None) -> dict:
    if path is None:
        return {"params": {}, "solver": {}, "run": {}}
    return load_config_file(path)


# ── CLI group ─────────────────────────────────────────────────────────────────

@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level (per-stage iterations).")
def cli(verbose):
    """staggered-chns: compressible Cahn-Hilliard–Navier-Stokes on a staggered grid."""
    _setup_logging(verbose)


# ── run ───────────────────────────────────────────────────────────────────────

@cli.command("run")
@click.option("--scenario", "name", default="test1", show_default=True,
              type=click.Choice(list(SCENARIOS)))
@click.option("--M", "M", default=64, show_default=True, type=int, help="Cells per direction.")
@click.option("--T", "T", default=None, type=float, help="Final time (default: the scenario's).")
@click.option("--cfl", default=None, type=float, help=f"CFL number (default {DEFAULT_CFL}).")
@click.option("--scheme", default="dirksa", show_default=True, type=click.Choice(available_tableaus()))
@click.option("--seed", default=0, show_default=True, type=int, help="Noise seed (test3).")
@click.option("--out", default=None, help="Output directory (default: data/outputs/<run>/)")
@click.option("--snapshots", default=None, help="Comma-separated output times, e.g. 0,0.1,0.5")
@click.option("--precond", default=None, type=click.Choice(PRECOND_CHOICES))
@click.option("--flux-viscosity", default=None, type=click.Choice(FLUX_VISCOSITY_CHOICES))
@click.option("--redo-cfl", is_flag=True, help="Redo a step whose realized CFL overshoots.")
@click.option("--config", "config_path", default=None, help="key=value config file.")
def run_cmd(name, M, T, cfl, scheme, seed, out, snapshots, precond, flux_viscosity, redo_cfl, config_path):
    """
    Run one scenario and write diagnostics and snapshots.

    Example:
      python -m staggered_chns.cli run --scenario test3 --M 64 --seed 7
    """
    from staggered_chns.integrate.driver import run_scenario
    from staggered_chns.scenarios.registry import scenario

    try:
        config = _read_config(config_path)
        settings = _resolve_settings(config, precond, flux_viscosity, redo_cfl)
        cfl = cfl if cfl is not None else config["run"].get("cfl", DEFAULT_CFL)
        sc = scenario(name, M, seed=seed, overrides=config["params"])
        T_final = sc.T if T is None else T
        out_dir = Path(out) if out else OUT_DIR / f"{name}_M{M}_{scheme}"

        console.print(f"\n[bold]Running {name}[/] ({sc.description})")
        console.print(f"  M={M}  scheme={scheme}  CFL={cfl}  T={T_final}  precond={settings.precond}\n")

        with Progress(
            TextColumn("[cyan]t = {task.completed:.4g}"),
            BarColumn(),
            TextColumn("{task.percentage:>5.1f}%"),
            TimeElapsedColumn(),
            console=console,
        ) as progress:
            task = progress.add_task(name, total=T_final)
            result = run_scenario(
                sc, scheme=scheme, cfl=cfl, T=T_final, out_dir=out_dir,
                snapshot_times=_parse_times(snapshots), settings=settings,
                on_step=lambda t, dt: progress.update(task, completed=t),
            )
    except ChnsError as exc:
        _fail(exc)

    err_rho, err_q = result.diagnostics.max_relative_mass_error()
    last = result.diagnostics.last
    table = Table(title=f"{name} · M={M} · {scheme}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("steps", str(result.steps))
    table.add_row("final t", f"{result.t:.6g}")
    table.add_row("max |err_ρ| / Σρ⁰", f"{err_rho:.2e}")
    table.add_row("max |err_q| / Σq⁰", f"{err_q:.2e}")
    table.add_row("min c / max c", f"{last.cmin:.4f} / {last.cmax:.4f}")
    table.add_row("min ρ", f"{last.rhomin:.4f}")
    table.add_row("wall time", f"{result.wall_time:.1f} s")
    console.print(table)
    console.print(f"\n[bold green]Done.[/] Outputs saved to: {out_dir}")


# ── eoc ───────────────────────────────────────────────────────────────────────

@cli.command("eoc")
@click.option("--scenario", "name", default="order", show_default=True, type=click.Choice(["order"]))
@click.option("--scheme", default="dirksa", show_default=True, type=click.Choice(available_tableaus()))
@click.option("--levels", default="8,16,32,64,128", show_default=True, help="Comma-separated M values.")
@click.option("--T", "T", default=None, type=float, help="Final time (default 0.01).")
@click.option("--cfl", default=None, type=float)
@click.option("--jobs", default=1, show_default=True, type=int, help="Levels to run at the same time.")
@click.option("--precond", default=None, type=click.Choice(PRECOND_CHOICES))
@click.option("--out", default=None, help="Output directory (default: data/outputs/eoc_<scheme>/)")
@click.option("--config", "config_path", default=None, help="key=value config file.")
def eoc_cmd(name, scheme, levels, T, cfl, jobs, precond, out, config_path):
    """
    Convergence sweep on the manufactured solution: e_M and EOC per level.

    Writes eoc.csv and eoc.md.
    """
    from staggered_chns.export.export_tables import export_eoc
    from staggered_chns.integrate.driver import eoc_sweep, parse_levels

    out_dir = Path(out) if out else OUT_DIR / f"eoc_{scheme}"
    try:
        config = _read_config(config_path)
        settings = _resolve_settings(config, precond, None)
        cfl = cfl if cfl is not None else config["run"].get("cfl", DEFAULT_CFL)
        level_list = parse_levels(levels)
        console.print(f"\n[bold]EOC sweep[/] scheme={scheme} levels={level_list} jobs={jobs}\n")
        rows = eoc_sweep(
            level_list, scheme=scheme, cfl=cfl, T=T, settings=settings,
            overrides=config["params"], jobs=jobs, out_dir=out_dir,
            on_level=lambda M, e: console.print(f"  M={M:<5d} e_M={e:.4e}"),
        )
    except ChnsError as exc:
        _fail(exc)

    table = Table(title=f"Convergence · {scheme}")
    table.add_column("M", justify="right", style="cyan")
    table.add_column("e_M", justify="right")
    table.add_column("EOC_M", justify="right")
    for row in rows:
        order = "–" if row["EOC_M"] is None else f"{row['EOC_M']:.2f}"
        table.add_row(str(row["M"]), f"{row['e_M']:.4e}", order)
    console.print(table)

    csv_path, md_path = export_eoc(rows, out_dir, title=f"Convergence of {scheme}")
    console.print(f"\n[bold green]Saved:[/] {csv_path}, {md_path}")


# ── show-scenario ─────────────────────────────────────────────────────────────

@cli.command("show-scenario")
@click.option("--scenario", "name", default="test1", show_default=True, type=click.Choice(list(SCENARIOS)))
@click.option("--M", "M", default=16, show_default=True, type=int)
@click.option("--config", "config_path", default=None, help="key=value config file.")
def show_scenario_cmd(name, M, config_path):
    """Print the resolved parameters and output times of a scenario."""
    from staggered_chns.scenarios.registry import scenario

    try:
        config = _read_config(config_path)
        sc = scenario(name, M, overrides=config["params"])
    except ChnsError as exc:
        _fail(exc)

    table = Table(title=f"{name}: {sc.description}")
    table.add_column("Parameter", style="cyan")
    table.add_column("Value", justify="right")
    for key, value in sc.params.as_dict().items():
        table.add_row(key, f"{value:g}")
    table.add_row("T", f"{sc.T:g}")
    table.add_row("snapshots", ", ".join(f"{t:g}" for t in sc.snapshot_times) or "–")
    table.add_row("forcing", "yes" if sc.forcing is not None else "no")
    console.print(table)


# ── smoke-test ────────────────────────────────────────────────────────────────

@cli.command("smoke-test")
def smoke_test_cmd():
    """
    Run quick sanity checks on each solver layer.

    Uses tiny grids; finishes in seconds.
    """
    from staggered_chns.eval.eval_smoke import run_smoke_test
    passed = run_smoke_test()
    raise SystemExit(0 if passed else 1)


# ── Entry point ───────────────────────────────────────────────────────────────

if __name__ == "__main__":
    cli()
