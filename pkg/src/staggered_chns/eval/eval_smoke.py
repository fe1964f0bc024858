"""
eval_smoke.py
-------------
Smoke test: a quick sanity check that each solver layer works.

Beginner tip: what is a smoke test?
  A smoke test is the simplest possible test: just make sure nothing
  "catches fire" when you run the code. It does not measure convergence
  orders, only that the grid, the operators, one time step and the
  preconditioned solver connect properly on a tiny grid.

Run with:
  python -m staggered_chns.cli smoke-test
"""

from __future__ import annotations

import numpy as np
from rich.console import Console
from rich.table import Table

console = Console()

# Tiny grids keep the whole table under a few seconds
SAMPLE_M = 8
SAMPLE_MG_M = 16


def run_smoke_test() -> bool:
    """
    Run all smoke tests. Returns True if all pass, False otherwise.
    """
    console.print("\n[bold cyan]Running smoke tests...[/]\n")

    results = [
        _test_transfer(),
        _test_spd(),
        _test_conservation(),
        _test_multigrid(),
    ]

    table = Table(title="Smoke Test Results")
    table.add_column("Test",   style="cyan")
    table.add_column("Status", style="bold")
    table.add_column("Detail")

    all_passed = True
    for name, passed, detail in results:
        status = "[green]PASS[/]" if passed else "[red]FAIL[/]"
        table.add_row(name, status, detail)
        all_passed = all_passed and passed

    console.print(table)

    if all_passed:
        console.print("\n[bold green]All smoke tests passed![/]")
    else:
        console.print("\n[bold red]Some tests failed. See details above.[/]")

    return all_passed


def _test_transfer() -> tuple[str, bool, str]:
    """A constant density stays constant on the faces."""
    try:
        from staggered_chns.grid.mac_grid import make_grid, transfer6
        grid = make_grid(SAMPLE_M)
        rho = np.full(grid.primal_shape, 1.3)
        faces = transfer6(rho, "x", "primal->dual")
        assert faces.shape == grid.xface_shape, f"shape {faces.shape}"
        err = float(np.max(np.abs(faces - 1.3)))
        assert err < 1e-14, f"constant not preserved (err {err:.1e})"
        return ("Grid transfer", True, f"M={SAMPLE_M}, err {err:.1e}")
    except Exception as e:
        return ("Grid transfer", False, str(e))


def _test_spd() -> tuple[str, bool, str]:
    """Viscous and Cahn-Hilliard stage operators factor as SPD."""
    try:
        from staggered_chns.grid.mac_grid import to_staggered
        from staggered_chns.physics.cahn_hilliard import ch_system_matrix
        from staggered_chns.physics.viscosity import visc_system_matrix

        rho = np.random.default_rng(0).uniform(0.5, 2.0, (SAMPLE_M, SAMPLE_M))
        checked = []
        for label, A in (
            ("velocity", visc_system_matrix(to_staggered(rho, "x"), to_staggered(rho, "y"), 1e-3, 1.0, 0.1)),
            ("CH", ch_system_matrix(rho, 1e-3, 1e-4)),
        ):
            dense = A.toarray()
            asym = float(np.max(np.abs(dense - dense.T)))
            assert asym < 1e-12, f"{label} operator not symmetric ({asym:.1e})"
            np.linalg.cholesky(dense)
            checked.append(label)
        return ("SPD operators", True, " + ".join(checked) + " factor OK")
    except Exception as e:
        return ("SPD operators", False, str(e))


def _test_conservation() -> tuple[str, bool, str]:
    """One dirksa step of test1 keeps Σρ and Σq."""
    try:
        from staggered_chns.integrate.imex import TimeControls, dt_select, step
        from staggered_chns.integrate.tableaus import tableau
        from staggered_chns.scenarios.registry import scenario

        sc = scenario("test1", SAMPLE_M)
        U0 = sc.initial
        dt = dt_select(U0, TimeControls(cfl=0.4, T=sc.T), sc.params)
        U1, report = step(U0, dt, tableau("dirksa"), sc.params)
        err_rho = abs(U1.rho.sum() - U0.rho.sum()) / U0.rho.sum()
        err_q = abs(U1.q.sum() - U0.q.sum()) / max(abs(U0.q.sum()), 1.0)
        assert err_rho < 1e-12 and err_q < 1e-12, f"mass drift {err_rho:.1e}, {err_q:.1e}"
        its = sum(report.it_ch) + sum(report.it_vel)
        return ("Conservation", True, f"dt={dt:.2e}, {its} CG its, drift {max(err_rho, err_q):.1e}")
    except Exception as e:
        return ("Conservation", False, str(e))


def _test_multigrid() -> tuple[str, bool, str]:
    """Multigrid-preconditioned CG converges and needs fewer iterations."""
    try:
        from staggered_chns.physics.cahn_hilliard import ch_system_operator
        from staggered_chns.solve.cg import cg
        from staggered_chns.solve.multigrid import build_preconditioner

        M = SAMPLE_MG_M
        rho = np.ones((M, M))
        op = ch_system_operator(rho, 1e-2, 1e-3)
        b = np.random.default_rng(1).standard_normal(M * M)
        pre = build_preconditioner(op, M, "primal")
        _, plain = cg(op, b, tol=1e-10)
        _, with_mg = cg(op, b, tol=1e-10, preconditioner=pre)
        assert with_mg.converged, "preconditioned CG did not converge"
        assert with_mg.iterations <= plain.iterations, "multigrid did not help"
        return ("Multigrid CG", True, f"{plain.iterations} → {with_mg.iterations} iterations")
    except Exception as e:
        return ("Multigrid CG", False, str(e))
