"""
config.py
---------
Central configuration for the solver.

Paths, numeric defaults and solver tolerances live here.
Other modules import from this file: nothing is hardcoded elsewhere.

Beginner tip:
  os.getenv("KEY", "default") reads a value from your .env file.
  If the key is missing it returns the default value.

Config files:
  A run can also read a small text file of key=value lines, e.g.

      # my_run.cfg
      nu=0.01
      eps=1e-3
      precond=mg

  Values from the file override the scenario defaults; command-line
  flags override the file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

from dotenv import dotenv_values, load_dotenv

from staggered_chns.exceptions import ConfigurationError

# Load values from the .env file in the project root
load_dotenv()

# ── Project root and data directories ────────────────────────────────────────
# __file__ is this file: src/staggered_chns/config.py
# .parent.parent.parent climbs up to the project root
BASE_DIR = Path(__file__).parent.parent.parent
DATA_DIR = BASE_DIR / "data"
OUT_DIR  = Path(os.getenv("CHNS_OUT_DIR", str(DATA_DIR / "outputs")))

# ── Logging ──────────────────────────────────────────────────────────────────
LOG_LEVEL: str = os.getenv("CHNS_LOG_LEVEL", "INFO")

# ── Time stepping ────────────────────────────────────────────────────────────
DEFAULT_CFL: float = float(os.getenv("CHNS_CFL", "0.4"))
DT_MAX: float = 1e-2           # used only when the characteristic speed is 0
CFL_REDO_FACTOR: float = 1.1   # realized CFL above target·factor is flagged

# ── Stage solvers ────────────────────────────────────────────────────────────
CH_TOL: float = 1e-10
VEL_TOL: float = 1e-10
MAX_ITER_FACTOR: int = 10      # max_iter = factor · n
PRECOND: str = os.getenv("CHNS_PRECOND", "none")
MG_COARSEST: int = 4
MG_SWEEPS: int = 1

# ── Convection ───────────────────────────────────────────────────────────────
WENO_EPS: float = 1e-6
FLUX_VISCOSITY: str = "local"

PRECOND_CHOICES = ("none", "mg")
FLUX_VISCOSITY_CHOICES = ("local", "global")


@dataclass(frozen=True)
class SolverSettings:
    """Knobs of the stage solvers and of the step controller."""

    ch_tol: float = CH_TOL
    vel_tol: float = VEL_TOL
    max_iter_factor: int = MAX_ITER_FACTOR
    precond: str = PRECOND
    mg_coarsest: int = MG_COARSEST
    mg_sweeps: int = MG_SWEEPS
    flux_viscosity: str = FLUX_VISCOSITY
    dt_max: float = DT_MAX
    redo_on_cfl_violation: bool = False

    def __post_init__(self):
        if self.ch_tol <= 0 or self.vel_tol <= 0:
            raise ConfigurationError("Solver tolerances must be positive.")
        if self.max_iter_factor < 1:
            raise ConfigurationError("max_iter_factor must be at least 1.")
        if self.precond not in PRECOND_CHOICES:
            raise ConfigurationError(
                f"Unknown preconditioner {self.precond!r}; choose from {PRECOND_CHOICES}."
            )
        if self.flux_viscosity not in FLUX_VISCOSITY_CHOICES:
            raise ConfigurationError(
                f"Unknown flux_viscosity {self.flux_viscosity!r}; "
                f"choose from {FLUX_VISCOSITY_CHOICES}."
            )
        if self.mg_coarsest < 2 or self.mg_sweeps < 1:
            raise ConfigurationError("mg_coarsest must be ≥ 2 and mg_sweeps ≥ 1.")
        if self.dt_max <= 0:
            raise ConfigurationError("dt_max must be positive.")


# ── Config files ─────────────────────────────────────────────────────────────
# Maps file keys to (section, attribute, type). "params" keys land on
# ModelParams, "solver" keys on SolverSettings, "run" keys on the run itself.
CONFIG_KEYS: dict[str, tuple[str, str, type]] = {
    "gamma":           ("params", "gamma", float),
    "Cp":              ("params", "Cp", float),
    "eps":             ("params", "eps", float),
    "nu":              ("params", "nu", float),
    "lambda":          ("params", "lam", float),
    "g":               ("params", "g", float),
    "cfl":             ("run", "cfl", float),
    "ch_tol":          ("solver", "ch_tol", float),
    "vel_tol":         ("solver", "vel_tol", float),
    "max_iter_factor": ("solver", "max_iter_factor", int),
    "precond":         ("solver", "precond", str),
    "mg_coarsest":     ("solver", "mg_coarsest", int),
    "mg_sweeps":       ("solver", "mg_sweeps", int),
    "flux_viscosity":  ("solver", "flux_viscosity", str),
    "dt_max":          ("solver", "dt_max", float),
}


def load_config_file(path: Path | str) -> dict[str, dict[str, object]]:
    """
    Read a key=value file and sort its entries into sections.

    Returns {"params": {...}, "solver": {...}, "run": {...}} with values
    already converted to their types.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"Config file not found: {path}")

    raw = dotenv_values(path)
    sections: dict[str, dict[str, object]] = {"params": {}, "solver": {}, "run": {}}

    for key, value in raw.items():
        if key not in CONFIG_KEYS:
            known = ", ".join(sorted(CONFIG_KEYS))
            raise ConfigurationError(f"{path}: unknown key {key!r} (known keys: {known})")
        if value is None or value.strip() == "":
            raise ConfigurationError(f"{path}: key {key!r} has no value")
        section, attr, kind = CONFIG_KEYS[key]
        try:
            sections[section][attr] = kind(value.strip())
        except ValueError as exc:
            raise ConfigurationError(f"{path}: cannot read {key}={value!r} ({exc})") from exc

    return sections


def apply_solver_overrides(settings: SolverSettings, overrides: dict[str, object]) -> SolverSettings:
    """Return a copy of settings with the given attributes replaced (None values skipped)."""
    known = {f.name for f in fields(SolverSettings)}
    clean = {k: v for k, v in overrides.items() if v is not None and k in known}
    return replace(settings, **clean)
