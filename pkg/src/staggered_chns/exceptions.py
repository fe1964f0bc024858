"""
exceptions.py
-------------
Every error the solver raises on purpose.

Each class carries the process exit code the CLI should use, so the
command-line layer can turn any failure into the right status without
a long if/elif chain.

Exit codes:
  0  success
  2  positivity abort (a density went non-positive)
  3  solver failure (CG did not converge, breakdown, NaN in a flux)
  4  configuration error (bad input, bad shapes, bad config file)
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from staggered_chns.solve.linear_operator import SolveReport


class ChnsError(Exception):
    """Base class. Subclasses pick the exit code."""

    exit_code: int = 1


class ConfigurationError(ChnsError, ValueError):
    """Unknown scenario/scheme, invalid parameters, unreadable config file."""

    exit_code = 4


class ContractError(ChnsError, ValueError):
    """A field or vector does not have the shape the operation expects."""

    exit_code = 4


class PositivityError(ChnsError, RuntimeError):
    """A density (primal or staggered) is zero or negative."""

    exit_code = 2

    def __init__(self, message: str, where: str = "", time: float | None = None):
        super().__init__(message)
        self.where = where
        self.time = time
        self.dump_path: Path | None = None

    def __str__(self) -> str:
        text = super().__str__()
        if self.time is not None:
            text += f" (t={self.time:.6g})"
        if self.dump_path is not None:
            text += f"; state dumped to {self.dump_path}"
        return text


class NumericError(ChnsError, ArithmeticError):
    """Non-finite values showed up in a flux or a tendency."""

    exit_code = 3


class SolverError(ChnsError, RuntimeError):
    """A stage linear solve failed."""

    exit_code = 3

    def __init__(self, message: str, report: "SolveReport | None" = None):
        super().__init__(message)
        self.report = report


class NotSpdError(SolverError):
    """CG found pᵀAp ≤ 0, so the operator is not positive definite."""
