"""Sampled complex wavefunctions and Jost data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import Grid


@dataclass(frozen=True, eq=False)
class WaveSample:
    """Complex function and derivative sampled on a grid.

    `wavenumber` is the k at which the sample solves its Schrodinger
    equation, if applicable; `solves` records which operator that equation
    belongs to ("base" for h0, "transformed" for H).  Operations use these
    to replace finite differences with exact ODE identities.
    """

    grid: Grid
    values: np.ndarray
    derivatives: np.ndarray
    wavenumber: complex | None = None
    solves: str | None = None

    def __post_init__(self):
        if len(self.values) != self.grid.n_points:
            raise ValueError("values length does not match the grid")
        if len(self.derivatives) != self.grid.n_points:
            raise ValueError("derivatives length does not match the grid")

    def value_at(self, x: float) -> complex:
        """Value at the grid point nearest to x."""
        return complex(self.values[self.grid.index_of(x)])


@dataclass(frozen=True, eq=False)
class JostData:
    """Jost solution plus the Jost function F(k) = f(k, 0)."""

    solution: WaveSample
    jost_function_value: complex
    k: complex
