"""Uniform half-line grids."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [0, x_max] with n_points samples (endpoints included)."""

    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_max > 0:
            raise ValueError("x_max must be positive")
        if self.n_points < 2:
            raise ValueError("n_points must be at least 2")

    @cached_property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.x_max, self.n_points)

    @property
    def spacing(self) -> float:
        return self.x_max / (self.n_points - 1)

    def index_of(self, x: float) -> int:
        """Index of the grid point nearest to x."""
        i = int(round(x / self.spacing))
        return min(max(i, 0), self.n_points - 1)


#: Default display/system grid: resolves oscillations up to k ~ 10 with
#: >= 12 points per period.
DEFAULT_GRID = Grid(x_max=40.0, n_points=8001)

#: Longer grid used for smeared (distributional) pairings, where the damped
#: tail of the x integral must fall below quad_tol for the whole eta schedule.
SMEARING_GRID = Grid(x_max=100.0, n_points=20001)
