"""Real scattering potentials on the half-line.

The base problem is h0 = -d^2/dx^2 + v0(x) on [0, inf) with a real valued
v0 decaying past a declared radius; the Jost solver relies on that decay to
impose exact asymptotic data at x_max.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

#: |v0(x)| must fall below this beyond the declared decay radius.
TOL_ASYM = 1e-8


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential with declared decay.

    Attributes
    ----------
    kind : str
        One of "zero", "square_well", "user_table".
    evaluate : callable
        Vectorized map x -> v0(x), real valued.
    decay_radius : float
        Radius beyond which |v0| < TOL_ASYM.
    breakpoints : tuple of float
        Interior discontinuities of v0; ODE integration splits there and
        finite-difference checks skip their neighborhoods.
    params : dict
        Construction parameters, kept for serialization.
    """

    kind: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    decay_radius: float
    breakpoints: tuple[float, ...] = ()
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.evaluate(x)


def zero_potential() -> Potential:
    """The free problem v0 = 0."""
    return Potential(
        kind="zero",
        evaluate=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        decay_radius=0.0,
    )


def square_well(depth: float, width: float) -> Potential:
    """Attractive square well: v0 = -depth on [0, width), 0 beyond.

    `depth` may be negative for a barrier; `width` must be positive.
    """
    if width <= 0:
        raise ValueError("width must be positive")
    depth = float(depth)
    width = float(width)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < width, -depth, 0.0)

    return Potential(
        kind="square_well",
        evaluate=evaluate,
        decay_radius=width,
        breakpoints=(width,),
        params={"depth": depth, "width": width},
    )


def table_potential(path: str | Path) -> Potential:
    """Load a potential from a two-column whitespace-separated file (x, v0).

    The x column must be strictly increasing and start at 0.  The tabulated
    values are interpolated with a cubic spline inside the table range and
    the potential is zero beyond it; the decay radius is the last x at which
    |v0| >= TOL_ASYM.
    """
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns (x, v0)")
    x, v = data[:, 0], data[:, 1]
    if not np.all(np.diff(x) > 0):
        raise ValueError(f"{path}: x column must be strictly increasing")
    if abs(x[0]) > 1e-12:
        raise ValueError(f"{path}: table must start at x = 0")
    if not np.all(np.isreal(v)):
        raise ValueError(f"{path}: v0 must be real valued")

    spline = CubicSpline(x, v, bc_type="natural")
    x_end = float(x[-1])
    big = np.nonzero(np.abs(v) >= TOL_ASYM)[0]
    decay_radius = float(x[big[-1]]) if len(big) else 0.0

    def evaluate(xq):
        xq = np.asarray(xq, dtype=float)
        out = np.where(xq <= x_end, spline(np.clip(xq, 0.0, x_end)), 0.0)
        return out

    return Potential(
        kind="user_table",
        evaluate=evaluate,
        decay_radius=decay_radius,
        params={"path": str(path)},
    )


def make_potential(kind: str, **params) -> Potential:
    """Factory used by config parsing."""
    if kind == "zero":
        return zero_potential()
    if kind == "square_well":
        return square_well(params["depth"], params["width"])
    if kind == "user_table":
        return table_potential(params["path"])
    raise ValueError(f"unknown potential kind: {kind!r}")
