"""Base half-line problem: Jost solutions, Jost function, continuum states.

The Jost solution f(k, x) of -f'' + v0 f = k^2 f is fixed by its behavior
f -> exp(ikx) at infinity.  It is integrated inward from x_max, where the
potential has decayed, with exact asymptotic initial data.  To keep relative
accuracy when f decays toward x_max (complex k with Im k > 0) the system is
integrated for g = f / f(x_max) and rescaled afterwards.

Delta-normalized continuum eigenfunctions of the self-adjoint base problem
are built from the Jost solution and the Jost function F(k) = f(k, 0):

    psi_k(x) = sqrt(2/pi) * Im(conj(F(k)) f(k, x)) / |F(k)|,   k > 0,

which is real, satisfies psi_k(0) = 0 exactly, has psi_k'(0) > 0 (the global
phase convention), and carries asymptotic amplitude sqrt(2/pi) so that
<psi_k | psi_k'> = delta(k - k') in the smeared sense.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (
    AsymptoticRegionTooSmall,
    IntegrationDiverged,
    JostZeroOnRealAxis,
)
from .grids import Grid, SMEARING_GRID
from .potentials import Potential
from .quadrature import (
    DEFAULT_ETA_SCHEDULE,
    QUAD_TOL,
    SmearedFunctional,
    damped_integral,
    fd_derivative,
    interior_mask,
    oscillation_panels,
)
from .testfunctions import TestFunction
from .waves import JostData, WaveSample

#: Contract tolerance for ODE residuals of returned samples.
ODE_TOL = 1e-10

#: |F(k)| below this on the real axis signals an out-of-contract base problem.
ZERO_TOL = 1e-8

#: The integrator runs three orders tighter than the residual contract:
#: finite-difference residual checks amplify dense-output noise by 1/h, so
#: meeting ODE_TOL on the default grid needs ~1e-13 sample accuracy.
_RTOL = 1e-13
_ATOL = 1e-15

_CHUNK = 300

_ENV_THREADS = "SUSYLINE_THREADS"


def _max_workers() -> int:
    cap = os.environ.get(_ENV_THREADS)
    if cap:
        try:
            return max(1, int(cap))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def _integrate_chunk(
    potential: Potential, ks: np.ndarray, grid: Grid, rtol: float, atol: float
):
    """Integrate f(k, .) inward for a batch of wavenumbers at once.

    Returns (values, derivatives) with shape (len(ks), n_points), scaled so
    that f(x_max) = exp(i k x_max) exactly.
    """
    ks = np.asarray(ks, dtype=complex)
    n = len(ks)
    k2 = ks * ks
    x = grid.x
    v = potential.evaluate

    def rhs(t, y):
        pot = v(t)
        return np.concatenate((y[n:], (pot - k2) * y[:n]))

    # normalized initial data g(x_max) = 1, g'(x_max) = ik
    y = np.concatenate((np.ones(n, dtype=complex), 1j * ks))

    # split at potential discontinuities so adaptive stepping never
    # straddles a jump of v0
    cuts = sorted(b for b in potential.breakpoints if 0.0 < b < grid.x_max)
    edges = [grid.x_max] + cuts[::-1] + [0.0]

    vals = np.empty((n, grid.n_points), dtype=complex)
    derivs = np.empty_like(vals)
    filled = np.zeros(grid.n_points, dtype=bool)
    for hi_edge, lo_edge in zip(edges[:-1], edges[1:]):
        sel = np.nonzero(~filled & (x >= lo_edge - 1e-12) & (x <= hi_edge + 1e-12))[0]
        pts = x[sel][::-1]  # descending, direction of integration
        prepend = len(pts) == 0 or abs(pts[0] - hi_edge) > 1e-12
        append = len(pts) == 0 or abs(pts[-1] - lo_edge) > 1e-12
        t_eval = np.concatenate(
            (([hi_edge] if prepend else []), pts, ([lo_edge] if append else []))
        )
        sol = solve_ivp(
            rhs,
            (hi_edge, lo_edge),
            y,
            t_eval=t_eval,
            method="DOP853",
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise IntegrationDiverged(
                f"adaptive stepping failed on [{lo_edge}, {hi_edge}]: {sol.message}"
            )
        cols = sol.y[:, (1 if prepend else 0) : sol.y.shape[1] - (1 if append else 0)]
        vals[:, sel] = cols[:n, ::-1]
        derivs[:, sel] = cols[n:, ::-1]
        filled[sel] = True
        y = sol.y[:, -1]  # continue from the segment's inner edge

    scale = np.exp(1j * ks * grid.x_max)
    return vals * scale[:, None], derivs * scale[:, None]


def iter_jost_chunks(
    potential: Potential,
    ks: Iterable[complex],
    grid: Grid,
    chunk: int = _CHUNK,
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (indices, k, values, derivatives) chunks for a k sweep.

    Wavenumbers are integrated in ascending-|k| chunks (the step controller
    is gated by the fastest oscillation in a batch); `indices` maps rows
    back to the caller's order.  Chunks run on a thread pool capped by the
    SUSYLINE_THREADS environment variable.
    """
    ks = np.asarray(list(ks), dtype=complex)
    if np.any(ks == 0):
        raise ValueError("k = 0 is outside the Jost solver's contract")
    if grid.x_max <= potential.decay_radius:
        raise AsymptoticRegionTooSmall(
            f"x_max = {grid.x_max} must exceed the decay radius "
            f"{potential.decay_radius}"
        )
    order = np.argsort(np.abs(ks), kind="stable")
    batches = [order[i : i + chunk] for i in range(0, len(ks), chunk)]

    def work(idx):
        v, d = _integrate_chunk(potential, ks[idx], grid, _RTOL, _ATOL)
        return idx, ks[idx], v, d

    workers = _max_workers()
    if workers == 1 or len(batches) == 1:
        for idx in batches:
            yield work(idx)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(work, batches)


def jost_sweep(potential: Potential, ks, grid: Grid):
    """Solve f(k, .) for every k, returning dense arrays.

    Returns (values, derivatives) of shape (len(ks), n_points) in the input
    order.  Prefer :func:`iter_jost_chunks` for large sweeps; this keeps the
    whole result in memory.
    """
    ks = np.asarray(list(ks), dtype=complex)
    vals = np.empty((len(ks), grid.n_points), dtype=complex)
    derivs = np.empty_like(vals)
    for idx, _, v, d in iter_jost_chunks(potential, ks, grid):
        vals[idx] = v
        derivs[idx] = d
    return vals, derivs


def solve_jost(potential: Potential, k: complex, grid: Grid) -> JostData:
    """Jost solution of -f'' + v0 f = k^2 f with f -> exp(ikx).

    Integrates inward from x_max with exact asymptotic data f(x_max) =
    exp(i k x_max), f'(x_max) = ik exp(i k x_max).  Valid for Im(k) >= 0
    (which covers k = -ia with Re(a) <= 0).
    """
    k = complex(k)
    if k == 0:
        raise ValueError("solve_jost requires k != 0")
    if k.imag < -1e-14:
        raise ValueError("solve_jost requires Im(k) >= 0")
    vals, derivs = jost_sweep(potential, [k], grid)
    sample = WaveSample(
        grid=grid,
        values=vals[0],
        derivatives=derivs[0],
        wavenumber=k,
        solves="base",
    )
    return JostData(solution=sample, jost_function_value=complex(vals[0, 0]), k=k)


def base_eigenfunction(potential: Potential, k: float, grid: Grid) -> WaveSample:
    """Delta-normalized real continuum eigenfunction psi_k, k > 0.

    Uses f(-k, x) = conj(f(k, x)) (real potential, real k), so a single Jost
    solve yields psi_k = sqrt(2/pi) Im(conj(F) f) / |F|.  The combination is
    exactly real, vanishes at the origin, and the global phase is fixed by
    psi_k'(0) = sqrt(2/pi) k / |F(k)| > 0.

    Raises
    ------
    JostZeroOnRealAxis
        If |F(k)| < ZERO_TOL (out of contract for a self-adjoint base).
    """
    if not k > 0:
        raise ValueError("base_eigenfunction requires real k > 0")
    data = solve_jost(potential, complex(k), grid)
    F = data.jost_function_value
    if abs(F) < ZERO_TOL:
        raise JostZeroOnRealAxis(f"|F({k})| = {abs(F):.3e} < {ZERO_TOL}")
    f = data.solution
    psi, dpsi = _eigenfunction_rows(
        np.array([F]), f.values[None, :], f.derivatives[None, :]
    )
    return WaveSample(
        grid=grid,
        values=psi[0].astype(complex),
        derivatives=dpsi[0].astype(complex),
        wavenumber=complex(k),
        solves="base",
    )


def _eigenfunction_rows(F: np.ndarray, fvals: np.ndarray, fderivs: np.ndarray):
    """Vectorized psi_k rows from Jost rows (real, delta-normalized)."""
    absF = np.abs(F)
    if np.any(absF < ZERO_TOL):
        bad = np.argmin(absF)
        raise JostZeroOnRealAxis(f"|F| = {absF[bad]:.3e} < {ZERO_TOL}")
    c = np.sqrt(2.0 / np.pi) / absF
    psi = c[:, None] * np.imag(np.conj(F)[:, None] * fvals)
    dpsi = c[:, None] * np.imag(np.conj(F)[:, None] * fderivs)
    return psi, dpsi


def ode_residual(sample: WaveSample, potential: Potential) -> float:
    """Max grid residual of the sample against its Schrodinger equation.

    Checks the first-order system with centered finite differences of the
    stored pair (f, f'):

        max |d/dx f - f'|  and  max |d/dx f' - (v - k^2) f|

    over interior points away from potential breakpoints, scaled by
    (1 + max|f|).  `v` is v0 for base samples and must be supplied via a
    transformed-potential array for H samples (see darboux.eigen_residual).
    """
    if sample.wavenumber is None:
        raise ValueError("ode_residual needs the sample's wavenumber")
    h = sample.grid.spacing
    v = potential.evaluate(sample.grid.x)
    mask = interior_mask(sample.grid.n_points, h, breakpoints=potential.breakpoints)
    r1 = fd_derivative(sample.values, h) - sample.derivatives
    r2 = fd_derivative(sample.derivatives, h) - (v - sample.wavenumber**2) * sample.values
    worst = max(np.abs(r1[mask]).max(), np.abs(r2[mask]).max())
    return float(worst / (1.0 + np.abs(sample.values).max()))


def smeared_orthonormality(
    potential: Potential,
    k: float,
    test_fn: TestFunction,
    k_grid: tuple[float, float] | None = None,
    *,
    grid: Grid = SMEARING_GRID,
    eta_schedule=DEFAULT_ETA_SCHEDULE,
    tol: float = QUAD_TOL,
) -> SmearedFunctional:
    """Smeared orthonormality of the base continuum: returns ~ Phi(k).

    Evaluates int dk' [int dx psi_k(x) psi_k'(x)] Phi(k') with the test
    function integrated first (the inner k' integral makes the x integrand
    decay), then the oscillatory x integral with the damping schedule.
    """
    lo, hi, nodes, weights = _smearing_nodes(k, test_fn, k_grid, x_max=grid.x_max)
    psi_k = base_eigenfunction(potential, k, grid)

    g = np.zeros(grid.n_points)
    for idx, kc, vals, derivs in iter_jost_chunks(potential, nodes, grid):
        rows, _ = _eigenfunction_rows(vals[:, 0], vals, derivs)
        g += (weights[idx] * test_fn(nodes[idx])) @ rows

    return damped_integral(
        grid.x, psi_k.values.real * g, eta_schedule=eta_schedule, tol=tol
    )


def _smearing_nodes(k, test_fn, k_grid, x_max: float, k_floor: float = 1e-3):
    """Gauss-Legendre nodes covering the test function's support in k'."""
    if k_grid is None:
        r = test_fn.tail_radius(1e-16)
        lo, hi = test_fn.center - r, test_fn.center + r
    else:
        lo, hi = k_grid
    lo = max(lo, k_floor)
    if not lo < k < hi:
        raise ValueError(f"k = {k} must be interior to the k' window ({lo}, {hi})")
    nodes, weights = oscillation_panels(lo, hi, x_max)
    return lo, hi, nodes, weights
