"""Quadrature and finite-difference machinery.

Two workhorse pieces live here:

* Gaussian-damped evaluation of oscillatory integrals over [0, inf):
  S(eta) = int exp(-eta x^2) f(x) dx is computed for a decreasing eta
  schedule and polynomially extrapolated to eta -> 0 (Abel-type summation
  realizes the distributional limit).  The extrapolation table, the
  converged flag and the error estimate are returned as a
  :class:`SmearedFunctional`.

* High-order finite-difference stencils used by residual checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import QuadratureNotConverged

#: Successive damping extrapolants must agree within this.
QUAD_TOL = 1e-6

#: Default damping schedule; halving steps make the Richardson table regular.
#: The deepest eta must keep exp(-eta x_max^2) negligible on the smearing
#: grid (x_max = 100), which stops the schedule at 1.25e-3.
DEFAULT_ETA_SCHEDULE = (2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3)


@dataclass(frozen=True)
class SmearedFunctional:
    """Result of pairing a distribution-valued kernel against a test function.

    Attributes
    ----------
    value : complex
        Extrapolated (or directly converged) value of the pairing.
    eta_table : tuple of (float, complex)
        (parameter, partial value) pairs.  For damped integrals the
        parameter is the damping width eta; for pole-refined k integrals it
        is the refinement scale of the estimate.
    converged : bool
        True when estimated_error is below the requested tolerance.
    estimated_error : float
    """

    value: complex
    eta_table: tuple[tuple[float, complex], ...]
    converged: bool
    estimated_error: float


# ----------------------------------------------------------------------------
# damped oscillatory integrals
# ----------------------------------------------------------------------------

def damped_integral(
    x: np.ndarray,
    f: np.ndarray,
    eta_schedule=DEFAULT_ETA_SCHEDULE,
    tol: float = QUAD_TOL,
    raise_on_failure: bool = True,
) -> SmearedFunctional:
    """Evaluate int_0^inf f(x) dx as the eta -> 0 limit of damped integrals.

    f is sampled on the uniform grid x (which must reach far enough that
    exp(-eta x^2) is negligible at its end for the smallest eta).  The
    partial values S(eta) are extrapolated to eta = 0 with a Neville table;
    convergence requires the last two diagonal entries to agree within
    tol * (1 + |value|).
    """
    etas = np.asarray(tuple(eta_schedule), dtype=float)
    if len(etas) < 2:
        raise ValueError("eta schedule needs at least two entries")
    x2 = x * x
    partials = np.array(
        [simpson(np.exp(-eta * x2) * f, dx=x[1] - x[0]) for eta in etas]
    )

    value, est = _neville_to_zero(etas, partials)
    converged = est < tol * (1.0 + abs(value))
    if not converged and raise_on_failure:
        raise QuadratureNotConverged(
            f"damping extrapolants disagree by {est:.3e} (tol {tol:.1e})"
        )
    table = tuple((float(e), complex(p)) for e, p in zip(etas, partials))
    return SmearedFunctional(complex(value), table, converged, float(est))


def _neville_to_zero(params: np.ndarray, values: np.ndarray):
    """Polynomial extrapolation of values(params) to params -> 0."""
    n = len(params)
    t = [complex(v) for v in values]
    diag = [t[0]]
    for j in range(1, n):
        for i in range(n - j):
            t[i] = t[i + 1] + (t[i + 1] - t[i]) * params[i + j] / (
                params[i] - params[i + j]
            )
        diag.append(t[0])  # order-j extrapolant
    est = abs(diag[-1] - diag[-2]) if n > 1 else np.inf
    return diag[-1], est


# ----------------------------------------------------------------------------
# composite panels
# ----------------------------------------------------------------------------

def gauss_panels(lo: float, hi: float, panel: float = 0.25, order: int = 8):
    """Composite Gauss-Legendre nodes/weights on [lo, hi]."""
    if hi <= lo:
        raise ValueError("empty interval")
    n_panels = max(1, int(np.ceil((hi - lo) / panel)))
    edges = np.linspace(lo, hi, n_panels + 1)
    xg, wg = np.polynomial.legendre.leggauss(order)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(0.5 * (a + b) + half * xg)
        weights.append(half * wg)
    return np.concatenate(nodes), np.concatenate(weights)


def oscillation_panels(lo: float, hi: float, max_frequency: float, order: int = 16):
    """GL panels resolving exp(i q k) integrands for |q| up to max_frequency.

    16-node panels integrate up to ~24 radians of phase per panel to
    machine precision; the panel width shrinks accordingly.
    """
    panel = min(0.25, 24.0 / max(max_frequency, 1.0))
    return gauss_panels(lo, hi, panel=panel, order=order)


def simpson_with_estimate(f: np.ndarray, dx: float):
    """Composite Simpson value plus a Richardson error estimate.

    The estimate compares the full rule against the one on every second
    sample; len(f) should be 4m + 1 so both counts are odd.
    """
    full = simpson(f, dx=dx)
    coarse = simpson(f[::2], dx=2 * dx)
    return full, abs(full - coarse) / 15.0


def uniform_segment(lo: float, hi: float, max_step: float) -> np.ndarray:
    """Uniform nodes on [lo, hi] with step <= max_step and 4m+1 points."""
    n_int = int(np.ceil((hi - lo) / max_step))
    n_int = max(4, ((n_int + 3) // 4) * 4)
    return np.linspace(lo, hi, n_int + 1)


def simpson_weights(n: int, dx: float) -> np.ndarray:
    """Composite Simpson weights for n (odd) uniform samples."""
    if n < 3 or n % 2 == 0:
        raise ValueError("Simpson weights need an odd sample count >= 3")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dx / 3.0)


# ----------------------------------------------------------------------------
# finite differences (6th order interior stencils)
# ----------------------------------------------------------------------------

_D1_INTERIOR = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2_INTERIOR = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


def _apply_stencil(values: np.ndarray, coeffs: np.ndarray, h_power: float):
    half = len(coeffs) // 2
    out = np.zeros_like(values)
    n = len(values)
    acc = np.zeros(n - 2 * half, dtype=values.dtype)
    for j, c in enumerate(coeffs):
        if c != 0.0:
            acc += c * values[j : n - 2 * half + j]
    out[half : n - half] = acc / h_power
    return out, half


def fd_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative, 6th-order centered; low-order one-sided at the ends."""
    out, half = _apply_stencil(values, _D1_INTERIOR, h)
    for i in range(half):
        out[i] = (values[i + 1] - values[i]) / h
        out[-1 - i] = (values[-1 - i] - values[-2 - i]) / h
    return out


def fd_second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """Second derivative, 6th-order centered; crude 3-point at the ends."""
    out, half = _apply_stencil(values, _D2_INTERIOR, h * h)
    for i in range(half):
        lo = max(i, 1) if i < half else i
        out[i] = (values[lo + 1] - 2 * values[lo] + values[lo - 1]) / h**2
        hi = len(values) - 1 - max(i, 1)
        out[-1 - i] = (values[hi + 1] - 2 * values[hi] + values[hi - 1]) / h**2
    return out


def interior_mask(
    n: int, h: float, breakpoints=(), margin: int = 4, x0: float = 0.0
) -> np.ndarray:
    """Boolean mask of points where centered stencils see smooth data.

    Excludes `margin` points at each end and around each breakpoint (finite
    differences are meaningless across a jump of v0).
    """
    mask = np.zeros(n, dtype=bool)
    mask[margin : n - margin] = True
    for bp in breakpoints:
        i = int(round((bp - x0) / h))
        lo = max(i - margin, 0)
        hi = min(i + margin + 1, n)
        mask[lo:hi] = False
    return mask
