"""Detection of spectral singularities of the transformed Hamiltonian.

A spectral singularity sits at a real wavenumber where the Jost solution of
H itself satisfies the boundary condition phi'(0) + w(0) phi(0) = 0, i.e.
where the Jost function of H vanishes.  The Jost solution of H is obtained
by applying L to the base Jost solution and rescaling to unit asymptotic
amplitude (L f(k, .) -> (a - ik) e^{ikx} up to potential corrections), so
the whole scan reuses the validated base solver and never integrates the
complex potential V directly.

For the transformation built at a = d + ib the boundary functional of the
free problem is exactly ik + a: its modulus sqrt(d^2 + (k + b)^2) has a
minimum |d| at k = -b, which reaches zero exactly in the singular limit
d -> 0^-.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .darboux import SusySystem, build_system
from .errors import DegenerateJost
from .grids import Grid
from .jost import ZERO_TOL, iter_jost_chunks, solve_jost
from .potentials import Potential
from .waves import WaveSample

#: Fitted minima below ZERO_TOL are singularities; below NEAR_TOL they are
#: flagged as near-singularities.
NEAR_TOL = 1e-4

#: Samples closer to k = 0 than this are dropped from scans.
K_SCAN_FLOOR = 1e-3


def transformed_jost(system: SusySystem, k: float) -> WaveSample:
    """Jost solution of H at real k != 0, normalized to exp(ikx) at x_max.

    Raises
    ------
    DegenerateJost
        If L f(k, .) has vanishing asymptotic amplitude, which happens
        exactly at the singular wavenumber k = b of a singular system
        (there L f(b, .) = 0 identically).
    """
    k = float(k)
    if k == 0:
        raise ValueError("transformed_jost requires k != 0")
    f = _base_jost_either_sign(system, k)
    lf_vals = -f.derivatives + system.w * f.values
    lf_derivs = (complex(k * k) - system.alpha) * f.values - system.w * lf_vals
    amp = lf_vals[-1] * np.exp(-1j * k * system.grid.x_max)
    if abs(amp) < ZERO_TOL:
        raise DegenerateJost(
            f"L f(k, .) has asymptotic amplitude {abs(amp):.3e} at k = {k}"
        )
    return WaveSample(
        grid=system.grid,
        values=lf_vals / amp,
        derivatives=lf_derivs / amp,
        wavenumber=complex(k),
        solves="transformed",
    )


def boundary_functional(system: SusySystem, k: float) -> complex:
    """phi'(0) + w(0) phi(0) for the unit-amplitude Jost solution of H.

    Vanishes exactly at a spectral singularity.  For v0 = 0 this equals
    ik + a.  At the degenerate wavenumber k = b of a singular system the
    value is obtained from a nearby k (the functional extends continuously).
    """
    try:
        phi = transformed_jost(system, k)
    except DegenerateJost:
        phi = transformed_jost(system, k + 1e-6 * max(1.0, abs(k)))
    return complex(phi.derivatives[0] + system.w[0] * phi.values[0])


def _base_jost_either_sign(system: SusySystem, k: float) -> WaveSample:
    """f(k, .) for real k of either sign, via f(-k) = conj f(k)."""
    if k > 0:
        return solve_jost(system.potential, k, system.grid).solution
    data = solve_jost(system.potential, -k, system.grid)
    return WaveSample(
        grid=system.grid,
        values=np.conj(data.solution.values),
        derivatives=np.conj(data.solution.derivatives),
        wavenumber=complex(k),
        solves="base",
    )


@dataclass(frozen=True)
class ScanMinimum:
    """A quadratically fitted local minimum of |boundary functional|."""

    k_star: float
    value: float
    curvature: float
    verdict: str  # "singularity" | "near_singularity" | "clear"


@dataclass(frozen=True, eq=False)
class SingularityScan:
    """Boundary-functional scan over a real k window."""

    k_samples: np.ndarray
    values: np.ndarray  # complex boundary functional per sample
    minima: tuple[ScanMinimum, ...]

    @property
    def min_modulus(self) -> float:
        fitted = [m.value for m in self.minima]
        return float(min([np.abs(self.values).min(), *fitted]))

    @property
    def singularities(self) -> tuple[ScanMinimum, ...]:
        return tuple(m for m in self.minima if m.verdict == "singularity")

    def k_at_min(self) -> float:
        if self.minima:
            best = min(self.minima, key=lambda m: m.value)
            return best.k_star
        return float(self.k_samples[int(np.argmin(np.abs(self.values)))])


def scan_singularities(
    system: SusySystem, k_window: tuple[float, float], n_samples: int
) -> SingularityScan:
    """Scan |phi'(0) + w(0) phi(0)| for the Jost solution of H over a window.

    Both signs of k are scanned (the Jost function of H vanishes at k = -b
    for b > 0); samples within K_SCAN_FLOOR of k = 0 are dropped.  Local
    minima are localized by a quadratic fit of the squared modulus over
    5-point stencils and classified against ZERO_TOL / NEAR_TOL.
    """
    lo, hi = k_window
    if not hi > lo:
        raise ValueError("empty k window")
    samples = np.linspace(lo, hi, n_samples)
    samples = samples[np.abs(samples) >= K_SCAN_FLOOR]

    values = _boundary_functional_sweep(system, samples)
    mod2 = np.abs(values) ** 2

    minima = []
    for i in range(2, len(samples) - 2):
        if not (mod2[i] < mod2[i - 1] and mod2[i] <= mod2[i + 1]):
            continue
        if samples[i - 2] < 0 < samples[i + 2]:
            continue  # stencil must not straddle the dropped k = 0 gap
        k_fit, v_fit, curv = _quadratic_minimum(samples[i - 2 : i + 3], mod2[i - 2 : i + 3])
        value = float(np.sqrt(max(v_fit, 0.0)))
        if value < ZERO_TOL:
            verdict = "singularity"
        elif value < NEAR_TOL:
            verdict = "near_singularity"
        else:
            verdict = "clear"
        minima.append(ScanMinimum(k_star=k_fit, value=value, curvature=curv, verdict=verdict))

    return SingularityScan(k_samples=samples, values=values, minima=tuple(minima))


def _boundary_functional_sweep(system: SusySystem, samples: np.ndarray) -> np.ndarray:
    """Vectorized boundary functional over real samples (one solve per |k|)."""
    abs_k = np.unique(np.abs(samples))
    fvals = {}
    fders = {}
    for idx, kc, vals, derivs in iter_jost_chunks(system.potential, abs_k, system.grid):
        for row, kk in enumerate(kc):
            key = float(kk.real)
            fvals[key] = vals[row]
            fders[key] = derivs[row]

    w0 = system.w[0]
    wm_phase = np.exp(-1j * samples * system.grid.x_max)
    out = np.empty(len(samples), dtype=complex)
    for j, k in enumerate(samples):
        f = fvals[abs(k)]
        fp = fders[abs(k)]
        if k < 0:
            f, fp = np.conj(f), np.conj(fp)
        lf0 = -fp[0] + w0 * f[0]
        lf_end = -fp[-1] + system.w[-1] * f[-1]
        amp = lf_end * wm_phase[j]
        lfp0 = (k * k - system.alpha) * f[0] - w0 * lf0
        if abs(amp) < ZERO_TOL:
            out[j] = _degenerate_value(system, k)
        else:
            out[j] = (lfp0 + w0 * lf0) / amp
    return out


def _degenerate_value(system, k):
    return boundary_functional(system, k + 1e-6 * max(1.0, abs(k)))


def _quadratic_minimum(ks, m2):
    """Vertex of the parabola fitted through 5 samples of |J|^2.

    The fit runs in stencil-centered coordinates; fitting on raw k values
    loses ~8 digits of the vertex value to Vandermonde conditioning.
    """
    center = ks[len(ks) // 2]
    coeffs = np.polyfit(ks - center, m2, 2)
    a2, a1, a0 = coeffs
    if a2 <= 0:
        i = int(np.argmin(m2))
        return float(ks[i]), float(m2[i]), float(a2)
    k_star = center - a1 / (2 * a2)
    v = a0 - a1 * a1 / (4 * a2)
    return float(k_star), float(v), float(2 * a2)


@dataclass(frozen=True)
class PathPoint:
    d: float
    min_modulus: float
    k_at_min: float
    prefactor_at_b: float  # |k^2 - alpha| evaluated at k = |b|


@dataclass(frozen=True)
class PathReport:
    """Emergence of the singularity along d -> 0^- at fixed b."""

    b: float
    points: tuple[PathPoint, ...]

    @property
    def min_moduli(self) -> tuple[float, ...]:
        return tuple(p.min_modulus for p in self.points)

    @property
    def prefactors(self) -> tuple[float, ...]:
        return tuple(p.prefactor_at_b for p in self.points)

    def monotone_decreasing(self) -> bool:
        m = self.min_moduli
        p = self.prefactors
        return all(m[i + 1] < m[i] or m[i] == 0 for i in range(len(m) - 1)) and all(
            p[i + 1] < p[i] or p[i] == 0 for i in range(len(p) - 1)
        )


def path_to_singularity(
    potential: Potential,
    b: float,
    d_sequence,
    grid: Grid,
    *,
    k_window: tuple[float, float] | None = None,
    n_samples: int = 1601,
) -> PathReport:
    """Track the singularity's emergence along a d -> 0^- path at fixed b.

    For each d the report records the scan minimum of the boundary
    functional modulus and the binorm prefactor |k^2 - alpha| at k = |b|;
    both decrease to zero as d -> 0^-.  For v0 = 0 they equal |d| and
    |d| sqrt(d^2 + 4 b^2) exactly.
    """
    if b == 0:
        raise ValueError("b must be nonzero")
    d_sequence = [float(d) for d in d_sequence]
    if any(d > 0 for d in d_sequence):
        raise ValueError("all d must be <= 0")
    if k_window is None:
        k_window = (-abs(b) - 3.0, abs(b) + 3.0)

    points = []
    for d in d_sequence:
        a = complex(d, b)
        system = build_system(potential, a, grid)
        scan = scan_singularities(system, k_window, n_samples)
        prefactor = abs(complex(b * b) - system.alpha)
        points.append(
            PathPoint(
                d=d,
                min_modulus=scan.min_modulus,
                k_at_min=scan.k_at_min(),
                prefactor_at_b=prefactor,
            )
        )
    return PathReport(b=float(b), points=tuple(points))
