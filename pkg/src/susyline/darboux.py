"""First-order SUSY (Darboux) transformation machinery.

The transformation operator is L = -d/dx + w with superpotential
w = u'/u, where the transformation function u is the Jost solution of the
base problem at k = -ia, a = d + ib (b != 0, d <= 0), so that u -> exp(ax)
at infinity and the factorization constant is alpha = -a^2.  The partner
potential is V = v0 - 2 w' and the factorization identities are

    (L*)^adj L = h0 - alpha,      L (L*)^adj = H - alpha,

with (L*)^adj = d/dx + w the formal (Laplace) adjoint of L*.

Derivatives of transformed samples are obtained from exact ODE identities
rather than finite differences:

    w'      = v0 - alpha - w^2                      (from h0 u = alpha u)
    (L psi)' = (k^2 - alpha) psi - w (L psi)        (for h0 psi = k^2 psi)

which keeps every residual check at the integrator's accuracy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    GridMismatch,
    NodalTransformationFunction,
    SpectralSingularityPoint,
)
from .grids import Grid
from .jost import ODE_TOL, base_eigenfunction, solve_jost
from .potentials import Potential, make_potential
from .quadrature import fd_derivative, fd_second_derivative, interior_mask
from .testfunctions import TestFunction
from .waves import WaveSample

#: u is declared nodal when min|u| <= NODE_TOL * max|u|; below this the
#: superpotential is numerically meaningless.
NODE_TOL = 1e-10

#: Proximity of k^2 to alpha at which N_k is treated as singular.
SING_TOL = 1e-6

#: Contract tolerance for finite-difference identity checks.
FD_TOL = 1e-6


@dataclass(frozen=True)
class FactorizationConstant:
    """a = d + ib with b != 0, d <= 0; alpha = -a^2.

    The transformation is regular for d < 0 and develops a spectral
    singularity at k = |b| for d = 0 (alpha = b^2 > 0).
    """

    a: complex

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("Im(a) must be nonzero")
        if self.d > 0:
            raise ValueError("Re(a) must be <= 0 (d > 0 is rejected)")

    @property
    def d(self) -> float:
        return self.a.real

    @property
    def b(self) -> float:
        return self.a.imag

    @property
    def alpha(self) -> complex:
        return -self.a * self.a

    @property
    def regime(self) -> str:
        return "singular" if self.d == 0 else "regular"

    @property
    def is_singular(self) -> bool:
        return self.d == 0


@dataclass(frozen=True, eq=False)
class SusySystem:
    """Immutable bundle of a built transformation.

    Holds the base potential, the factorization constant, the transformation
    function u (Jost solution at k = -ia), the superpotential w = u'/u, its
    exact derivative, and the transformed potential V = v0 - 2 w'.
    """

    potential: Potential
    factorization: FactorizationConstant
    grid: Grid
    u: WaveSample
    w: np.ndarray
    w_prime: np.ndarray
    v0: np.ndarray
    V: np.ndarray

    @property
    def a(self) -> complex:
        return self.factorization.a

    @property
    def alpha(self) -> complex:
        return self.factorization.alpha

    @property
    def regime(self) -> str:
        return self.factorization.regime

    @cached_property
    def singular_k(self) -> float:
        """The singular wavenumber |b| (meaningful in the singular regime)."""
        return abs(self.factorization.b)

    def to_json(self) -> str:
        doc = {
            "grid": {"x_max": self.grid.x_max, "n_points": self.grid.n_points},
            "a": [self.a.real, self.a.imag],
            "potential": {"kind": self.potential.kind, **self.potential.params},
            "u_re": self.u.values.real.tolist(),
            "u_im": self.u.values.imag.tolist(),
            "w_re": self.w.real.tolist(),
            "w_im": self.w.imag.tolist(),
            "V_re": self.V.real.tolist(),
            "V_im": self.V.imag.tolist(),
        }
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str) -> "SusySystem":
        doc = json.loads(text)
        grid = Grid(doc["grid"]["x_max"], doc["grid"]["n_points"])
        pot = make_potential(**doc["potential"])
        a = complex(doc["a"][0], doc["a"][1])
        return build_system(pot, a, grid)


def build_system(potential: Potential, a: complex, grid: Grid) -> SusySystem:
    """Build the SUSY system for factorization constant a = d + ib.

    Raises
    ------
    NodalTransformationFunction
        If min|u| <= NODE_TOL * max|u| on the grid (invalid transformation).
    """
    fac = FactorizationConstant(complex(a))
    data = solve_jost(potential, -1j * fac.a, grid)
    u = data.solution
    _check_nodeless(u, fac.a)
    w = u.derivatives / u.values
    v0 = potential.evaluate(grid.x).astype(float)
    w_prime = v0 - fac.alpha - w * w
    V = v0 - 2.0 * w_prime
    return SusySystem(
        potential=potential,
        factorization=fac,
        grid=grid,
        u=u,
        w=w,
        w_prime=w_prime,
        v0=v0,
        V=V,
    )


def _check_nodeless(u: WaveSample, a: complex) -> None:
    # compare |u| against its exp(d x) decay envelope: a genuine node dips
    # to zero relative to the envelope, while plain deep decay on a long
    # grid (|d| x_max >> 1) does not
    mags = np.abs(u.values) * np.exp(-a.real * u.grid.x)
    i = int(np.argmin(mags))
    if mags[i] <= NODE_TOL * mags.max():
        raise NodalTransformationFunction(
            f"|u| = {np.abs(u.values[i]):.3e} at x = {u.grid.x[i]:.4f} "
            f"(envelope-relative {mags[i] / mags.max():.3e})"
        )


def _require_grid(system: SusySystem, sample: WaveSample) -> None:
    if sample.grid != system.grid:
        raise GridMismatch(
            f"sample grid {sample.grid} does not match system grid {system.grid}"
        )


def apply_L(system: SusySystem, psi: WaveSample) -> WaveSample:
    """Apply L = -d/dx + w pointwise.

    If psi solves the base equation at its wavenumber, the derivative of the
    result uses the exact identity (L psi)' = (k^2 - alpha) psi - w (L psi);
    otherwise it falls back to a finite difference of the result.
    """
    _require_grid(system, psi)
    vals = -psi.derivatives + system.w * psi.values
    if psi.wavenumber is not None and psi.solves == "base":
        k2 = psi.wavenumber**2
        derivs = (k2 - system.alpha) * psi.values - system.w * vals
        tag = "transformed"
    else:
        derivs = fd_derivative(vals, system.grid.spacing)
        tag = None
    return WaveSample(
        grid=system.grid,
        values=vals,
        derivatives=derivs,
        wavenumber=psi.wavenumber,
        solves=tag,
    )


def apply_L_star_adjoint(system: SusySystem, phi: WaveSample) -> WaveSample:
    """Apply the formal adjoint (L*)^adj = d/dx + w pointwise.

    For phi solving the transformed equation at wavenumber k the derivative
    of the result is exact: ((L*)^adj phi)' = (alpha + w^2 - k^2) phi + w phi'.
    """
    _require_grid(system, phi)
    vals = phi.derivatives + system.w * phi.values
    if phi.wavenumber is not None and phi.solves == "transformed":
        k2 = phi.wavenumber**2
        derivs = (system.alpha + system.w * system.w - k2) * phi.values + system.w * phi.derivatives
        tag = "base"
    else:
        derivs = fd_derivative(vals, system.grid.spacing)
        tag = None
    return WaveSample(
        grid=system.grid,
        values=vals,
        derivatives=derivs,
        wavenumber=phi.wavenumber,
        solves=tag,
    )


@dataclass(frozen=True)
class NormalizedEigenfunction:
    """phi_k = N_k^{-1} L psi_k with N_k = (k^2 - alpha)^{1/2} (principal)."""

    k: float
    norm_constant: complex
    phi: WaveSample


def normalized_phi(system: SusySystem, k: float) -> NormalizedEigenfunction:
    """Transformed continuum eigenfunction phi_k, k > 0.

    Raises
    ------
    SpectralSingularityPoint
        In the singular regime when |k^2 - alpha| < SING_TOL; the normalized
        eigenfunction does not exist there and callers must switch to the
        regularized kernel.
    """
    if not k > 0:
        raise ValueError("normalized_phi requires real k > 0")
    nk2 = complex(k * k) - system.alpha
    if abs(nk2) < SING_TOL:
        raise SpectralSingularityPoint(
            f"k^2 - alpha = {nk2:.3e} at k = {k}; use the regularized kernel"
        )
    psi = base_eigenfunction(system.potential, k, system.grid)
    lpsi = apply_L(system, psi)
    n_k = np.sqrt(nk2)  # principal branch
    phi = WaveSample(
        grid=system.grid,
        values=lpsi.values / n_k,
        derivatives=lpsi.derivatives / n_k,
        wavenumber=complex(k),
        solves="transformed",
    )
    return NormalizedEigenfunction(k=float(k), norm_constant=complex(n_k), phi=phi)


def singular_mode(system: SusySystem) -> WaveSample:
    """The solution 1/u of the transformed equation at E = alpha.

    In the singular regime this is the Jost solution of H at k = -b (it
    behaves as exp(-ibx) at infinity); in the regular regime it grows and is
    not an admissible eigenfunction.  Solves H at k = ia (k^2 = alpha).
    """
    vals = 1.0 / system.u.values
    derivs = -system.w * vals
    return WaveSample(
        grid=system.grid,
        values=vals,
        derivatives=derivs,
        wavenumber=1j * system.a,
        solves="transformed",
    )


def intertwining_residual(system: SusySystem, psi_test: TestFunction) -> float:
    """Relative grid residual of the intertwining identity L h0 = H L.

    Both sides are evaluated with finite differences on the smooth probe
    psi_test (which must vanish at the origin) and compared in the discrete
    L2 norm over interior points away from potential breakpoints.
    """
    x = system.grid.x
    h = system.grid.spacing
    psi = psi_test(x)
    dpsi = psi_test.derivative(x)
    d2psi = psi_test.second_derivative(x)

    h0psi = -d2psi + system.v0 * psi
    lhs = -fd_derivative(h0psi.astype(complex), h) + system.w * h0psi

    lpsi = -dpsi + system.w * psi
    rhs = -fd_second_derivative(lpsi, h) + system.V * lpsi

    return _masked_rel_l2(lhs - rhs, psi, system)


def factorization_residual(system: SusySystem, psi_test: TestFunction) -> float:
    """Relative grid residual of (L*)^adj L psi = (h0 - alpha) psi."""
    x = system.grid.x
    h = system.grid.spacing
    psi = psi_test(x)
    dpsi = psi_test.derivative(x)
    d2psi = psi_test.second_derivative(x)

    lpsi = -dpsi + system.w * psi
    lhs = fd_derivative(lpsi.astype(complex), h) + system.w * lpsi
    rhs = -d2psi + (system.v0 - system.alpha) * psi

    return _masked_rel_l2(lhs - rhs, psi, system)


def _masked_rel_l2(diff: np.ndarray, psi: np.ndarray, system: SusySystem) -> float:
    mask = interior_mask(
        system.grid.n_points,
        system.grid.spacing,
        breakpoints=system.potential.breakpoints,
    )
    num = np.sqrt(np.sum(np.abs(diff[mask]) ** 2))
    den = np.sqrt(np.sum(np.abs(psi[mask]) ** 2))
    return float(num / den)


def boundary_condition_residual(nphi: NormalizedEigenfunction, system: SusySystem) -> float:
    """|phi'(0) + w(0) phi(0)| scaled by max|phi| (transformed BC)."""
    phi = nphi.phi
    val = phi.derivatives[0] + system.w[0] * phi.values[0]
    return float(abs(val) / np.abs(phi.values).max())


def eigen_residual(system: SusySystem, phi: WaveSample) -> float:
    """Max FD residual of phi against H phi = k^2 phi over smooth interior points.

    Checks the first-order system (phi, phi') with centered differences, the
    same scheme as jost.ode_residual but with the transformed potential V.
    """
    if phi.wavenumber is None:
        raise ValueError("eigen_residual needs the sample's wavenumber")
    h = system.grid.spacing
    r1 = fd_derivative(phi.values, h) - phi.derivatives
    r2 = fd_derivative(phi.derivatives, h) - (system.V - phi.wavenumber**2) * phi.values
    mask = interior_mask(
        system.grid.n_points, h, breakpoints=system.potential.breakpoints
    )
    worst = max(np.abs(r1[mask]).max(), np.abs(r2[mask]).max())
    return float(worst / (1.0 + np.abs(phi.values).max()))
