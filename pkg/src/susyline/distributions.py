"""Smeared evaluation of the distribution-valued statements.

Every delta-function claim is checked by pairing with a smooth decaying
test function, always integrating against the test function in the inner
variable first:

* biorthonormality / binorm:  the k' integral over Phi is done first (the
  resulting x integrand decays), then the oscillatory x integral is summed
  with the Gaussian damping schedule and extrapolated to zero damping.

* resolution of the identity:  c_k = int dy (L psi_k)(y) Phi(y) is computed
  first, then I(x) = int_0^{k_max} dk (L psi_k)(x) c_k / (k^2 - alpha - i eps).
  In the singular regime (alpha = b^2) the k grid is refined around the pole
  at k = |b| with graded Simpson panels down to a step of |eps|/50, and the
  sign of eps is locked to the sign of b unless explicitly overridden (the
  wrong sign is the negative control: the surviving kernel term keeps the
  reconstruction away from Phi).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .darboux import SusySystem
from .errors import PoleOnContour, QuadratureNotConverged, WrongRegime
from .jost import _eigenfunction_rows, iter_jost_chunks
from .quadrature import (
    DEFAULT_ETA_SCHEDULE,
    QUAD_TOL,
    SmearedFunctional,
    damped_integral,
    oscillation_panels,
    simpson_weights,
    uniform_segment,
)
from .testfunctions import TestFunction, gaussian

#: Reconstruction battery: gaussians with (center/width)^2 >= 12 so that the
#: k_max = 12 truncation tail stays below quad_tol (the y = 0 boundary terms
#: of c_k scale with Phi(0) and Phi'(0)).
DEFAULT_BATTERY = (
    gaussian(3.5, 1.0),
    gaussian(4.0, 1.0),
    gaussian(4.5, 1.2),
    gaussian(5.0, 1.4),
    gaussian(6.0, 1.5),
)

DEFAULT_X_SAMPLES = (2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0)


@dataclass(frozen=True)
class RegularizationParams:
    """Regularization and k-quadrature controls for the identity kernel.

    The default sign convention replaces epsilon by sign(b) * |epsilon|;
    set override_sign to use epsilon verbatim (negative-control runs).
    """

    epsilon: float
    k_max: float = 12.0
    k_min: float = 1e-3
    k_step: float = 0.01
    eta_schedule: tuple[float, ...] = DEFAULT_ETA_SCHEDULE
    override_sign: bool = False
    pole_halfwidth: float = 25.0  # finest window half-width, in units of |eps|
    pole_step_fraction: float = 50.0  # finest step = |eps| / this

    def effective_epsilon(self, b: float) -> float:
        if self.override_sign or self.epsilon == 0.0:
            return self.epsilon
        return abs(self.epsilon) * (1.0 if b > 0 else -1.0)


# ----------------------------------------------------------------------------
# smeared pairings with an outer damped x integral
# ----------------------------------------------------------------------------

def smeared_biorthonormality(
    system: SusySystem,
    k: float,
    test_fn: TestFunction,
    k_window: tuple[float, float] | None = None,
    *,
    eta_schedule=None,
    tol: float = QUAD_TOL,
) -> SmearedFunctional:
    """Smeared biorthonormality of phi_k (regular regime): returns ~ Phi(k).

    Evaluates int dk' [int dx phi_k(x) phi_k'(x)] Phi(k') with the bilinear
    (unconjugated) pairing.  Raises WrongRegime in the singular regime,
    where the normalized family does not exist at k = |b| and the
    regularized kernel must be used instead.
    """
    if system.factorization.is_singular:
        raise WrongRegime("biorthonormality needs d < 0; use the regularized kernel")
    return _smeared_pairing(system, k, test_fn, k_window, True, eta_schedule, tol)


def binorm_functional(
    system: SusySystem,
    k: float,
    test_fn: TestFunction,
    k_window: tuple[float, float] | None = None,
    *,
    eta_schedule=None,
    tol: float = QUAD_TOL,
) -> SmearedFunctional:
    """Smeared bilinear self-pairing of L psi_k: returns ~ (k^2 - alpha) Phi(k).

    The prefactor vanishes as k^2 -> alpha; in the singular regime this is
    the zero binorm of the eigenfunction at the spectral singularity.  The
    test function must be regular at k' = |b| (all shipped families are);
    the unsmeared pairing is never evaluated at the singular point.
    """
    return _smeared_pairing(system, k, test_fn, k_window, False, eta_schedule, tol)


def _smeared_pairing(system, k, test_fn, k_window, normalized, eta_schedule, tol):
    return _pairing_profile(
        system, [(k, test_fn)], k_window, normalized, eta_schedule, tol
    )[0]


def smeared_pairing_profile(
    system: SusySystem,
    pairs,
    *,
    normalized: bool = False,
    k_window: tuple[float, float] | None = None,
    eta_schedule=None,
    tol: float = QUAD_TOL,
) -> list[SmearedFunctional]:
    """Evaluate several (k, Phi) smeared pairings in a single k' sweep.

    With normalized=False each result approximates (k^2 - alpha) Phi(k)
    (the binorm law); with normalized=True it approximates Phi(k)
    (biorthonormality, regular regime only).
    """
    if normalized and system.factorization.is_singular:
        raise WrongRegime("biorthonormality needs d < 0")
    return _pairing_profile(system, list(pairs), k_window, normalized, eta_schedule, tol)


def _pairing_profile(system, pairs, k_window, normalized, eta_schedule, tol):
    windows = [_window(k, fn, k_window) for k, fn in pairs]
    lo = min(w[0] for w in windows)
    hi = max(w[1] for w in windows)
    # the k' integrand oscillates like exp(i k' x) for x up to x_max
    nodes, weights = oscillation_panels(lo, hi, system.grid.x_max)

    grid = system.grid
    coeffs = np.stack([weights * fn(nodes) for _, fn in pairs])
    g = np.zeros((len(pairs), grid.n_points), dtype=complex)
    for idx, kc, vals, derivs in iter_jost_chunks(system.potential, nodes, grid):
        rows = _lpsi_rows(system, kc, vals, derivs)
        if normalized:
            rows = rows / np.sqrt(kc**2 - system.alpha)[:, None]
        g += coeffs[:, idx] @ rows

    out = []
    for (k, fn), (wlo, _), gi in zip(pairs, windows, g):
        own = _lpsi_single(system, k)
        if normalized:
            own = own / np.sqrt(complex(k * k) - system.alpha)
        schedule = eta_schedule
        if schedule is None:
            schedule = auto_eta_schedule(
                k, fn, wlo, grid.x_max, abs(system.a), tol
            )
        out.append(
            damped_integral(grid.x, own * gi, eta_schedule=schedule, tol=tol)
        )
    return out


def auto_eta_schedule(
    k: float,
    test_fn: TestFunction,
    window_lo: float,
    x_max: float,
    a_mag: float,
    tol: float = QUAD_TOL,
) -> tuple[float, ...]:
    """Damping schedule adapted to the pairing's slow components.

    When the test function reaches the k' = 0 boundary with appreciable
    mass, the inner integral picks up a ~ Phi(lo) cos(lo x)/x tail.  Its
    damped x integral converges like erfc(k / (2 sqrt(eta))), which is not
    polynomial in eta, so the largest eta must keep that term below tol;
    the smallest eta must keep exp(-eta x_max^2) truncation below tol; and
    every eta must stay inside the convergence radius ~ width^2/4 of the
    eta expansion set by the test function's bandwidth.  The default
    schedule is returned whenever it satisfies all three constraints.
    """
    from scipy.special import erfcinv

    amp = (1.0 + a_mag) ** 2
    floor_mass = amp * float(test_fn(np.asarray(window_lo)))
    radius = test_fn.width**2 / 8.0 if test_fn.family != "zero" else np.inf

    if floor_mass > tol / 3.0:
        s = float(erfcinv(tol / (3.0 * floor_mass)))
        eta_max = min((k / (2.0 * s)) ** 2, radius, 2e-2)
        eta_min = np.log(3.0 * floor_mass / (tol * max(k, 0.3) * x_max)) / x_max**2
        eta_min = max(eta_min, eta_max / 32.0)
    else:
        eta_max = min(radius, 2e-2)
        eta_min = max(12.0 / x_max**2, eta_max / 32.0)

    default = DEFAULT_ETA_SCHEDULE
    if default[0] <= eta_max and default[-1] >= eta_min and test_fn.width >= 0.8:
        return default
    if eta_min >= 0.9 * eta_max:
        raise QuadratureNotConverged(
            f"no admissible damping window for k = {k} with {test_fn.label()} "
            f"on x_max = {x_max}: need eta in [{eta_min:.2e}, {eta_max:.2e}]"
        )
    return tuple(np.geomspace(eta_max, eta_min, 7))


def _window(k, test_fn, k_window, k_floor=1e-3):
    if k_window is None:
        r = test_fn.tail_radius(1e-16)
        lo, hi = test_fn.center - r, test_fn.center + r
    else:
        lo, hi = k_window
    lo = max(lo, k_floor)
    if not lo < k < hi:
        raise ValueError(f"k = {k} must be interior to the k' window ({lo}, {hi})")
    return lo, hi


def _lpsi_rows(system, ks, vals, derivs):
    """Rows of (L psi_k)(x) from Jost rows at real k > 0."""
    psi, dpsi = _eigenfunction_rows(vals[:, 0], vals, derivs)
    return -dpsi + system.w[None, :] * psi


def _lpsi_single(system, k, return_derivative=False):
    from .jost import base_eigenfunction  # local import to avoid cycle noise

    psi = base_eigenfunction(system.potential, k, system.grid)
    lpsi = -psi.derivatives + system.w * psi.values
    if return_derivative:
        dlpsi = (complex(k * k) - system.alpha) * psi.values - system.w * lpsi
        return lpsi, dlpsi
    return lpsi


# ----------------------------------------------------------------------------
# resolution of the identity
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ReconstructionProfile:
    """Batched identity-kernel reconstructions I_m(x_i) for a test battery."""

    xs: tuple[float, ...]
    members: tuple[str, ...]
    values: np.ndarray  # complex, shape (n_members, n_xs)
    targets: np.ndarray  # Phi_m(x_i), same shape
    abs_errors: np.ndarray
    estimated_error: float
    k_tail_bound: float
    epsilon_used: float

    @property
    def max_abs_error(self) -> float:
        return float(self.abs_errors.max())


def identity_kernel_apply(
    system: SusySystem,
    test_fn: TestFunction,
    x: float,
    reg: RegularizationParams,
    *,
    tol: float = QUAD_TOL,
) -> SmearedFunctional:
    """Apply the (regularized) resolution of the identity to Phi at x.

    Returns I(x) = int_0^{k_max} dk (L psi_k)(x) c_k / (k^2 - alpha - i eps)
    with c_k = int dy (L psi_k)(y) Phi(y) computed first.  I(x) -> Phi(x) as
    eps -> sign(b) * 0 in the singular regime, and already at eps = 0 in the
    regular regime.
    """
    profile = reconstruction_profile(system, [test_fn], [x], reg, tol=tol)
    value = complex(profile.values[0, 0])
    est = profile.estimated_error + profile.k_tail_bound
    table = ((reg.k_step, value),)
    return SmearedFunctional(value, table, est < tol * (1 + abs(value)), est)


def reconstruction_profile(
    system: SusySystem,
    battery,
    xs,
    reg: RegularizationParams,
    *,
    tol: float = QUAD_TOL,
) -> ReconstructionProfile:
    """Reconstruct every battery member at every sample point in one sweep."""
    battery = tuple(battery)
    xs = tuple(float(x) for x in xs)
    if any(x <= 0 for x in xs):
        raise ValueError("sample points must be positive")

    b = system.factorization.b
    eps = reg.effective_epsilon(b)
    pole = None
    if system.factorization.is_singular:
        if eps == 0.0:
            raise PoleOnContour(
                "singular regime with eps = 0: the identity kernel has a pole "
                "at k = |b|"
            )
        pole = system.singular_k
    segments = _kernel_segments(reg, pole, abs(eps) if eps else 0.0)
    all_k = np.concatenate(segments)

    grid = system.grid
    y = grid.x
    wy = simpson_weights(grid.n_points, grid.spacing)
    phimat = np.stack([phi(y) for phi in battery])  # (M, n_y)
    x_idx = np.array([grid.index_of(x) for x in xs])

    c = np.empty((len(battery), len(all_k)), dtype=complex)
    p = np.empty((len(all_k), len(xs)), dtype=complex)
    for idx, kc, vals, derivs in iter_jost_chunks(system.potential, all_k, grid):
        rows = _lpsi_rows(system, kc, vals, derivs)
        c[:, idx] = (phimat * wy[None, :]) @ rows.T
        p[idx, :] = rows[:, x_idx]

    denom = all_k**2 - system.alpha - 1j * eps
    integrand = p[None, :, :] * (c / denom[None, :])[:, :, None]
    # shape (M, n_k, n_x)

    values = np.zeros((len(battery), len(xs)), dtype=complex)
    est_arr = np.zeros((len(battery), len(xs)))
    pos = 0
    for seg in segments:
        n = len(seg)
        dx = seg[1] - seg[0]
        block = integrand[:, pos : pos + n, :]
        full = simpson(block, dx=dx, axis=1)
        coarse = simpson(block[:, ::2, :], dx=2 * dx, axis=1)
        values += full
        est_arr += np.abs(full - coarse) / 15.0
        pos += n
    est = float(est_arr.max())

    # truncation bounds: oscillatory tail beyond k_max plus the discarded
    # [0, k_min] piece (integrand vanishes like k^2 at the origin)
    g_end = np.abs(integrand[:, -1, :])
    tail = float((2.0 * g_end / np.maximum(np.asarray(xs)[None, :], 0.3)).max())
    g0 = np.abs(integrand[:, 0, :]).max() if pole is None else np.abs(
        integrand[:, np.argmin(all_k), :]
    ).max()
    tail += float(g0 * reg.k_min / 3.0)

    targets = np.stack([phi(np.asarray(xs)) for phi in battery])
    return ReconstructionProfile(
        xs=xs,
        members=tuple(phi.label() for phi in battery),
        values=values,
        targets=targets,
        abs_errors=np.abs(values - targets),
        estimated_error=float(est),
        k_tail_bound=tail,
        epsilon_used=float(eps),
    )


def _kernel_segments(reg: RegularizationParams, pole, eps_abs):
    """Uniform Simpson segments covering [k_min, k_max], pole-refined."""
    if pole is None:
        return [uniform_segment(reg.k_min, reg.k_max, reg.k_step)]

    r0 = reg.pole_halfwidth * eps_abs
    fine = eps_abs / reg.pole_step_fraction
    r_outer = r0
    radii = [r0]
    limit = 0.8 * min(pole - reg.k_min, reg.k_max - pole)
    while r_outer < min(0.4, limit):
        r_outer = min(2 * r_outer, limit)
        radii.append(r_outer)

    # graded rings: the step in a ring scales with its inner distance to
    # the pole, keeping the 1/(k^2 - b^2 - i eps) variation resolved
    segments = [uniform_segment(reg.k_min, pole - r_outer, reg.k_step)]
    for outer_r, inner_r in zip(radii[::-1][:-1], radii[::-1][1:]):
        segments.append(
            uniform_segment(pole - outer_r, pole - inner_r, inner_r / reg.pole_step_fraction)
        )
    segments.append(uniform_segment(pole - r0, pole + r0, fine))
    for inner_r, outer_r in zip(radii[:-1], radii[1:]):
        segments.append(
            uniform_segment(pole + inner_r, pole + outer_r, inner_r / reg.pole_step_fraction)
        )
    segments.append(uniform_segment(pole + r_outer, reg.k_max, reg.k_step))
    return segments


# ----------------------------------------------------------------------------
# kernel tables and the delta-family probe
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelTable:
    """Kernel values K(x_i, y_j) on a rectangular sample."""

    xs: np.ndarray
    ys: np.ndarray  # uniform, odd count (Simpson-able)
    values: np.ndarray  # shape (len(xs), len(ys))

    def apply(self, test_fn: TestFunction) -> np.ndarray:
        wy = simpson_weights(len(self.ys), self.ys[1] - self.ys[0])
        return self.values @ (wy * test_fn(self.ys))


def identity_kernel_matrix(
    system: SusySystem,
    xs,
    ys,
    reg: RegularizationParams,
) -> KernelTable:
    """Tabulate the smoothed identity kernel on (xs, ys).

    The k integral uses the same segments as reconstruction_profile; the
    result is meaningful once applied to a decaying test function.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    b = system.factorization.b
    eps = reg.effective_epsilon(b)
    pole = None
    if system.factorization.is_singular:
        if eps == 0.0:
            raise PoleOnContour("singular regime with eps = 0")
        pole = system.singular_k
    segments = _kernel_segments(reg, pole, abs(eps) if eps else 0.0)

    grid = system.grid
    idx_all = np.array(
        [grid.index_of(v) for v in np.concatenate((xs, ys))]
    )
    k_weights = []
    for seg in segments:
        k_weights.append(simpson_weights(len(seg), seg[1] - seg[0]))
    all_k = np.concatenate(segments)
    wk = np.concatenate(k_weights)

    kern = np.zeros((len(xs), len(ys)), dtype=complex)
    for idx, kc, vals, derivs in iter_jost_chunks(system.potential, all_k, grid):
        rows = _lpsi_rows(system, kc, vals, derivs)[:, idx_all]
        rx = rows[:, : len(xs)]
        ry = rows[:, len(xs) :]
        coeff = wk[idx] / (kc**2 - system.alpha - 1j * eps)
        kern += np.einsum("k,ki,kj->ij", coeff, rx, ry)
    return KernelTable(xs=xs, ys=ys, values=kern)


@dataclass(frozen=True)
class DeltaProbeProfile:
    """Deviation of a kernel from the identity map on a test battery."""

    members: tuple[str, ...]
    deviations: tuple[float, ...]

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)


def delta_family_probe(kernel: KernelTable, battery) -> DeltaProbeProfile:
    """Apply a tabulated kernel to each battery member, report max deviation."""
    members, devs = [], []
    for phi in battery:
        got = kernel.apply(phi)
        devs.append(float(np.abs(got - phi(kernel.xs)).max()))
        members.append(phi.label())
    return DeltaProbeProfile(members=tuple(members), deviations=tuple(devs))
