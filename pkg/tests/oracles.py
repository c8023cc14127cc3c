"""Independent oracles used by the tests.

These deliberately avoid the library's solution paths: the square-well
oracle is a two-region closed form with continuity matching, the smeared
oracles integrate in the opposite order (damped x integral innermost, on a
uniform Simpson k' grid), and the identity-kernel oracle is built from the
closed-form eigenfunctions of the v0 = 0 problem by direct quadrature.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import simpson

from susyline.quadrature import _neville_to_zero
from susyline.schwartz import analytic_phi


# ----------------------------------------------------------------------------
# square well: two-region closed form
# ----------------------------------------------------------------------------

def square_well_jost(depth: float, width: float, k: complex, x: np.ndarray):
    """Jost solution and F(k) for v0 = -depth on [0, width).

    For x >= width the solution is exactly exp(ikx); inside the well it is
    A exp(i kappa x) + B exp(-i kappa x) with kappa = sqrt(k^2 + depth),
    matched continuously (values and derivatives) at the edge.
    """
    k = complex(k)
    kappa = np.sqrt(k * k + depth + 0j)
    A = np.exp(1j * (k - kappa) * width) * (kappa + k) / (2 * kappa)
    B = np.exp(1j * (k + kappa) * width) * (kappa - k) / (2 * kappa)
    inside = x < width
    f = np.where(inside, A * np.exp(1j * kappa * x) + B * np.exp(-1j * kappa * x),
                 np.exp(1j * k * x))
    fp = np.where(inside,
                  1j * kappa * (A * np.exp(1j * kappa * x) - B * np.exp(-1j * kappa * x)),
                  1j * k * np.exp(1j * k * x))
    F = A + B
    return f, fp, complex(F)


def square_well_psi(depth: float, width: float, k: float, x: np.ndarray):
    """Delta-normalized continuum eigenfunction from the matching oracle."""
    f, _, F = square_well_jost(depth, width, k, x)
    return np.sqrt(2.0 / np.pi) * np.imag(np.conj(F) * f) / abs(F)


# ----------------------------------------------------------------------------
# brute-force damped 2D quadrature (opposite integration order)
# ----------------------------------------------------------------------------

def brute_force_smeared(
    x: np.ndarray,
    own_row: np.ndarray,
    kp_nodes: np.ndarray,
    rows: np.ndarray,
    phi_at_nodes: np.ndarray,
    eta_schedule,
):
    """Smear int dk' Phi(k') [int dx own(x) row_{k'}(x)] with x innermost.

    rows has shape (n_nodes, n_x) on a *uniform* k' grid (odd count); the
    damped x integral runs per node, the k' integral is Simpson, and the
    eta limit is taken last.
    """
    dx = x[1] - x[0]
    dk = kp_nodes[1] - kp_nodes[0]
    partials = []
    for eta in eta_schedule:
        damped = np.exp(-eta * x * x) * own_row
        inner = simpson(rows * damped[None, :], dx=dx, axis=1)
        partials.append(simpson(inner * phi_at_nodes, dx=dk))
    value, est = _neville_to_zero(np.asarray(tuple(eta_schedule)), np.asarray(partials))
    return value, est


# ----------------------------------------------------------------------------
# identity kernel by direct quadrature of the closed-form eigenfunctions
# ----------------------------------------------------------------------------

def schwartz_identity_apply(a: complex, test_fn, x: float, y: np.ndarray,
                            k_max: float = 12.0, k_step: float = 0.002):
    """I(x) = int dk phi_k(x) [int dy phi_k(y) Phi(y)] with closed-form phi_k.

    Regular regime only (the k integrand has no pole); plain Simpson in
    both variables.
    """
    n = int(np.ceil((k_max - 1e-3) / k_step)) | 1
    ks = np.linspace(1e-3, k_max, n)
    phi_y = np.stack([analytic_phi(a, k, y) for k in ks])
    c = simpson(phi_y * test_fn(y)[None, :], dx=y[1] - y[0], axis=1)
    phi_x = np.array([analytic_phi(a, k, np.asarray(x))[()] for k in ks])
    return simpson(phi_x * c, dx=ks[1] - ks[0])
