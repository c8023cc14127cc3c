"""Closed forms for the exactly solvable case v0 = 0.

With a zero base potential the Jost solution is exp(ikx), the
transformation function is u = exp(ax), the superpotential is the constant
a, and the partner Hamiltonian is the free operator with the complex Robin
condition phi'(0) + a phi(0) = 0.  Its continuum eigenfunctions are

    phi_k(x) = (k^2 - alpha)^{-1/2} sqrt(2/pi) [a sin(kx) - k cos(kx)],

with alpha = -a^2, and the bilinear pairing of L psi_k is
(k^2 + a^2) delta(k - k').  This module is the ground truth used to verify
the numerical Darboux pipeline and the regularized resolution of the
identity.

For the singular case a = ib the epsilon-shifted identity kernel is
approximated (dropping an epsilon^2 term in the denominator) by

    delta(x - y) + (e^{-+ z(x+y)} / z) [+- b^2 - i b z +- i eps / 2]
                 +- (i eps / 2 z) e^{-+ z |x-y|},    z = eps/(2b) - ib,

with the upper signs for b*eps > 0 and the lower ones for b*eps < 0.  The
bracket vanishes identically for b*eps > 0 and survives the eps -> 0 limit
otherwise, which is the sign rule the regularization relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .darboux import SING_TOL
from .errors import AtSingularPoint, OnBranchBoundary
from .testfunctions import TestFunction


@dataclass(frozen=True)
class SchwartzSystem:
    """Parameters of the exactly solvable example.

    `z` is the regularization shift parameter eps/(2b) - ib used by the
    approximate identity kernel in the singular regime.
    """

    a: complex
    epsilon: float = 0.0

    @property
    def alpha(self) -> complex:
        return -self.a * self.a

    @property
    def b(self) -> float:
        return self.a.imag

    @property
    def z(self) -> complex:
        return self.epsilon / (2.0 * self.b) - 1j * self.b


def analytic_phi(a: complex, k: float, x) -> np.ndarray:
    """Closed-form normalized eigenfunction of the Robin problem.

    Returns (k^2 - alpha)^{-1/2} sqrt(2/pi) [a sin(kx) - k cos(kx)] with the
    principal square root.

    Raises
    ------
    AtSingularPoint
        If |k^2 - alpha| < SING_TOL (normalization vanishes).
    """
    if not k > 0:
        raise ValueError("analytic_phi requires k > 0")
    a = complex(a)
    alpha = -a * a
    nk2 = k * k - alpha
    if abs(nk2) < SING_TOL:
        raise AtSingularPoint(f"k^2 - alpha = {nk2:.3e} at k = {k}")
    x = np.asarray(x, dtype=float)
    return (
        np.sqrt(2.0 / np.pi)
        / np.sqrt(nk2)
        * (a * np.sin(k * x) - k * np.cos(k * x))
    )


def tabulated_integrals(beta: complex, a_or_c: float) -> tuple[complex, complex]:
    """The two closed-form integrals used by the approximate kernel.

    Returns

        I1 = int_0^inf cos(a x) / (beta^2 + x^2) dx = +-(pi / 2 beta) e^{-+|a| beta}
        I2 = int_0^inf x sin(c x) / (beta^2 + x^2) dx = (pi / 2) e^{-+ c beta}

    with the upper signs for Re(beta) > 0 and the lower for Re(beta) < 0,
    evaluating both at the single argument a_or_c.  The cosine integral is
    even in its argument (hence |a|); the sine one requires c >= 0, with
    c = 0 returning the Abel limit pi/2.

    Raises
    ------
    OnBranchBoundary
        If Re(beta) = 0 (the continuation changes branch there).
    """
    beta = complex(beta)
    if beta.real == 0:
        raise OnBranchBoundary("Re(beta) = 0")
    if a_or_c < 0:
        raise ValueError("the sine integral requires a nonnegative argument")
    sign = 1.0 if beta.real > 0 else -1.0
    i1 = sign * (np.pi / (2.0 * beta)) * np.exp(-sign * abs(a_or_c) * beta)
    i2 = (np.pi / 2.0) * np.exp(-sign * a_or_c * beta)
    return complex(i1), complex(i2)


def zz2_bracket(b: float, epsilon: float) -> complex:
    """The middle bracket of the approximate kernel: +-b^2 - ibz +- i eps/2.

    Identically zero for b*eps > 0; for b*eps < 0 it equals -2 b^2 - i eps
    and survives the eps -> 0 limit.
    """
    if b == 0 or epsilon == 0:
        raise ValueError("b and epsilon must be nonzero")
    s = 1.0 if b * epsilon > 0 else -1.0
    z = epsilon / (2.0 * b) - 1j * b
    return s * b * b - 1j * b * z + s * 1j * epsilon / 2.0


def zz2_kernel(b: float, epsilon: float, x, y) -> np.ndarray:
    """Approximate regularized identity kernel minus its delta part.

    Valid for the singular case a = ib.  The full approximate kernel is
    delta(x - y) plus this value; the sign selection follows sign(b*eps).
    """
    if b == 0 or epsilon == 0:
        raise ValueError("b and epsilon must be nonzero")
    s = 1.0 if b * epsilon > 0 else -1.0
    z = epsilon / (2.0 * b) - 1j * b
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    bracket = zz2_bracket(b, epsilon)
    mid = np.exp(-s * z * (x + y)) / z * bracket
    last = s * (1j * epsilon / (2.0 * z)) * np.exp(-s * z * np.abs(x - y))
    return mid + last


def binorm_closed_form(a: complex, k: float, test_fn: TestFunction) -> complex:
    """Exact smeared bilinear pairing of L psi_k: (k^2 + a^2) Phi(k)."""
    a = complex(a)
    return (k * k + a * a) * complex(test_fn(np.asarray(k, dtype=float)))


def smeared_zz2_residual(
    b: float, epsilon: float, x: float, test_fn: TestFunction, y: np.ndarray
) -> complex:
    """The non-delta part of the approximate kernel smeared against Phi.

    Integrates zz2_kernel(b, eps, x, .) * Phi over the sampled y grid with
    the trapezoid rule (the kernel is smooth and Phi decays); this is what
    the numerical reconstruction error I(x) - Phi(x) should approach for
    small eps.
    """
    vals = zz2_kernel(b, epsilon, x, y) * test_fn(y)
    return complex(np.trapezoid(vals, y))
