"""Smooth decaying probes used to evaluate distributional statements.

Every delta-function claim in the library is checked in the smeared sense:
the kernel is integrated against one of these test functions and the result
is compared with the pointwise evaluation the distribution predicts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: A test function is treated as negligible below this beyond tail_radius().
TAIL_TOL = 1e-14


@dataclass(frozen=True)
class TestFunction:
    """Probe Phi with analytic derivatives and a decay certificate.

    Families
    --------
    gaussian(center, width)      exp(-((y - center) / width)^2)
    compact_bump(center, radius) exp(1 - 1/(1 - t^2)), t = (y - center)/radius
    odd_gaussian(width)          y * exp(-(y / width)^2)   (vanishes at y = 0)
    zero                         identically 0
    """

    family: str
    center: float = 0.0
    width: float = 1.0

    def __post_init__(self):
        if self.family not in ("gaussian", "compact_bump", "odd_gaussian", "zero"):
            raise ValueError(f"unknown test-function family: {self.family!r}")
        if self.family != "zero" and self.width <= 0:
            raise ValueError("width/radius must be positive")

    def _t(self, y):
        return (np.asarray(y, dtype=float) - self.center) / self.width

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        if self.family == "zero":
            return np.zeros_like(y)
        if self.family == "gaussian":
            return np.exp(-self._t(y) ** 2)
        if self.family == "odd_gaussian":
            s = y / self.width
            return y * np.exp(-(s ** 2))
        t = self._t(y)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(y)
        ts = np.where(inside, t, 0.0)
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - ts[inside] ** 2))
        return out

    def derivative(self, y):
        y = np.asarray(y, dtype=float)
        if self.family == "zero":
            return np.zeros_like(y)
        if self.family == "gaussian":
            t = self._t(y)
            return -2.0 * t / self.width * np.exp(-(t ** 2))
        if self.family == "odd_gaussian":
            s = y / self.width
            return (1.0 - 2.0 * s ** 2) * np.exp(-(s ** 2))
        t = self._t(y)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(y)
        ti = np.where(inside, t, 0.0)
        s = 1.0 - ti ** 2
        g1 = -2.0 * ti / s ** 2  # d/dt of the exponent
        out[inside] = (self(y) * g1 / self.width)[inside]
        return out

    def second_derivative(self, y):
        y = np.asarray(y, dtype=float)
        if self.family == "zero":
            return np.zeros_like(y)
        if self.family == "gaussian":
            t = self._t(y)
            return (4.0 * t ** 2 - 2.0) / self.width ** 2 * np.exp(-(t ** 2))
        if self.family == "odd_gaussian":
            s = y / self.width
            return (4.0 * s ** 3 - 6.0 * s) / self.width * np.exp(-(s ** 2))
        t = self._t(y)
        inside = np.abs(t) < 1.0
        out = np.zeros_like(y)
        ti = np.where(inside, t, 0.0)
        s = 1.0 - ti ** 2
        g1 = -2.0 * ti / s ** 2
        g2 = -2.0 / s ** 2 - 8.0 * ti ** 2 / s ** 3
        out[inside] = (self(y) * (g1 ** 2 + g2) / self.width ** 2)[inside]
        return out

    def tail_radius(self, tol: float = TAIL_TOL) -> float:
        """Radius beyond which |Phi| < tol."""
        if self.family == "zero":
            return 0.0
        if self.family == "compact_bump":
            return abs(self.center) + self.width
        # gaussian-type decay exp(-(r/width)^2); the linear prefactor of
        # odd_gaussian is absorbed by one extra width.
        r = self.width * np.sqrt(max(np.log(1.0 / tol), 1.0))
        if self.family == "odd_gaussian":
            return r + self.width
        return abs(self.center) + r

    def label(self) -> str:
        if self.family == "zero":
            return "zero"
        return f"{self.family}({self.center:g},{self.width:g})"


def gaussian(center: float, width: float) -> TestFunction:
    return TestFunction("gaussian", center, width)


def compact_bump(center: float, radius: float) -> TestFunction:
    return TestFunction("compact_bump", center, radius)


def odd_gaussian(width: float = 1.0) -> TestFunction:
    return TestFunction("odd_gaussian", 0.0, width)


def zero_function() -> TestFunction:
    return TestFunction("zero")
