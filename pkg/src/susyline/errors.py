"""Exception types shared across the library."""


class SusylineError(Exception):
    """Base class for all library errors."""


class AsymptoticRegionTooSmall(SusylineError):
    """Grid does not extend past the potential's decay radius."""


class IntegrationDiverged(SusylineError):
    """Adaptive ODE stepping failed to reach its tolerance."""


class JostZeroOnRealAxis(SusylineError):
    """|F(k)| vanished for real k; the base problem is out of contract."""


class NodalTransformationFunction(SusylineError):
    """Transformation function u has a (near-)node; the superpotential is singular."""


class GridMismatch(SusylineError):
    """Operand sampled on a different grid than the system."""


class SpectralSingularityPoint(SusylineError):
    """k^2 is too close to the factorization constant; N_k is (near) zero."""


class DegenerateJost(SusylineError):
    """L f(k, .) has vanishing asymptotic amplitude (the singular wavenumber)."""


class QuadratureNotConverged(SusylineError):
    """Damping extrapolation (or grid refinement) disagreed beyond tolerance."""


class WrongRegime(SusylineError):
    """Operation requires the other regular/singular regime."""


class PoleOnContour(SusylineError):
    """Singular regime with epsilon = 0: the integrand has a pole on the k axis."""


class AtSingularPoint(SusylineError):
    """Closed-form eigenfunction requested exactly at the singular wavenumber."""


class OnBranchBoundary(SusylineError):
    """Re(beta) = 0: the closed-form integrals sit on the branch boundary."""


class ConfigError(SusylineError):
    """Invalid or incomplete run configuration."""
