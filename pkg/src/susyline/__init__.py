"""SUSY (Darboux) transforms of half-line Schrodinger operators with
complex factorization constants, and numerical verification of their
distributional spectral identities."""

from .darboux import (
    FactorizationConstant,
    NormalizedEigenfunction,
    SusySystem,
    apply_L,
    apply_L_star_adjoint,
    boundary_condition_residual,
    build_system,
    eigen_residual,
    factorization_residual,
    intertwining_residual,
    normalized_phi,
    singular_mode,
)
from .distributions import (
    DEFAULT_BATTERY,
    DEFAULT_X_SAMPLES,
    DeltaProbeProfile,
    KernelTable,
    ReconstructionProfile,
    RegularizationParams,
    binorm_functional,
    delta_family_probe,
    identity_kernel_apply,
    identity_kernel_matrix,
    reconstruction_profile,
    smeared_biorthonormality,
    smeared_pairing_profile,
)
from .grids import DEFAULT_GRID, SMEARING_GRID, Grid
from .jost import (
    JostData,
    base_eigenfunction,
    jost_sweep,
    ode_residual,
    smeared_orthonormality,
    solve_jost,
)
from .potentials import Potential, make_potential, square_well, table_potential, zero_potential
from .quadrature import SmearedFunctional, damped_integral
from .schwartz import (
    SchwartzSystem,
    analytic_phi,
    binorm_closed_form,
    smeared_zz2_residual,
    tabulated_integrals,
    zz2_bracket,
    zz2_kernel,
)
from .singularities import (
    PathReport,
    ScanMinimum,
    SingularityScan,
    boundary_functional,
    path_to_singularity,
    scan_singularities,
    transformed_jost,
)
from .testfunctions import TestFunction, compact_bump, gaussian, odd_gaussian, zero_function
from .waves import WaveSample

__version__ = "0.1.0"
