"""Spectral toolkit for a perturbed fourth-order Robin problem outside a disk.

The package computes the lowest negative eigenvalue of the operator
Lap^2 - tau Lap with a Robin-type boundary parameter gamma on the
exterior of a planar disk, by decomposing over angular Fourier modes
and solving each radial fiber with H^2-conforming Hermite elements.
On top of the solver sit independent reference routes (a modified
Bessel secular determinant, a finite-difference rediscretization, a
closed trial-function family) and a verification pipeline that
transplants the disk ground state over curvature-constrained convex
bodies to certify an isoperimetric eigenvalue comparison.
"""

from .disk import (
    CLASS_DEGENERATE,
    CLASS_NONE,
    CLASS_NONRADIAL,
    CLASS_RADIAL,
    EigenResult,
    GroundStateReport,
    SolveControls,
    SweepRow,
    ground_state,
    solve_fiber,
    sweep,
    sweep_csv_rows,
)
from .domain import (
    ConstraintMargins,
    ConvexDomain,
    constraint_margins,
    curvature_weight,
    domain_from_support,
    parse_domain,
    read_domain,
)
from .errors import (
    BracketError,
    ConvergenceError,
    ExbilapError,
    FactorizationError,
    NonConvexDomainError,
    ParameterError,
    UnsupportedModeError,
    UnsupportedRegimeError,
)
from .fiber import (
    BoundaryResiduals,
    FiberParams,
    HermiteProfile,
    assemble_fiber,
    assemble_fiber_expanded,
    fiber_form_value,
    natural_bc_residual,
    profile_mass,
)
from .numerics import (
    BandedSymMatrix,
    InertiaTriple,
    TruncatedMesh,
    build_mesh,
    factor_inertia,
    smallest_eigenpair,
)
from .reference import (
    fd_lambda,
    negativity_threshold,
    secular_det,
    secular_lambda,
    ualpha_energy,
)
from .transplant import (
    TransplantReport,
    transplant_quotient,
    verify_isoperimetric,
)

__version__ = "0.1.0"

__all__ = [
    "BandedSymMatrix",
    "BoundaryResiduals",
    "BracketError",
    "CLASS_DEGENERATE",
    "CLASS_NONE",
    "CLASS_NONRADIAL",
    "CLASS_RADIAL",
    "ConstraintMargins",
    "ConvergenceError",
    "ConvexDomain",
    "EigenResult",
    "ExbilapError",
    "FactorizationError",
    "FiberParams",
    "GroundStateReport",
    "HermiteProfile",
    "InertiaTriple",
    "NonConvexDomainError",
    "ParameterError",
    "SolveControls",
    "SweepRow",
    "TransplantReport",
    "TruncatedMesh",
    "UnsupportedModeError",
    "UnsupportedRegimeError",
    "assemble_fiber",
    "assemble_fiber_expanded",
    "build_mesh",
    "constraint_margins",
    "curvature_weight",
    "domain_from_support",
    "factor_inertia",
    "fd_lambda",
    "fiber_form_value",
    "ground_state",
    "natural_bc_residual",
    "negativity_threshold",
    "parse_domain",
    "profile_mass",
    "read_domain",
    "secular_det",
    "secular_lambda",
    "smallest_eigenpair",
    "solve_fiber",
    "sweep",
    "sweep_csv_rows",
    "transplant_quotient",
    "ualpha_energy",
    "verify_isoperimetric",
]
