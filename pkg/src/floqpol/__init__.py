"""Floquet treatment of few-level molecules in a strong monochromatic field.

Quasi-energies and steady states from the truncated Floquet matrix, sudden
switch-on expansion coefficients, the induced polarization P(t) with its
Fourier components P_n, and the field-dependent susceptibility P_1/F. A
direct RK4 propagator serves as an independent check.
"""

from .analytic import TwoLevelParams, convergence_radius, sos_polarizability, two_level_p1
from .errors import (
    AsymmetryError,
    ConvergenceError,
    DimensionError,
    FitError,
    FloqpolError,
    ModelParseError,
    ModelValidationError,
    PoleError,
    PropagationError,
    ResonanceError,
    ScanSpecError,
    SingularBasisError,
    StepSizeError,
    StepSizeWarning,
)
from .floquet import (
    FloquetMatrix,
    FloquetSolution,
    build_floquet_matrix,
    diagonalize_symmetric,
    fold_to_zone,
    select_representatives,
    solve_floquet,
)
from .initcond import InitialExpansion, build_B, expansion_for, solve_A
from .model import (
    FieldConfig,
    MolecularModel,
    TruncationConfig,
    builtin_model,
    load_model,
    save_model,
    two_level_model,
)
from .oracle import PropagationResult, dipole_of, fourier_of_series, propagate
from .polarization import (
    PolarizationResult,
    fourier_components,
    periodic_part,
    polarization,
    polarization_time_series,
    susceptibility,
)
from .scan import FitResult, ScanSpec, fit_susceptibilities, run_scan

__version__ = "0.1.0"
