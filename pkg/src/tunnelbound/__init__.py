"""Exact 1D transmission and rigorous sech^2 lower bounds on it."""

from .bounds import (
    BoundResult,
    ParticleBound,
    WKBEstimate,
    bound_basic,
    bound_basic_weak,
    bound_delta_mg,
    bound_improved,
    bound_low_energy,
    bound_old_low_energy,
    bound_schwartzian,
    bound_special,
    bound_wkb_like,
    sech2,
    theta_integrand,
    to_particle_bound,
    wkb_estimate,
)
from .errors import *  # noqa: F401,F403
from .millergood import (
    InvarianceReport,
    TransformedProfile,
    schwartzian_term,
    transform_with_J,
    transform_with_j,
    verify_invariance,
)
from .numerics import DEFAULT_CONFIG, QuadratureConfig, integrate, truncate_domain
from .optimize import OptimizationReport, best_bound, optimize_delta, optimize_trial
from .profiles import (
    EnergySlice,
    ForbiddenRegionSummary,
    PotentialProfile,
    forbidden_regions,
    k_squared,
    make_corpus,
    make_profile,
)
from .solver import ScatteringResult, SolverConfig, oracle_transmission, transmission

__version__ = "0.1.0"
