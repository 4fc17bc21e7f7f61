"""Multipliers of periodic orbits of quadratic polynomials.

Numerical verification toolkit for the parameter plane of z^2 + c: exact
multiplier-derivative identities, transfer-operator residuals, inequality
regions in the multiplier plane, hyperbolic-component charts, external rays,
and certified internal-argument sequences.
"""

from .atlas import (
    ContinuationPath,
    HyperbolicComponent,
    InternalArgument,
    bifurcated_orbit,
    bifurcation_child,
    boundary_point,
    build_component,
    components_up_to,
    covering_check,
    dlambda_check,
    find_centers,
    lambda_map,
    main_cardioid,
    orbit_set_distance,
    psi_W,
    rho_W,
)
from .dynamics import (
    DEFAULT_CONFIG,
    AreaEstimate,
    EquipotentialSample,
    NumericsConfig,
    OrbitTrace,
    area_estimate,
    bottcher_value,
    equipotential_points,
    equipotential_pullback,
    green_value,
    inverse_bottcher,
    iterate_orbit,
    orbit_derivatives,
)
from .orbits import (
    OrbitDerivativeData,
    PeriodicOrbit,
    a_function,
    contour_residue,
    el_bound_check,
    enumerate_orbits,
    find_periodic_orbits,
    gamma_coeffs,
    identity_residual,
    rho_prime_fd,
    ruelle_residual,
    sample_repelling_orbits,
)
from .rays import (
    ExternalAngle,
    RayPolyline,
    digit_formula_check,
    ray_pair_landing,
    trace_dynamic_ray,
    trace_parameter_ray,
    wake_side_check,
)
from .regions import (
    ConstantsLedger,
    OmegaDomain,
    YoccozDisk,
    K_n_compute,
    R_n_value,
    build_ledger,
    corollary_B_check,
    cut_inequality_check,
    default_ledger,
    lemma_basic_check,
    log_multiplier_branch,
    main_inequality_gap,
    n_deep_sufficient,
    omega_contains,
    omega_log_x_bound,
    tilde_omega_contains,
    yoccoz_disk,
)
from .sequences import (
    ArgumentSequence,
    NestingReport,
    Verdict,
    generate_sequence,
    orbit_distance_monitor,
    read_sequence_file,
    toy_nesting,
    verify_assumptions,
    write_sequence_file,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
