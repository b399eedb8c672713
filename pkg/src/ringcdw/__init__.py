"""Persistent currents and rotating density waves on a flux-threaded superfluid ring."""

__version__ = "0.1.0"

from .landau import (
    LandauParams,
    effective_alpha,
    equilibrium_amplitude,
    instability_sweep,
    self_consistent_amplitude,
)
from .oracle import OracleResult, minimize_phase_energy, oracle_compare
from .ring import (
    DensityProfile,
    ProfileError,
    RingAverages,
    RingConfig,
    compute_averages,
    make_cosine_profile,
    make_custom_profile,
    make_uniform_profile,
    random_profile,
    read_profile,
    write_profile,
)
from .rotating import (
    RotationScan,
    certify_no_linear_term,
    energy_lab_frame,
    perturbative_stiffness,
    rotating_potentials,
    rotation_derivative_check,
    rotation_scan,
    rotational_stiffness,
)
from .steady import (
    SteadyState,
    angular_momentum_perturbative,
    ground_state_winding,
    perturbative_current,
    perturbative_energy,
    solve_steady,
)
