"""Numerical laboratory for quench metrology in superradiant light-matter models.

Gaussian phase-space dynamics of the frozen-spin Dicke model, quantum and
classical Fisher information of quenches across the superradiant transition,
homodyne-angle optimization, a pumped cavity-BEC mapping, and an exact
truncated Fock-space oracle that cross-validates all of it.
"""

from .cavity import (
    CavityParams,
    equivalent_dicke_params,
    gap_linear_form,
    gap_squared,
    map_to_quadratic,
    qfi_growth_exponent,
)
from .fisher import (
    GapParameter,
    LocalGenerator,
    PARAMETER_CHOICES,
    cfi_asymptotic,
    cfi_closed_form_sqrt2,
    cfi_large_time,
    cfi_quadrature,
    delta_epsilon,
    local_generator,
    optimal_angle,
    qfi_eigenstate,
    qfi_from_generator,
    qfi_heuristic_superradiant,
    qfi_quench,
    scan_optimal_angle,
)
from .fock import (
    FockBasisSpec,
    build_dicke,
    build_effective,
    evolve_exact,
    evolve_series,
    ground_state,
    photon_number_series,
    qfi_fidelity,
    qfi_spectral,
    squeezed_fock_state,
    tail_population,
    vacuum_spin_down,
)
from .gaussian import (
    BogoliubovCoeffs,
    DickeParams,
    GaussianState,
    QuadraticHamiltonian,
    ValidityReport,
    bogoliubov_coeffs,
    check_validity,
    effective_hamiltonian,
    evolve,
    photon_number,
    propagator,
    quadrature_variance,
    squeezing_parameter,
    vacuum_state,
)

__version__ = "0.1.0"

__all__ = [
    "BogoliubovCoeffs",
    "CavityParams",
    "DickeParams",
    "FockBasisSpec",
    "GapParameter",
    "GaussianState",
    "LocalGenerator",
    "PARAMETER_CHOICES",
    "QuadraticHamiltonian",
    "ValidityReport",
    "bogoliubov_coeffs",
    "build_dicke",
    "build_effective",
    "cfi_asymptotic",
    "cfi_closed_form_sqrt2",
    "cfi_large_time",
    "cfi_quadrature",
    "check_validity",
    "delta_epsilon",
    "effective_hamiltonian",
    "equivalent_dicke_params",
    "evolve",
    "evolve_exact",
    "evolve_series",
    "gap_linear_form",
    "gap_squared",
    "ground_state",
    "local_generator",
    "map_to_quadratic",
    "optimal_angle",
    "photon_number",
    "photon_number_series",
    "propagator",
    "qfi_eigenstate",
    "qfi_fidelity",
    "qfi_from_generator",
    "qfi_growth_exponent",
    "qfi_heuristic_superradiant",
    "qfi_quench",
    "qfi_spectral",
    "quadrature_variance",
    "scan_optimal_angle",
    "squeezed_fock_state",
    "squeezing_parameter",
    "tail_population",
    "vacuum_spin_down",
    "vacuum_state",
]
