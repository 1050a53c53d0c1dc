"""High-temperature thermodynamics and magnetism."""

from .magnetism import (
    CriticalFields,
    chi_difference,
    critical_fields,
    lambda_min,
    magnetic_moment,
    max_temperature,
    nearest_variant,
    susceptibility,
    susceptibility_beta0,
    susceptibility_strong,
    susceptibility_weak,
    susceptibility_zero_field,
)
from .point import ThermoPoint, evaluate_point
from .potential import (
    ClosedPotential,
    DirectPotential,
    grand_potential_closed,
    grand_potential_direct,
    momentum_shell,
    states_density,
    states_density_shell,
    u_parameters,
    u_parameters_alt,
)
from .sums import (
    EulerMaclaurin,
    cylinder_D,
    euler_maclaurin,
    gauss_integral,
    gauss_integral_D,
    s_sum_direct,
    s_sums,
    scaled_cylinder_D,
)
