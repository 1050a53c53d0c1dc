"""Charged particle in a magnetic field and harmonic trap with a minimal length."""

from .core import NATURAL, GupParams, SystemConfig, UnitSystem, make_config, minimal_length, thermal_wavelength
from .errors import (
    ConvergenceError,
    DivergentMoment,
    DomainError,
    GupMagError,
    GupViolation,
    RegimeError,
    RegimeWarning,
    RootNotBracketed,
    ThermalRegimeViolation,
    UndeformedError,
)
from .spectrum import QuantumNumbers, energy_exact, energy_first_order, lambda_exponent

__version__ = "0.1.0"
