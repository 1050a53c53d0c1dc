"""Physical parameters, unit convention and validity checks.

Every quantity in the package is a plain float in natural units
(hbar = m = k_B = 1 and q/(2mc) = 1, so the cyclotron frequency omega
equals the field B numerically). :class:`UnitSystem` carries the
constants explicitly so formulas can be written with them visible and
so dimensionless groups can be formed and undone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import DomainError, GupViolation, ThermalRegimeViolation


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention. Defaults are the natural units used everywhere."""

    hbar: float = 1.0
    mass: float = 1.0
    k_B: float = 1.0
    q_over_2mc: float = 1.0

    @property
    def bohr_magneton(self) -> float:
        # mu_B = q*hbar/(2mc)
        return self.q_over_2mc * self.hbar

    def reduce(self, omega0, B, T, beta):
        """Dimensionless groups: field ratio, temperature in hbar*omega0, eps0."""
        return {
            "omega_ratio": self.q_over_2mc * B / omega0,
            "kT": self.k_B * T / (self.hbar * omega0),
            "eps0": beta * self.mass * self.hbar * omega0,
        }

    def expand(self, groups, omega0):
        """Inverse of :meth:`reduce` for a given trap frequency."""
        B = groups["omega_ratio"] * omega0 / self.q_over_2mc
        T = groups["kT"] * self.hbar * omega0 / self.k_B
        beta = groups["eps0"] / (self.mass * self.hbar * omega0)
        return B, T, beta


NATURAL = UnitSystem()


@dataclass(frozen=True)
class GupParams:
    """Deformation parameters of the commutator algebra.

    Only the restricted algebra with ``beta_prime = gamma_rep = 0`` is
    solved; the extra fields exist so that a nonzero value is rejected
    instead of silently ignored.
    """

    beta: float = 0.0
    beta_prime: float = 0.0
    gamma_rep: float = 0.0
    dim: int = 2

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0:
            raise DomainError(f"beta must be finite and >= 0, got {self.beta!r}")
        if self.beta_prime != 0:
            raise DomainError("beta_prime != 0 (noncommuting coordinates) is not supported")
        if self.gamma_rep != 0:
            raise DomainError("gamma_rep != 0 is not supported")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")

    @property
    def squeeze_exponent(self) -> float:
        """Measure exponent alpha = (gamma - beta'(D-1)/2)/(beta + beta').

        Always 0 for the supported algebra; kept for completeness.
        """
        total = self.beta + self.beta_prime
        if total == 0:
            return 0.0
        return (self.gamma_rep - self.beta_prime * (self.dim - 1) / 2) / total


def minimal_length(gup: GupParams, units: UnitSystem = NATURAL) -> float:
    """Smallest position uncertainty hbar*sqrt(D*beta + beta')."""
    return units.hbar * math.sqrt(gup.dim * gup.beta + gup.beta_prime)


def thermal_wavelength(T: float, units: UnitSystem = NATURAL) -> float:
    """Thermal de Broglie wavelength sqrt(2*pi*hbar^2/(m*k*T))."""
    if not math.isfinite(T) or T <= 0:
        raise DomainError(f"temperature must be positive, got {T!r}")
    return math.sqrt(2 * math.pi * units.hbar**2 / (units.mass * units.k_B * T))


@dataclass(frozen=True)
class SystemConfig:
    """Trap, field, temperature and deformation with derived scales.

    Construction validates the GUP bound ``epsilon < 1`` and, for
    ``beta > 0``, that the thermal wavelength exceeds the minimal length.
    Use :func:`make_config` or :meth:`with_` to build instances.
    """

    omega0: float
    B: float
    T: float
    V: float = 1.0
    z: float = 1.0
    gup: GupParams = field(default_factory=GupParams)
    units: UnitSystem = NATURAL

    omega: float = field(init=False)
    omega_tilde: float = field(init=False)
    epsilon: float = field(init=False)
    kappa: float = field(init=False)
    lambda_th: float = field(init=False)
    dx_min: float = field(init=False)

    def __post_init__(self):
        for name in ("omega0", "B", "T", "V", "z"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite number, got {value!r}")
        for name in ("omega0", "T", "V", "z"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")

        u = self.units
        omega = u.q_over_2mc * self.B
        omega_tilde = math.hypot(omega, self.omega0)
        epsilon = u.mass * u.hbar * omega_tilde * self.gup.beta
        lam = thermal_wavelength(self.T, u)
        dx = minimal_length(self.gup, u)

        if epsilon >= 1:
            raise GupViolation(f"m*hbar*omega_tilde*beta = {epsilon:.6g} >= 1")
        if self.gup.beta > 0 and lam <= dx:
            raise ThermalRegimeViolation(
                f"thermal wavelength {lam:.6g} <= minimal length {dx:.6g}"
            )

        set_ = object.__setattr__
        set_(self, "omega", omega)
        set_(self, "omega_tilde", omega_tilde)
        set_(self, "epsilon", epsilon)
        set_(self, "kappa", math.sqrt(epsilon))
        set_(self, "lambda_th", lam)
        set_(self, "dx_min", dx)

    @property
    def beta(self) -> float:
        return self.gup.beta

    @property
    def beta_tilde(self) -> float:
        """Inverse temperature 1/(k T)."""
        return 1.0 / (self.units.k_B * self.T)

    @property
    def thermal_deformation(self) -> float:
        """m*beta/beta_tilde = m*beta*k*T, the expansion parameter of the high-T forms."""
        return self.units.mass * self.gup.beta / self.beta_tilde

    @property
    def length_ratio(self) -> float:
        """lambda_th / dx_min (infinite when beta = 0)."""
        return math.inf if self.dx_min == 0 else self.lambda_th / self.dx_min

    @property
    def field_ratio(self) -> float:
        """omega / (2 omega_tilde), the Zeeman-like splitting of the circular modes."""
        return self.omega / (2 * self.omega_tilde)

    def with_(self, **changes) -> "SystemConfig":
        """Copy with some inputs changed; ``beta`` is accepted as a shortcut."""
        if "beta" in changes:
            changes["gup"] = replace(changes.get("gup", self.gup), beta=float(changes.pop("beta")))
        return replace(self, **changes)


def make_config(omega0=1.0, B=0.0, T=1.0, V=1.0, z=1.0, beta=0.0, units=NATURAL) -> SystemConfig:
    """Build a validated :class:`SystemConfig` from plain numbers."""
    if not all(math.isfinite(float(v)) for v in (omega0, B, T, V, z, beta)):
        raise DomainError("all inputs must be finite")
    return SystemConfig(
        omega0=float(omega0),
        B=float(B),
        T=float(T),
        V=float(V),
        z=float(z),
        gup=GupParams(beta=float(beta)),
        units=units,
    )
