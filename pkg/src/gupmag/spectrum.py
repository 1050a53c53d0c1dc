"""Energy levels of the deformed Fock-Darwin problem and their degeneracies."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import SystemConfig
from .errors import DomainError

UPPER = "upper"
LOWER = "lower"


@dataclass(frozen=True, order=True)
class QuantumNumbers:
    """Radial number ``n >= 0`` and magnetic number ``l``."""

    n: int
    l: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.l) != self.l:
            raise DomainError("quantum numbers must be integers")
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "l", int(self.l))

    @property
    def N(self) -> int:
        """Principal quantum number 2n + |l|."""
        return 2 * self.n + abs(self.l)

    @property
    def n_d(self) -> int:
        return self.n + (abs(self.l) + self.l) // 2

    @property
    def n_g(self) -> int:
        return self.n + (abs(self.l) - self.l) // 2

    def to_circular(self) -> tuple[int, int]:
        return self.n_d, self.n_g

    @classmethod
    def from_circular(cls, n_d: int, n_g: int) -> "QuantumNumbers":
        if n_d < 0 or n_g < 0:
            raise DomainError("circular quantum numbers must be >= 0")
        return cls(n=min(n_d, n_g), l=n_d - n_g)


@dataclass(frozen=True)
class SpectrumLevel:
    qn: QuantumNumbers
    energy: float
    lambda_exp: float | None
    branch: str
    pz: float = 0.0


class RegimeValue(NamedTuple):
    """A limiting-regime result plus a flag telling whether the regime holds."""

    value: float
    in_regime: bool


def lambda_exponent(epsilon: float, l: int, branch: str = UPPER) -> float:
    """Large-momentum decay exponent 1 +/- sqrt(1 + eps^2 (1 + l^2)) / eps."""
    if not epsilon > 0:
        raise DomainError("lambda exponent needs epsilon > 0; the undeformed case has none")
    root = math.sqrt(1.0 + epsilon**2 * (1 + l * l)) / epsilon
    if branch == UPPER:
        return 1.0 + root
    if branch == LOWER:
        return 1.0 - root
    raise DomainError(f"unknown branch {branch!r}")


def energy_exact(qn: QuantumNumbers, cfg: SystemConfig, pz: float = 0.0) -> SpectrumLevel:
    """Exact eigenvalue E_nl (upper branch) in the config's natural units."""
    u = cfg.units
    hw = u.hbar * cfg.omega_tilde
    kinetic = pz * pz / (2 * u.mass)
    N, l = qn.N, qn.l
    zeeman = cfg.omega / (2 * cfg.omega_tilde) * l
    if cfg.beta == 0:
        return SpectrumLevel(qn, kinetic + hw * (N + 1 + zeeman), None, UPPER, pz)
    eps = cfg.epsilon
    bracket = (
        (N + 1) * math.sqrt(1.0 + eps * eps * (1 + l * l))
        + 0.5 * eps * (N * N + l * l + 2 * N + 2)
        + zeeman
    )
    return SpectrumLevel(qn, kinetic + hw * bracket, lambda_exponent(eps, l), UPPER, pz)


def energy_first_order(n_d: int, n_g: int, cfg: SystemConfig, pz: float = 0.0) -> float:
    """First-order-in-epsilon energy in circular quantum numbers."""
    if n_d < 0 or n_g < 0:
        raise DomainError("circular quantum numbers must be >= 0")
    u = cfg.units
    eps = cfg.epsilon
    r = cfg.field_ratio
    hw = u.hbar * cfg.omega_tilde
    return (
        pz * pz / (2 * u.mass)
        + hw * (1 + eps)
        + hw * ((1 + eps + r) * n_d + eps * n_d * n_d)
        + hw * ((1 + eps - r) * n_g + eps * n_g * n_g)
    )


def _as_fraction(x) -> Fraction:
    f = Fraction(x)
    if (2 * f).denominator != 1:
        raise DomainError(f"expected an integer or half-integer, got {x!r}")
    return f


def weak_field_energy(gamma_q, rho_q, cfg: SystemConfig) -> RegimeValue:
    """Weak-field limit (omega_tilde -> omega0) in gamma = (n_d+n_g)/2, rho = (n_d-n_g)/2.

    ``in_regime`` is false unless 0 <= omega/omega0 <= 0.1.
    """
    g, r = _as_fraction(gamma_q), _as_fraction(rho_q)
    u = cfg.units
    e0 = u.mass * u.hbar * cfg.omega0 * cfg.beta
    value = 2 * u.hbar * cfg.omega0 * (float(g + Fraction(1, 2)) + e0 * float(g * (g + 1) + r * r + Fraction(1, 2)))
    ratio = abs(cfg.omega) / cfg.omega0
    return RegimeValue(value, ratio <= 0.1)


def strong_field_energy(gamma_q, rho_q, cfg: SystemConfig) -> RegimeValue:
    """Strong-field limit (omega_tilde -> omega); ``in_regime`` needs omega/omega0 >= 10."""
    g, r = _as_fraction(gamma_q), _as_fraction(rho_q)
    u = cfg.units
    w = abs(cfg.omega)
    e1 = u.mass * u.hbar * w * cfg.beta
    value = 2 * u.hbar * w * (float(g + (1 + r) / 2) + e1 * float(g * (g + 1) + r * r))
    return RegimeValue(value, w / cfg.omega0 >= 10)


@dataclass(frozen=True)
class EnergyClass:
    """Levels sharing one energy (dimensionless, in units of hbar*omega_tilde)."""

    energy: float
    members: tuple[QuantumNumbers, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.members)


def _rational_field_ratio(cfg: SystemConfig, max_den: int = 64) -> Fraction | None:
    r = cfg.field_ratio
    frac = Fraction(r).limit_denominator(max_den)
    return frac if abs(float(frac) - r) <= 1e-15 * max(1.0, abs(r)) else None


def degeneracy_table(cfg: SystemConfig, max_N: int, tol: float = 1e-9, model: str = "first_order"):
    """Group all levels with n_d + n_g <= max_N into energy classes.

    Energies are compared in units of hbar*omega_tilde with relative
    tolerance ``tol``. At beta = 0 with a rational field ratio the
    grouping is exact. ``model`` selects ``"first_order"`` or ``"exact"``
    energies. Returns classes sorted by energy.
    """
    if not tol > 0:
        raise DomainError("tol must be positive")
    if int(max_N) != max_N or not 0 <= max_N <= 64:
        raise DomainError("max_N must be an integer in [0, 64]")
    if model not in ("first_order", "exact"):
        raise DomainError(f"unknown model {model!r}")

    qns = [
        QuantumNumbers.from_circular(nd, s - nd)
        for s in range(int(max_N) + 1)
        for nd in range(s + 1)
    ]
    hw = cfg.units.hbar * cfg.omega_tilde

    exact_r = _rational_field_ratio(cfg) if cfg.beta == 0 else None
    if exact_r is not None:
        buckets: dict[Fraction, list[QuantumNumbers]] = {}
        for q in qns:
            buckets.setdefault(q.N + 1 + exact_r * q.l, []).append(q)
        return [EnergyClass(float(k), tuple(v)) for k, v in sorted(buckets.items())]

    def level_energy(q):
        if model == "exact":
            return energy_exact(q, cfg).energy / hw
        return energy_first_order(q.n_d, q.n_g, cfg) / hw

    pairs = sorted(((level_energy(q), q) for q in qns), key=lambda t: (t[0], t[1]))
    classes: list[EnergyClass] = []
    group = [pairs[0]]
    for e, q in pairs[1:]:
        anchor = group[0][0]
        if abs(e - anchor) <= tol * max(abs(anchor), abs(e)):
            group.append((e, q))
        else:
            classes.append(EnergyClass(group[0][0], tuple(m for _, m in group)))
            group = [(e, q)]
    classes.append(EnergyClass(group[0][0], tuple(m for _, m in group)))
    return classes


def multiplicity_map(classes) -> dict[QuantumNumbers, int]:
    """Per-level multiplicity from :func:`degeneracy_table` output."""
    return {q: c.multiplicity for c in classes for q in c.members}
