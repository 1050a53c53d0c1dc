"""Magnetic moment, susceptibility, critical fields and the maximal temperature."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ..core import NATURAL, SystemConfig, UnitSystem
from ..errors import DomainError, RegimeError, RootNotBracketed
from .potential import check_closed_regime, closed_prefactor, grand_potential_closed, grand_potential_direct

REL_STEP = 1e-4


def closed_bracket_d1(omega: float, omega0: float, x: float) -> float:
    """dF/domega of :func:`closed_bracket`."""
    w2, a2 = omega * omega, omega0 * omega0
    wt = math.sqrt(w2 + a2)
    d = 3 * w2 + 4 * a2
    num = (15 * x + 9) * w2 * w2 + (6 * x + 18) * w2 * a2 + 8 * (1 - x) * a2 * a2
    return -4 * omega * num / (wt * d**3)


def closed_bracket_d2(omega: float, omega0: float, x: float) -> float:
    """d^2F/domega^2 of :func:`closed_bracket`."""
    w2, a2 = omega * omega, omega0 * omega0
    d = 3 * w2 + 4 * a2
    num = (
        (90 * x + 54) * w2**4
        + (99 - 123 * x) * w2**3 * a2
        - (438 * x + 18) * w2**2 * a2**2
        - (192 * x + 96) * w2 * a2**3
        - 32 * (1 - x) * a2**4
    )
    return 4 * num / ((w2 + a2) ** 1.5 * d**4)


def _central(fun, B: float, h: float) -> float:
    """Central difference with one Richardson level."""
    d1 = (fun(B + h) - fun(B - h)) / (2 * h)
    d2 = (fun(B + h / 2) - fun(B - h / 2)) / h
    return (4 * d2 - d1) / 3


def field_step(cfg: SystemConfig, rel_step: float = REL_STEP) -> float:
    return rel_step * max(abs(cfg.B), cfg.omega0 / cfg.units.q_over_2mc)


def _phi(cfg: SystemConfig, source: str, check_regime: bool) -> float:
    if source == "closed":
        return grand_potential_closed(cfg, check_regime=check_regime).final
    if source == "thermo":
        return grand_potential_closed(cfg, check_regime=check_regime).thermo
    if source == "direct":
        return grand_potential_direct(cfg, tol=1e-13).value
    raise DomainError(f"unknown potential source {source!r}")


def magnetic_moment(
    cfg: SystemConfig,
    mode: str = "closed",
    source: str = "closed",
    check_regime: bool = True,
    rel_step: float = REL_STEP,
) -> float:
    """M = -dPhi/dB.

    ``mode="closed"`` evaluates the derivative of the simplified potential
    analytically. ``mode="numeric"`` central-differences the potential named
    by ``source`` (``closed``, ``thermo`` or ``direct``) in B.
    """
    if mode == "closed":
        if check_regime:
            check_closed_regime(cfg)
        q = cfg.units.q_over_2mc
        return closed_prefactor(cfg) * q * closed_bracket_d1(cfg.omega, cfg.omega0, cfg.thermal_deformation)
    if mode != "numeric":
        raise DomainError(f"mode must be 'closed' or 'numeric', got {mode!r}")
    if check_regime and source != "direct":
        check_closed_regime(cfg)
    return -_central(lambda b: _phi(cfg.with_(B=b), source, False), cfg.B, field_step(cfg, rel_step))


def susceptibility(
    cfg: SystemConfig,
    mode: str = "closed",
    source: str = "closed",
    check_regime: bool = True,
    rel_step: float = REL_STEP,
) -> float:
    """chi = dM/dB.

    ``mode="closed"`` is the analytic second derivative of the simplified
    potential; ``mode="numeric"`` differentiates :func:`magnetic_moment`
    (closed form for ``source="closed"``, numeric otherwise).
    """
    if mode == "closed":
        if check_regime:
            check_closed_regime(cfg)
        q = cfg.units.q_over_2mc
        return closed_prefactor(cfg) * q * q * closed_bracket_d2(cfg.omega, cfg.omega0, cfg.thermal_deformation)
    if mode != "numeric":
        raise DomainError(f"mode must be 'closed' or 'numeric', got {mode!r}")
    if check_regime and source != "direct":
        check_closed_regime(cfg)
    inner = "closed" if source == "closed" else "numeric"

    def moment(b):
        return magnetic_moment(cfg.with_(B=b), inner, source, False, rel_step)

    h = field_step(cfg, rel_step) if source == "closed" else field_step(cfg, 100 * rel_step)
    return _central(moment, cfg.B, h)


# closed-form limits -------------------------------------------------------


def _chi_scale(cfg: SystemConfig, freq: float) -> float:
    """V mu_B^2 / (beta_tilde^2 hbar^3 lambda^3 freq^3)."""
    u = cfg.units
    return cfg.V * u.bohr_magneton**2 / (cfg.beta_tilde**2 * u.hbar**3 * cfg.lambda_th**3 * freq**3)


def _require_weak(cfg: SystemConfig, name: str) -> None:
    if not abs(cfg.omega) < cfg.omega0:
        raise RegimeError(f"{name} needs omega < omega0 (omega/omega0 = {abs(cfg.omega) / cfg.omega0:.4g})")


def susceptibility_weak(cfg: SystemConfig) -> float:
    """Weak-field Landau diamagnetism with its deformation correction."""
    _require_weak(cfg, "weak-field susceptibility")
    x = cfg.thermal_deformation
    ratio2 = (cfg.omega / cfg.omega0) ** 2
    return -_chi_scale(cfg, cfg.omega0) * (1 - x * (1 - 9 * ratio2))


def susceptibility_zero_field(cfg: SystemConfig) -> float:
    """Zero-field value -scale * (1 - m beta k T)."""
    _require_weak(cfg, "zero-field susceptibility")
    return -_chi_scale(cfg, cfg.omega0) * (1 - cfg.thermal_deformation)


def susceptibility_beta0(cfg: SystemConfig) -> float:
    """Zero-field value with the minimal length switched off."""
    _require_weak(cfg, "undeformed susceptibility")
    return -_chi_scale(cfg, cfg.omega0)


def susceptibility_strong(cfg: SystemConfig) -> float:
    """Strong-field orbital paramagnetism."""
    w = abs(cfg.omega)
    if not w > cfg.omega0:
        raise RegimeError(f"strong-field susceptibility needs omega > omega0 (omega/omega0 = {w / cfg.omega0:.4g})")
    return 16 / 3 * _chi_scale(cfg, w) * (1 + 5 / 3 * cfg.thermal_deformation)


def nearest_variant(cfg: SystemConfig) -> tuple[str, float]:
    """The closed-form susceptibility whose regime is closest to ``cfg``."""
    w = abs(cfg.omega)
    if w >= cfg.omega0:
        return "strong", susceptibility_strong(cfg) if w > cfg.omega0 else math.nan
    if cfg.beta == 0:
        return "beta0", susceptibility_beta0(cfg)
    if w == 0:
        return "zero_field", susceptibility_zero_field(cfg)
    return "weak", susceptibility_weak(cfg)


# critical fields ----------------------------------------------------------


@dataclass(frozen=True)
class CriticalFields:
    B1: float
    B2: float
    roots: tuple[float, ...]
    scan: tuple[tuple[float, float], ...]


def chi_difference(cfg: SystemConfig, B: float, mode: str = "closed") -> float:
    """chi_beta(B) - chi_0(B) at the config's temperature, volume and trap."""
    c = cfg.with_(B=B)
    base = c.with_(beta=0.0)
    return susceptibility(c, mode, check_regime=False) - susceptibility(base, mode, check_regime=False)


def critical_fields(
    cfg: SystemConfig,
    B_hi: float | None = None,
    n_scan: int = 400,
    mode: str = "closed",
    xtol: float = 1e-12,
) -> CriticalFields:
    """Fields where the deformed and undeformed susceptibilities coincide.

    Scans chi_beta - chi_0 on a uniform grid over (0, B_hi] (default
    10 omega0), brackets the sign changes and refines each with Brent's
    method. Returns the two smallest roots.
    """
    if cfg.beta <= 0:
        raise DomainError("critical fields compare a beta > 0 config with beta = 0")
    if n_scan < 4:
        raise DomainError("n_scan must be at least 4")
    B_hi = 10 * cfg.omega0 / cfg.units.q_over_2mc if B_hi is None else B_hi
    if not B_hi > 0:
        raise DomainError("B_hi must be positive")
    grid = np.linspace(B_hi / n_scan, B_hi, n_scan)
    values = [chi_difference(cfg, float(b), mode) for b in grid]
    scan = tuple(zip(map(float, grid), values))
    roots = []
    for (b0, f0), (b1, f1) in zip(scan[:-1], scan[1:]):
        if f0 == 0.0:
            roots.append(b0)
        elif f0 * f1 < 0:
            roots.append(optimize.brentq(lambda b: chi_difference(cfg, b, mode), b0, b1, xtol=xtol, rtol=1e-15))
    if len(roots) < 2:
        raise RootNotBracketed(f"found {len(roots)} sign change(s) on (0, {B_hi:g}]", scan)
    return CriticalFields(roots[0], roots[1], tuple(roots), scan)


# thermal scales -----------------------------------------------------------


def max_temperature(dx_min: float, units: UnitSystem = NATURAL) -> float:
    """T_max = 2 hbar^2 / (m k_B dx_min^2)."""
    if not dx_min > 0:
        raise DomainError("dx_min must be positive")
    return 2 * units.hbar**2 / (units.mass * units.k_B * dx_min**2)


def lambda_min(dx_min: float) -> float:
    """Smallest thermal wavelength, sqrt(pi) dx_min."""
    if not dx_min > 0:
        raise DomainError("dx_min must be positive")
    return math.sqrt(math.pi) * dx_min
