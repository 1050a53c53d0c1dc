"""State density and the grand potential, by direct summation and in closed form."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import erfcx

from ..core import SystemConfig
from ..errors import ConvergenceError, DomainError, RegimeError, TruncationError
from .sums import scaled_cylinder_D

MAX_TERMS = 100_000


def momentum_shell(n_d: int, n_g: int, cfg: SystemConfig) -> float:
    """Transverse momentum p(n_d, n_g) at which the level (n_d, n_g) sits."""
    if n_d < 0 or n_g < 0:
        raise DomainError("circular quantum numbers must be >= 0")
    u = cfg.units
    eps = cfg.epsilon
    bracket = (1 + eps) * (n_d + n_g) + cfg.field_ratio * (n_d - n_g) + eps * (n_d * n_d + n_g * n_g)
    if bracket < 0:
        raise DomainError(f"negative shell bracket {bracket:.6g} at (n_d, n_g) = ({n_d}, {n_g})")
    return math.sqrt(2 * u.mass * u.hbar * cfg.omega_tilde * bracket)


def states_density_shell(n_d: int, n_g: int, cfg: SystemConfig) -> float:
    """Exact annulus count between the shells (n_d, n_g) and (n_d+1, n_g+1)."""
    u = cfg.units
    area = cfg.V ** (2 / 3)
    lo = momentum_shell(n_d, n_g, cfg) ** 2
    hi = momentum_shell(n_d + 1, n_g + 1, cfg) ** 2
    if cfg.beta == 0:
        return area * (hi - lo) / (4 * math.pi * u.hbar**2)
    return area / (4 * math.pi * cfg.beta * u.hbar**2) * math.log1p(cfg.beta * (hi - lo) / (1 + cfg.beta * lo))


def states_density(gamma_q, cfg: SystemConfig):
    """One-particle state density g(gamma); exact beta -> 0 limit at beta = 0.

    Accepts a scalar or an array of gamma values.
    """
    u = cfg.units
    area = cfg.V ** (2 / 3)
    g = np.asarray(gamma_q, dtype=float)
    if np.any(g < 0):
        raise DomainError("gamma must be >= 0")
    if cfg.beta == 0:
        out = np.full_like(g, u.mass * cfg.omega_tilde * area / (math.pi * u.hbar))
    else:
        eps = cfg.epsilon
        out = area / (4 * math.pi * cfg.beta * u.hbar**2) * np.log1p(4 * eps * (1 + eps * (2 * g + 1)))
    return out if out.ndim else float(out)


def pz_weight_integral(cfg: SystemConfig, tol: float = 1e-13) -> tuple[float, float]:
    """int dp_z exp(-beta_tilde p_z^2 / 2m) / (1 + beta p_z^2) by quadrature."""
    a = cfg.beta_tilde / (2 * cfg.units.mass)
    beta = cfg.beta
    s = math.sqrt(1.0 / a)
    value, err = integrate.quad(
        lambda y: math.exp(-y * y) / (1 + beta * s * s * y * y) * s,
        -np.inf,
        np.inf,
        epsabs=0.0,
        epsrel=tol,
        limit=200,
    )
    return value, err


@dataclass(frozen=True)
class DirectPotential:
    value: float
    s_max: int
    tail_bound: float
    pz_integral: float
    pz_error: float
    mode: str


def _majorant_terms(cfg: SystemConfig, s: np.ndarray) -> np.ndarray:
    # g(gamma) <= (m omega_tilde V^(2/3) / (pi hbar)) (1 + eps (s+1)); (s+1) pairs per shell;
    # exp(-bt E) <= exp(-bt hw [(1+eps) + (1+eps-r) s + eps s^2 / 2])
    u = cfg.units
    x = cfg.beta_tilde * u.hbar * cfg.omega_tilde
    eps = cfg.epsilon
    lin = 1 + eps - abs(cfg.field_ratio)
    g_lin = u.mass * cfg.omega_tilde * cfg.V ** (2 / 3) / (math.pi * u.hbar) * (1 + eps * (s + 1))
    return (s + 1) * g_lin * cfg.z * np.exp(-x * (1 + eps + lin * s + 0.5 * eps * s * s))


def _tail_bounds(cfg: SystemConfig) -> np.ndarray:
    """tail[S] bounds the sum over shells s > S of the Maxwell-Boltzmann summand."""
    x = cfg.beta_tilde * cfg.units.hbar * cfg.omega_tilde
    lin = 1 + cfg.epsilon - abs(cfg.field_ratio)
    span = int(min(4 * MAX_TERMS, math.ceil(760.0 / (x * lin)) + 10))
    s = np.arange(span + 1, dtype=float)
    m = _majorant_terms(cfg, s)
    tail = np.cumsum(m[::-1])[::-1]
    return np.append(tail[1:], 0.0)


def _transverse_sum(cfg: SystemConfig, s_max: int, pz_nodes=None, pz_weights=None) -> float:
    """Sum of g(gamma) * f(E_perp) over the triangle n_d + n_g <= s_max."""
    u = cfg.units
    hw = u.hbar * cfg.omega_tilde
    eps, r = cfg.epsilon, cfg.field_ratio
    bt = cfg.beta_tilde
    row_sums = []
    ng_all = np.arange(s_max + 1, dtype=float)
    for nd in range(s_max + 1):
        ng = ng_all[: s_max + 1 - nd]
        e_perp = hw * ((1 + eps) * (1 + nd + ng) + r * (nd - ng) + eps * (nd * nd + ng * ng))
        g = states_density((nd + ng) / 2, cfg)
        if pz_nodes is None:
            row_sums.append(float(np.sum(g * cfg.z * np.exp(-bt * e_perp))))
        else:
            kin = bt * pz_nodes**2 / (2 * u.mass)
            occ = np.log1p(cfg.z * np.exp(-bt * e_perp[None, :] - kin[:, None]))
            row_sums.append(float(pz_weights @ (occ @ g)))
    return math.fsum(row_sums)


def grand_potential_direct(
    cfg: SystemConfig,
    mode: str = "mb",
    tol: float = 1e-8,
    max_terms: int = MAX_TERMS,
    pz_nodes: int = 96,
) -> DirectPotential:
    """Grand potential by explicit summation over (n_d, n_g) and p_z quadrature.

    Energies are the first-order levels and the state density keeps its
    logarithm exactly. ``mode="mb"`` replaces ln(1 + z e^{-bE}) by z e^{-bE}
    (p_z then factorises); ``mode="exact"`` keeps the logarithm and integrates
    p_z on a fixed Gauss-Legendre rule in the compactified variable.
    Shells are added until a majorant of the remaining tail is below ``tol``
    times the partial sum.
    """
    if mode not in ("mb", "exact"):
        raise DomainError(f"mode must be 'mb' or 'exact', got {mode!r}")
    u = cfg.units
    tails = _tail_bounds(cfg)
    pz_int, pz_err = pz_weight_integral(cfg)

    nodes = weights = None
    if mode == "exact":
        a = cfg.beta_tilde / (2 * u.mass)
        t, w = np.polynomial.legendre.leggauss(pz_nodes)
        t = 0.5 * math.pi / 2 * (t + 1)  # (0, pi/2)
        w = w * math.pi / 4
        scale = 1 / math.sqrt(a)
        pz = np.tan(t) * scale
        jac = scale / np.cos(t) ** 2
        nodes = pz
        weights = 2 * w * jac / (1 + cfg.beta * pz * pz)

    guess = tails[0] + _majorant_terms(cfg, np.zeros(1))[0]
    for _ in range(8):
        candidates = np.nonzero(tails <= tol * guess)[0]
        if len(candidates) == 0 or candidates[0] > max_terms:
            raise TruncationError(f"tail bound not below {tol:g} within {max_terms} shells")
        s_max = int(candidates[0])
        partial = _transverse_sum(cfg, s_max, nodes, weights)
        bound = tails[s_max] * (pz_int if mode == "exact" else 1.0)
        if bound <= tol * abs(partial) * (pz_int if mode == "exact" else 1.0):
            break
        guess = abs(partial)
    else:  # pragma: no cover
        raise TruncationError("could not settle the shell cutoff")

    pref = -cfg.V ** (1 / 3) / (2 * math.pi * cfg.beta_tilde * u.hbar)
    if mode == "mb":
        value = pref * pz_int * partial
        tail_abs = abs(pref) * pz_int * tails[s_max]
    else:
        value = pref * partial
        tail_abs = abs(pref) * pz_int * tails[s_max]
    return DirectPotential(float(value), s_max, float(tail_abs), pz_int, pz_err, mode)


@dataclass(frozen=True)
class ClosedPotential:
    """High-temperature closed forms of the grand potential.

    ``final`` is the fully simplified asymptotic form; ``thermo`` is the
    intermediate form that keeps exp(y) erfc(sqrt(y)) and the exact
    parabolic-cylinder factors.
    """

    final: float
    thermo: float
    u_plus: float
    u_minus: float
    erf_factor: float
    A1: tuple[float, float]
    A2: tuple[float, float]


def u_parameters(cfg: SystemConfig) -> tuple[float, float]:
    """u+/- = (1 +/- omega/2omega_tilde)/sqrt(2 pi) * lambda_th/dx_min."""
    ratio = cfg.length_ratio
    r = cfg.field_ratio
    return (1 + r) / math.sqrt(2 * math.pi) * ratio, (1 - r) / math.sqrt(2 * math.pi) * ratio


def u_parameters_alt(cfg: SystemConfig) -> tuple[float, float]:
    """Same u+/- written as (1 +/- r)/sqrt(2) * sqrt(beta_tilde/(m beta))."""
    if cfg.beta == 0:
        return math.inf, math.inf
    root = math.sqrt(cfg.beta_tilde / (cfg.units.mass * cfg.beta))
    r = cfg.field_ratio
    return (1 + r) / math.sqrt(2) * root, (1 - r) / math.sqrt(2) * root


def closed_bracket(omega: float, omega0: float, x: float) -> float:
    """F(omega) = (1-x)/(w~ (1 - r^2)) + (2x/w~)/(1 - r^2)^2, r = omega/(2 w~)."""
    wt = math.hypot(omega, omega0)
    one_minus = 1.0 - (omega / (2 * wt)) ** 2
    return (1 - x) / (wt * one_minus) + (2 * x / wt) / one_minus**2


def closed_prefactor(cfg: SystemConfig) -> float:
    """2V/(beta_tilde^2 hbar lambda^3), the scale of the simplified potential.

    The power of beta_tilde is the one that keeps Phi an energy.
    """
    return 2 * cfg.V / (cfg.beta_tilde**2 * cfg.units.hbar * cfg.lambda_th**3)


def check_closed_regime(cfg: SystemConfig, u_min: float = 3.0) -> None:
    x = cfg.thermal_deformation
    if x >= 1:
        raise RegimeError(f"m beta k T = {x:.4g} >= 1")
    if cfg.beta > 0:
        up, um = u_parameters(cfg)
        if min(up, um) < u_min:
            raise RegimeError(f"u- = {um:.4g} below {u_min:g}; asymptotic expansion not trusted")


def grand_potential_closed(cfg: SystemConfig, check_regime: bool = True, u_min: float = 3.0) -> ClosedPotential:
    """High-temperature grand potential in closed form (Maxwell-Boltzmann, z = 1).

    RegimeError when m beta k T >= 1 or u+/- < ``u_min`` unless
    ``check_regime`` is false.
    """
    if check_regime:
        check_closed_regime(cfg, u_min)
    u = cfg.units
    hw = u.hbar * cfg.omega_tilde
    bt = cfg.beta_tilde
    m = u.mass
    x = cfg.thermal_deformation
    r = cfg.field_ratio
    eps = cfg.epsilon

    final = -closed_prefactor(cfg) * closed_bracket(cfg.omega, cfg.omega0, x)

    up, um = u_parameters(cfg)
    if cfg.beta > 0:
        y = bt / (2 * m * cfg.beta)
        erf_factor = float(erfcx(math.sqrt(y)))
        pref = -4 * m * cfg.omega_tilde * cfg.V / (8 * math.pi * math.sqrt(cfg.beta) * bt * u.hbar**2)
        A1 = tuple(scaled_cylinder_D(1, uu) / (hw * math.sqrt(2 * bt * cfg.beta * m)) for uu in (up, um))
        A2 = tuple(scaled_cylinder_D(2, uu) / (2 * hw**2 * bt * cfg.beta * m) for uu in (up, um))
    else:
        # beta -> 0: sqrt(beta) erfcx(sqrt(y)) -> sqrt(2 m / (pi bt)), D factors -> leading powers
        erf_factor = math.nan
        pref = -4 * m * cfg.omega_tilde * cfg.V / (8 * math.pi * bt * u.hbar**2) * math.sqrt(2 * m / (math.pi * bt))
        A1 = tuple(1 / (hw * bt * (1 + s * r)) for s in (1, -1))
        A2 = tuple(1 / (hw * bt * (1 + s * r)) ** 2 for s in (1, -1))
    core = (0.5 + A1[0]) * (0.5 + A1[1]) + eps * (A2[0] * (0.5 + A1[1]) + A2[1] * (0.5 + A1[0]))
    thermo = pref * math.exp(-bt * hw) * (erf_factor if cfg.beta > 0 else 1.0) * core
    return ClosedPotential(final, thermo, up, um, erf_factor, A1, A2)
