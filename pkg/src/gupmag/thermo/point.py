"""One (T, B) evaluation of every thermodynamic quantity, with regime flags."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from ..core import SystemConfig
from ..errors import ConvergenceError, GupMagError, RegimeError
from .magnetism import magnetic_moment, nearest_variant, susceptibility
from .potential import check_closed_regime, grand_potential_closed, grand_potential_direct


@dataclass(frozen=True)
class ThermoPoint:
    """Grand potential, moment and susceptibility at one state point.

    Quantities that could not be evaluated are ``None`` and the reason is
    kept in ``status``.
    """

    T: float
    B: float
    beta: float
    omega0: float
    V: float
    z: float
    phi_direct: float | None = None
    phi_closed: float | None = None
    phi_thermo: float | None = None
    M_closed: float | None = None
    M_numeric: float | None = None
    chi_numeric: float | None = None
    chi_variant: float | None = None
    variant: str = ""
    in_closed_regime: bool = False
    high_T: bool = False
    u_plus: float | None = None
    u_minus: float | None = None
    s_max: int | None = None
    tail_bound: float | None = None
    status: str = "ok"
    extra: dict = field(default_factory=dict)

    def as_row(self) -> dict:
        row = asdict(self)
        row.update(row.pop("extra"))
        return row


def _finite(v):
    return v if v is not None and math.isfinite(v) else None


def evaluate_point(cfg: SystemConfig, direct: bool = True) -> ThermoPoint:
    """Evaluate ``cfg`` on the direct and closed paths.

    Closed forms are computed even outside their regime (the flag tells);
    failures of individual quantities are recorded, not raised.
    """
    u = cfg.units
    values: dict = {}
    problems = []
    try:
        check_closed_regime(cfg)
        values["in_closed_regime"] = True
    except RegimeError:
        values["in_closed_regime"] = False
    values["high_T"] = u.k_B * cfg.T >= 10 * u.hbar * cfg.omega_tilde

    try:
        closed = grand_potential_closed(cfg, check_regime=False)
        values.update(
            phi_closed=closed.final,
            phi_thermo=_finite(closed.thermo),
            u_plus=_finite(closed.u_plus),
            u_minus=_finite(closed.u_minus),
        )
        values["M_closed"] = magnetic_moment(cfg, check_regime=False)
        values["M_numeric"] = magnetic_moment(cfg, "numeric", check_regime=False)
        values["chi_numeric"] = susceptibility(cfg, "numeric", check_regime=False)
    except (GupMagError, ArithmeticError, ValueError) as exc:
        problems.append(f"closed:{type(exc).__name__}")
    try:
        values["variant"], chi_v = nearest_variant(cfg)
        values["chi_variant"] = _finite(chi_v)
    except RegimeError as exc:
        problems.append(f"variant:{type(exc).__name__}")

    if direct:
        try:
            d = grand_potential_direct(cfg)
            values.update(phi_direct=d.value, s_max=d.s_max, tail_bound=d.tail_bound)
        except ConvergenceError as exc:
            problems.append(f"direct:{type(exc).__name__}")

    return ThermoPoint(
        T=cfg.T,
        B=cfg.B,
        beta=cfg.beta,
        omega0=cfg.omega0,
        V=cfg.V,
        z=cfg.z,
        status="ok" if not problems else ";".join(problems),
        **values,
    )
