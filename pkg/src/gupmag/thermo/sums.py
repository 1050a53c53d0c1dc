"""Euler-Maclaurin machinery, the S sums and parabolic-cylinder integrals."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate
from scipy.special import erfcx, gamma

from ..core import SystemConfig
from ..errors import ConvergenceError, DomainError, RegimeWarning

# B_2, B_4, B_6
_BERNOULLI = (Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42))


@dataclass(frozen=True)
class EulerMaclaurin:
    """Sum approximation with and without the Bernoulli corrections."""

    with_corrections: float
    without_corrections: float
    corrections: tuple[float, ...]

    @property
    def relative_correction(self) -> float:
        return abs(sum(self.corrections)) / abs(self.with_corrections)


def euler_maclaurin(f, f_derivs_at_0, integral_of_f: float, order: int = 3) -> EulerMaclaurin:
    """sum_{n>=0} f(n) ~ f(0)/2 + int_0^inf f - sum_p B_2p/(2p)! f^(2p-1)(0).

    ``f`` is a callable or the value f(0); ``f_derivs_at_0`` holds the odd
    derivatives f'(0), f'''(0), f^(5)(0) (at least ``order`` of them).
    """
    if not 0 <= order <= len(_BERNOULLI):
        raise DomainError(f"order must be between 0 and {len(_BERNOULLI)}")
    if len(f_derivs_at_0) < order:
        raise DomainError("not enough derivatives for the requested order")
    f0 = f(0.0) if callable(f) else float(f)
    base = 0.5 * f0 + integral_of_f
    corr = tuple(
        -float(_BERNOULLI[p]) / math.factorial(2 * p + 2) * f_derivs_at_0[p] for p in range(order)
    )
    return EulerMaclaurin(base + sum(corr), base, corr)


def _taylor_exp_quadratic(a: float, b: float, m: int) -> list[float]:
    """Taylor coefficients of exp(-a x - b x^2) at 0 up to x^m."""
    h = [0.0, -a, -b]
    c = [1.0]
    for j in range(m):
        # (j+1) c_{j+1} = sum_i (i+1) h_{i+1} c_{j-i}
        s = sum((i + 1) * h[i + 1] * c[j - i] for i in range(min(j, 1) + 1))
        c.append(s / (j + 1))
    return c


def _odd_derivatives(a: float, b: float, power: int, count: int = 3) -> list[float]:
    """f'(0), f'''(0), ... for f(x) = x^power exp(-a x - b x^2)."""
    m = 2 * count
    coeffs = _taylor_exp_quadratic(a, b, m)
    coeffs = [0.0] * power + coeffs
    return [math.factorial(k) * coeffs[k] for k in range(1, m, 2)]


def scaled_cylinder_D(nu: int, u):
    """exp(u^2/4) D_{-nu}(u) for nu in {1, 2} from the complementary error function."""
    u = np.asarray(u, dtype=float)
    d1 = math.sqrt(math.pi / 2) * erfcx(u / math.sqrt(2))
    if nu == 1:
        out = d1
    elif nu == 2:
        # D_{-2} = D_0 - u D_{-1}
        out = 1.0 - u * d1
    else:
        raise DomainError("only nu = 1, 2 are available in closed form")
    return out if out.ndim else float(out)


def gauss_integral(nu: float, p: float, q: float) -> float:
    """Exact value of int_0^inf x^(nu-1) exp(-p x^2 - q x) dx via D_{-nu} (nu in {1, 2}).

    For p = 0 it is Gamma(nu)/q^nu.
    """
    if p < 0 or (p == 0 and q <= 0):
        raise DomainError("integral diverges")
    if p == 0:
        return gamma(nu) / q**nu
    u = q / math.sqrt(2 * p)
    return (2 * p) ** (-nu / 2) * gamma(nu) * scaled_cylinder_D(int(nu), u)


def gauss_integral_D(nu: float, p_coef: float, q_coef: float, tol: float = 1e-12) -> float:
    """int_0^inf x^(nu-1) exp(-p x^2 - q x) dx by adaptive quadrature."""
    if not nu > 0 or not p_coef > 0:
        raise DomainError("need nu > 0 and p > 0")
    scale = 1.0 / (abs(q_coef) + math.sqrt(p_coef))

    def integrand(y):
        x = y * scale
        return x ** (nu - 1) * math.exp(-p_coef * x * x - q_coef * x) * scale

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=tol, limit=400)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(str(exc)) from exc
    if err > 10 * tol * abs(value):
        raise ConvergenceError(f"quadrature error {err:.3g} too large")
    return value


def cylinder_D(nu: float, u: float, scaled: bool = False) -> float:
    """D_{-nu}(u) recovered from the quadrature of the Gaussian integral.

    Uses p = 1/2, q = u so that the integral equals Gamma(nu) exp(u^2/4) D_{-nu}(u).
    With ``scaled=True`` returns exp(u^2/4) D_{-nu}(u).
    """
    value = gauss_integral_D(nu, 0.5, u) / gamma(nu)
    return value if scaled else value * math.exp(-u * u / 4)


def _s_coefficients(cfg: SystemConfig, sign: int):
    u = cfg.units
    x = cfg.beta_tilde * u.hbar * cfg.omega_tilde
    a = x * (1 + cfg.epsilon + sign * cfg.field_ratio)
    b = x * cfg.epsilon
    return a, b


def s_sum_direct(kind: str, sign: int, cfg: SystemConfig, rel_tol: float = 1e-17, cap: int = 50_000_000) -> float:
    """Brute-force sum over n >= 0 of n^k exp(-a n - b n^2), k = 0 (S1) or 1 (S2)."""
    power = _power(kind)
    a, b = _s_coefficients(cfg, _sign(sign))
    total = 0.0
    start = 0
    chunk = 1 << 16
    while start < cap:
        n = np.arange(start, start + chunk, dtype=float)
        terms = n**power * np.exp(-a * n - b * n * n)
        total += math.fsum(terms)
        start += chunk
        if terms[-1] < rel_tol * total and n[-1] * max(a, 1e-300) > 1:
            return total
    raise ConvergenceError("direct S sum did not converge within the term cap")


def _power(kind: str) -> int:
    if kind == "S1":
        return 0
    if kind == "S2":
        return 1
    raise DomainError(f"kind must be 'S1' or 'S2', got {kind!r}")


def _sign(sign) -> int:
    if sign in (1, "+"):
        return 1
    if sign in (-1, "-"):
        return -1
    raise DomainError(f"sign must be +1/-1, got {sign!r}")


def s_sums(kind: str, sign, cfg: SystemConfig, order: int = 3) -> EulerMaclaurin:
    """S1+/- or S2+/- through Euler-Maclaurin with the exact Gaussian integral.

    Emits RegimeWarning when k T < 10 hbar omega_tilde.
    """
    power = _power(kind)
    a, b = _s_coefficients(cfg, _sign(sign))
    if cfg.units.k_B * cfg.T < 10 * cfg.units.hbar * cfg.omega_tilde:
        warnings.warn("S sums evaluated outside the high-temperature window", RegimeWarning, stacklevel=2)
    integral = gauss_integral(power + 1, b, a)
    f0 = 1.0 if power == 0 else 0.0
    return euler_maclaurin(f0, _odd_derivatives(a, b, power), integral, order)
