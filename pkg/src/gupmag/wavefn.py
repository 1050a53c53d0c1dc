"""Jacobi polynomials, momentum-space radial eigenfunctions and the deformed measure.

The radial functions live on p >= 0 with inner product
``int_0^inf f(p) g(p) p dp / (1 + beta p^2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import eval_jacobi, gammaln

from .core import SystemConfig
from .errors import ConvergenceError, DivergentMoment, DomainError, UndeformedError
from .spectrum import LOWER, UPPER, QuantumNumbers, lambda_exponent

JACOBI_MAX_DEGREE = 500


def jacobi(n: int, a: float, b: float, x):
    """P_n^(a,b)(x) with degree and parameter checks; vectorised over ``x``."""
    if int(n) != n or n < 0 or n > JACOBI_MAX_DEGREE:
        raise DomainError(f"degree must be an integer in [0, {JACOBI_MAX_DEGREE}], got {n!r}")
    if not (a > -1 and b > -1):
        raise DomainError(f"Jacobi parameters must exceed -1, got a={a!r}, b={b!r}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + 1e-12):
        raise DomainError("Jacobi argument must lie in [-1, 1]")

    out = eval_jacobi(int(n), a, b, np.clip(x, -1.0, 1.0))
    return out if out.ndim else float(out)


def log_norm_constant(n: int, lam: float, l: int, beta: float) -> float:
    """log of the closed-form normalisation constant of R_nl."""
    al = abs(l)
    return 0.5 * (
        math.log(2 * beta)
        + math.log(2 * n + lam + al)
        + gammaln(n + 1)
        + gammaln(n + lam + al)
        - gammaln(n + lam)
        - gammaln(n + al + 1)
    )


@dataclass(frozen=True)
class RadialWavefunction:
    """Normalised radial eigenfunction R_nl(p) for beta > 0.

    ``norm_scale`` is the squared norm the closed-form constant produced
    under the 2D deformed measure before any rescaling (1.0 unless the
    function was built with ``calibrate=True`` and the quadrature disagreed).
    """

    qn: QuantumNumbers
    lambda_exp: float
    beta: float
    norm_const: float
    norm_scale: float = 1.0

    @property
    def jacobi_params(self) -> tuple[float, int]:
        return self.lambda_exp - 1, abs(self.qn.l)

    def jacobi_argument(self, p):
        y = self.beta * np.square(np.asarray(p, dtype=float))
        return (y - 1) / (y + 1)

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        al = abs(self.qn.l)
        y = self.beta * p * p
        a, b = self.jacobi_params
        poly = jacobi(self.qn.n, a, b, np.where(np.isinf(y), 1.0, (y - 1) / (y + 1)))
        with np.errstate(divide="ignore"):
            log_env = -0.5 * (self.lambda_exp + al) * np.log1p(y) + (0.5 * al * np.log(y) if al else 0.0)
        out = self.norm_const * np.exp(log_env) * poly
        return out if out.ndim else float(out)

    def at_angle(self, t):
        """R as a function of t = arctan(sqrt(beta) p); analytic across t = 0."""
        t = np.asarray(t, dtype=float)
        a, b = self.jacobi_params
        c = np.abs(np.cos(t))
        x = np.clip(-np.cos(2 * t), -1.0, 1.0)
        out = self.norm_const * c**self.lambda_exp * np.sin(t) ** b * jacobi(self.qn.n, a, b, x)
        return out if out.ndim else float(out)


def radial_wavefunction(qn: QuantumNumbers, cfg: SystemConfig, calibrate: bool = False) -> RadialWavefunction:
    """Upper-branch normalised radial momentum eigenfunction for ``cfg``.

    With ``calibrate=True`` the squared norm is measured by quadrature and
    the constant rescaled so the function has unit norm exactly.
    """
    if cfg.beta <= 0:
        raise UndeformedError("radial wavefunction in Jacobi form needs beta > 0")
    lam = lambda_exponent(cfg.epsilon, qn.l, UPPER)
    const = math.exp(log_norm_constant(qn.n, lam, qn.l, cfg.beta))
    wf = RadialWavefunction(qn, lam, cfg.beta, const)
    if calibrate:
        c = deformed_quadrature(lambda p: wf(p) ** 2, cfg.beta).value
        wf = RadialWavefunction(qn, lam, cfg.beta, const / math.sqrt(c), c)
    return wf


class QuadResult(NamedTuple):
    value: float
    error: float


def deformed_quadrature(
    f: Callable,
    beta: float,
    p_max_policy: float | None = None,
    tol: float = 1e-10,
    limit: int = 400,
) -> QuadResult:
    """Adaptive quadrature of int_0^inf f(p) p dp / (1 + beta p^2).

    The half-line is compactified with p = tan(t)/s, s = sqrt(beta) (s = 1
    when beta = 0), and the t-integral is done by adaptive Gauss-Kronrod.
    ``p_max_policy`` optionally truncates the range at a finite p.
    Raises ConvergenceError if the error estimate exceeds ``tol`` (absolute,
    or relative to the value if that is larger) or QUADPACK reports trouble.
    """
    if beta < 0:
        raise DomainError("beta must be >= 0")
    s = math.sqrt(beta) if beta > 0 else 1.0
    t_max = math.pi / 2 if p_max_policy is None else math.atan(s * p_max_policy)

    def integrand(t):
        tt = math.tan(t)
        p = tt / s
        sec2 = 1.0 + tt * tt
        return f(p) * p * sec2 / (s * (1.0 + beta * p * p))

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(integrand, 0.0, t_max, epsabs=tol * 1e-2, epsrel=1e-12, limit=limit)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"deformed quadrature failed: {exc}") from exc
    if not math.isfinite(value) or err > max(tol, tol * abs(value)):
        raise ConvergenceError(f"quadrature error estimate {err:.3g} exceeds tolerance {tol:.3g}")
    return QuadResult(float(value), float(err))


def overlap(n1: int, n2: int, l: int, cfg: SystemConfig, tol: float = 1e-10) -> float:
    """<R_{n1 l} | R_{n2 l}> under the deformed 2D measure."""
    lo, hi = sorted((n1, n2))
    w1 = radial_wavefunction(QuantumNumbers(lo, l), cfg)
    w2 = w1 if hi == lo else radial_wavefunction(QuantumNumbers(hi, l), cfg)
    return deformed_quadrature(lambda p: w1(p) * w2(p), cfg.beta, tol=tol).value


def norm(qn: QuantumNumbers, cfg: SystemConfig, tol: float = 1e-10) -> float:
    """Squared norm of R_nl; 1 for a correctly normalised eigenfunction."""
    return overlap(qn.n, qn.n, qn.l, cfg, tol=tol)


def p2_tail_exponent(lam: float) -> float:
    """Large-p power of the <p^2> integrand p^3 |R|^2 / (1 + beta p^2)."""
    return 1.0 - 2.0 * lam


def p2_expectation(qn: QuantumNumbers, cfg: SystemConfig, branch: str = UPPER, tol: float = 1e-10) -> float:
    """<p^2> = int_0^inf p^3 |R|^2 dp / (1 + beta p^2).

    The tail exponent is checked before any evaluation; a non-integrable
    tail (lambda <= 1, which includes every lower-branch exponent for
    epsilon < 1) raises DivergentMoment.
    """
    if cfg.beta <= 0:
        raise UndeformedError("<p^2> in Jacobi form needs beta > 0")
    lam = lambda_exponent(cfg.epsilon, qn.l, branch)
    if p2_tail_exponent(lam) >= -1.0:
        raise DivergentMoment(
            f"<p^2> diverges: integrand ~ p^{p2_tail_exponent(lam):.4g} for lambda = {lam:.6g} ({branch} branch)"
        )
    if branch == LOWER:  # pragma: no cover - lower branch never has lambda > 1 for eps < 1
        raise DomainError("lower-branch wavefunctions are not normalisable")
    wf = radial_wavefunction(qn, cfg)
    return deformed_quadrature(lambda p: p * p * wf(p) ** 2, cfg.beta, tol=tol).value
