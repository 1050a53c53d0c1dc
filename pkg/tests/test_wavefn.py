import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gupmag.core import make_config
from gupmag.errors import ConvergenceError, DivergentMoment, DomainError, UndeformedError
from gupmag.spectrum import LOWER, QuantumNumbers
from gupmag.wavefn import (
    deformed_quadrature,
    jacobi,
    norm,
    overlap,
    p2_expectation,
    p2_tail_exponent,
    radial_wavefunction,
)

from oracles import jacobi_mp


def cfg_eps(eps, B=0.0):
    return make_config(omega0=1.0, B=B, T=1.0, beta=eps / math.hypot(B, 1.0))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 40), st.floats(-0.9, 30), st.integers(0, 6), st.floats(-1, 1))
def test_jacobi_matches_mpmath(n, a, b, x):
    ref = jacobi_mp(n, a, b, x)
    got = jacobi(n, a, b, x)
    scale = max(1.0, abs(ref), abs(jacobi_mp(n, a, b, 1.0)))
    assert abs(got - ref) <= 1e-11 * scale


def test_jacobi_vectorised_and_low_degree():
    x = np.linspace(-1, 1, 7)
    assert np.all(jacobi(0, 2.0, 1.0, x) == 1.0)
    assert np.allclose(jacobi(1, 2.0, 1.0, x), 0.5 * (2 * (2 + 1) + (2 + 1 + 2) * (x - 1)))
    assert isinstance(jacobi(3, 0.5, 0.5, 0.3), float)


@pytest.mark.parametrize(
    "args", [(-1, 0, 0, 0.0), (2.5, 0, 0, 0.0), (501, 0, 0, 0.0), (2, -1.0, 0, 0.0), (2, 0, 0, 1.5)]
)
def test_jacobi_domain(args):
    with pytest.raises(DomainError):
        jacobi(*args)


def test_quadrature_known_integral():
    beta = 0.3
    # int_0^inf p dp / (1 + beta p^2)^3 = 1/(4 beta)
    r = deformed_quadrature(lambda p: 1.0 / (1 + beta * p * p) ** 2, beta)
    assert r.value == pytest.approx(1 / (4 * beta), rel=1e-12)
    # truncated range: int_0^1 p dp / (1 + beta p^2) = ln(1 + beta)/(2 beta)
    r = deformed_quadrature(lambda p: 1.0, beta, p_max_policy=1.0)
    assert r.value == pytest.approx(math.log1p(beta) / (2 * beta), rel=1e-12)
    # beta = 0: int_0^inf p e^{-p^2} dp = 1/2
    assert deformed_quadrature(lambda p: math.exp(-p * p), 0.0).value == pytest.approx(0.5, rel=1e-12)


def test_quadrature_divergent_integrand_raises():
    with pytest.raises(ConvergenceError):
        deformed_quadrature(lambda p: 1.0, 1.0)
    with pytest.raises(DomainError):
        deformed_quadrature(lambda p: 1.0, -1.0)


@pytest.mark.parametrize("eps", [0.05, 0.2, 0.5, 0.9])
@pytest.mark.parametrize("n,l", [(0, 0), (1, 0), (2, -1), (3, 2), (5, 3)])
def test_unit_norm(eps, n, l):
    assert norm(QuantumNumbers(n, l), cfg_eps(eps)) == pytest.approx(1.0, abs=1e-10)


def test_calibration_is_identity_for_closed_constant():
    cfg = cfg_eps(0.3)
    wf = radial_wavefunction(QuantumNumbers(2, 1), cfg, calibrate=True)
    assert wf.norm_scale == pytest.approx(1.0, abs=1e-11)


@pytest.mark.parametrize("l", [0, 1, -2])
def test_orthogonality_small_gram(l):
    cfg = cfg_eps(0.2, B=0.4)
    gram = np.array([[overlap(i, j, l, cfg) for j in range(5)] for i in range(5)])
    assert np.max(np.abs(gram - np.eye(5))) < 1e-9


def test_angle_form_matches_momentum_form():
    cfg = cfg_eps(0.3)
    wf = radial_wavefunction(QuantumNumbers(3, 2), cfg)
    p = np.linspace(0.01, 40, 50)
    t = np.arctan(math.sqrt(cfg.beta) * p)
    assert np.allclose(wf(p), wf.at_angle(t), rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("eps,l", [(0.2, 0), (0.5, 2), (0.9, 1)])
def test_tail_power(eps, l):
    cfg = cfg_eps(eps)
    wf = radial_wavefunction(QuantumNumbers(2, l), cfg)
    p = np.geomspace(1e4, 1e6, 30) / math.sqrt(cfg.beta)
    slope = np.polyfit(np.log(p), np.log(np.abs(wf(p))), 1)[0]
    assert slope == pytest.approx(-wf.lambda_exp, abs=0.01)


def test_undeformed_rejected():
    cfg = make_config(omega0=1, T=1)
    with pytest.raises(UndeformedError):
        radial_wavefunction(QuantumNumbers(0, 0), cfg)
    with pytest.raises(UndeformedError):
        p2_expectation(QuantumNumbers(0, 0), cfg)


@pytest.mark.parametrize("eps", [0.05, 0.3, 0.7])
def test_ground_state_p2_closed_form(eps):
    cfg = cfg_eps(eps)
    lam = radial_wavefunction(QuantumNumbers(0, 0), cfg).lambda_exp
    assert p2_expectation(QuantumNumbers(0, 0), cfg) == pytest.approx(1 / (cfg.beta * (lam - 1)), rel=1e-9)


def test_p2_lower_branch_diverges():
    cfg = cfg_eps(0.4)
    with pytest.raises(DivergentMoment):
        p2_expectation(QuantumNumbers(1, 1), cfg, branch=LOWER)
    assert p2_tail_exponent(1.0) == -1.0
