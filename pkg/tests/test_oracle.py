import math

import numpy as np
import pytest

from gupmag.core import make_config
from gupmag.errors import DomainError, GridTooCoarse, UndeformedError
from gupmag.oracle import (
    RadialGrid,
    count_levels_below,
    energy_from_reduced,
    fd_eigensolve,
    reduced_eigenvalue,
    residual_check,
)
from gupmag.spectrum import QuantumNumbers, energy_exact


def cfg_eps(eps, B=0.0):
    return make_config(omega0=1.0, B=B, T=1.0, beta=eps / math.hypot(B, 1.0))


def test_grid_nodes():
    g = RadialGrid(0.25, 1024)
    assert np.all(np.diff(g.xi) > 0)
    assert g.xi[0] > 0 and g.xi[-1] < g.xi_max
    assert g.xi_max == pytest.approx(math.pi)
    assert np.allclose(g.p, np.tan(0.5 * g.xi) / 0.5)
    assert g.refined().n_points == 2048
    with pytest.raises(UndeformedError):
        RadialGrid(0.0)


def test_reduced_map_round_trip():
    cfg = cfg_eps(0.2, B=0.7)
    for q in (QuantumNumbers(0, 0), QuantumNumbers(3, -2), QuantumNumbers(1, 4)):
        mu = reduced_eigenvalue(q, cfg, pz=0.3)
        assert energy_from_reduced(mu, q.l, cfg, pz=0.3) == pytest.approx(energy_exact(q, cfg, 0.3).energy, rel=1e-14)


def test_reduced_map_undeformed_limit():
    # eps * mu -> 2 (N + 1) as eps -> 0 at omega = 0
    cfg = cfg_eps(1e-7)
    q = QuantumNumbers(2, 1)
    assert cfg.epsilon * reduced_eigenvalue(q, cfg) == pytest.approx(2 * (q.N + 1), rel=1e-5)


@pytest.mark.parametrize("n,l,order", [(1, 1, 3.0), (2, -2, 4.0)])
def test_residual_convergence_order(n, l, order):
    # fourth-order stencils; the tan(t) coefficient costs one order in the last cells
    # before pi/2 unless the function is flat enough there (larger lambda)
    cfg = cfg_eps(0.1)
    q = QuantumNumbers(n, l)
    r1 = residual_check(q, cfg, RadialGrid(cfg.beta, 512), tol=1.0)
    r2 = residual_check(q, cfg, RadialGrid(cfg.beta, 1024), tol=1.0)
    assert math.log2(r1.max_residual / r2.max_residual) == pytest.approx(order, abs=0.2)
    assert residual_check(q, cfg, RadialGrid(cfg.beta, 4096)).passed


def test_residual_order_limited_by_endpoint_regularity():
    # cos(t)^lambda with lambda ~ 4.5 is only a few times differentiable at t = pi/2
    cfg = cfg_eps(0.3)
    rep = residual_check(QuantumNumbers(0, 0), cfg, RadialGrid(cfg.beta, 1024), tol=1e-6)
    assert rep.passed
    assert 2.5 < rep.observed_order < 4.0


def test_perturbed_energy_plateaus():
    cfg = cfg_eps(0.3)
    q = QuantumNumbers(1, 1)
    reps = [residual_check(q, cfg, RadialGrid(cfg.beta, m), perturb=0.01) for m in (2048, 4096)]
    for r in reps:
        assert not r.passed
        assert r.max_residual == pytest.approx(0.01, rel=1e-3)


def test_grid_too_coarse():
    cfg = cfg_eps(0.3)
    with pytest.raises(GridTooCoarse):
        residual_check(QuantumNumbers(0, 0), cfg, RadialGrid(cfg.beta, 256))
    with pytest.raises(GridTooCoarse):
        residual_check(QuantumNumbers(1, 1), cfg, RadialGrid(cfg.beta, 512), tol=1e-9)


def test_fd_eigensolve_against_analytic():
    cfg = cfg_eps(0.1, B=0.5)
    res = fd_eigensolve(1, cfg, k=4)
    exact = np.array([reduced_eigenvalue(QuantumNumbers(n, 1), cfg) for n in range(4)])
    assert np.all(np.diff(res.eigenvalues) > 0)
    assert np.max(np.abs(res.eigenvalues / exact - 1)) < 1e-8
    assert res.order_estimate == pytest.approx(2.0, abs=0.2)
    energies = res.energies(cfg)
    assert energies[0] == pytest.approx(energy_exact(QuantumNumbers(0, 1), cfg).energy, rel=1e-8)


def test_fd_eigenvectors_have_the_right_nodes():
    cfg = cfg_eps(0.2)
    res = fd_eigensolve(0, cfg, k=3, vectors=True)
    for n in range(3):
        v = res.eigenvectors[:, n]
        v = v[np.abs(v) > 1e-8 * np.max(np.abs(v))]
        assert np.count_nonzero(np.diff(np.sign(v))) == n


def test_fd_domain():
    cfg = cfg_eps(0.2)
    with pytest.raises(DomainError):
        fd_eigensolve(0, cfg, k=13)
    with pytest.raises(DomainError):
        fd_eigensolve(0, cfg, grid=RadialGrid(cfg.beta, 512))


def test_count_levels_below():
    cfg = cfg_eps(0.2)
    mus = [reduced_eigenvalue(QuantumNumbers(n, 2), cfg) for n in range(5)]
    assert count_levels_below(2, cfg, 0.5 * (mus[2] + mus[3])) == 3
