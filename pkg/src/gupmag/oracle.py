"""Independent numerical checks of the analytic spectrum and eigenfunctions.

Both checks work with the radial equation written in the compactified
angle t = sqrt(beta) xi = arctan(sqrt(beta) p), t in (0, pi/2):

    R'' + (cot t + tan t) R' - l^2 (cot t + tan t)^2 R - tan(t)^2 / eps^2 R = -mu R

with eps = m hbar omega_tilde beta. The reduced eigenvalue is

    mu = (2 E / (hbar omega_tilde) - (omega/omega_tilde) l - pz^2/(m hbar omega_tilde)) / eps,

which is the map that sends the beta -> 0, omega = 0 limit onto the 2D
oscillator values eps * mu = 2(N + 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .core import SystemConfig
from .errors import ConvergenceError, DomainError, GridTooCoarse, NonRealEigenvalue, UndeformedError
from .spectrum import QuantumNumbers, energy_exact
from .wavefn import radial_wavefunction

DEFAULT_POINTS = 2048


@dataclass(frozen=True)
class RadialGrid:
    """Cell-centred uniform grid on xi in (0, pi/(2 sqrt(beta)))."""

    beta: float
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if self.beta <= 0:
            raise UndeformedError("the compactified grid needs beta > 0")
        if self.n_points < 8:
            raise DomainError("grid needs at least 8 points")

    @property
    def xi_max(self) -> float:
        return math.pi / (2 * math.sqrt(self.beta))

    @property
    def h(self) -> float:
        """Spacing in the angle t = sqrt(beta) xi."""
        return (math.pi / 2) / self.n_points

    @property
    def t(self) -> np.ndarray:
        return (np.arange(self.n_points) + 0.5) * self.h

    @property
    def xi(self) -> np.ndarray:
        return self.t / math.sqrt(self.beta)

    @property
    def p(self) -> np.ndarray:
        return np.tan(self.t) / math.sqrt(self.beta)

    def refined(self, factor: int = 2) -> "RadialGrid":
        return RadialGrid(self.beta, self.n_points * factor)


def reduced_eigenvalue(qn: QuantumNumbers, cfg: SystemConfig, pz: float = 0.0) -> float:
    """Analytic mu for (n, l) obtained from the exact energy."""
    u = cfg.units
    hw = u.hbar * cfg.omega_tilde
    E = energy_exact(qn, cfg, pz).energy
    K = 2 * E / hw - cfg.omega / cfg.omega_tilde * qn.l - pz * pz / (u.mass * hw)
    return K / cfg.epsilon


def energy_from_reduced(mu: float, l: int, cfg: SystemConfig, pz: float = 0.0) -> float:
    """Inverse of :func:`reduced_eigenvalue`."""
    u = cfg.units
    hw = u.hbar * cfg.omega_tilde
    K = mu * cfg.epsilon
    return 0.5 * hw * (K + cfg.omega / cfg.omega_tilde * l + pz * pz / (u.mass * hw))


def _coefficients(t, l, eps):
    ct = 1.0 / np.tan(t) + np.tan(t)
    potential = l * l * ct**2 + np.tan(t) ** 2 / eps**2
    return ct, potential


# ---------------------------------------------------------------------------
# residual of the analytic eigenpair


_D2_4 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_D1_4 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2_2 = np.array([1.0, -2.0, 1.0])
_D1_2 = np.array([-1.0, 0.0, 1.0]) / 2.0


def _apply_operator(wf, t, h, l, eps, mu, order):
    if order == 4:
        offsets, d2, d1 = np.arange(-2, 3), _D2_4, _D1_4
    else:
        offsets, d2, d1 = np.arange(-1, 2), _D2_2, _D1_2
    samples = np.stack([wf.at_angle(t + k * h) for k in offsets])
    r = samples[len(offsets) // 2]
    r2 = d2 @ samples / h**2
    r1 = d1 @ samples / h
    ct, potential = _coefficients(t, l, eps)
    return r2 + ct * r1 - potential * r + mu * r, r


@dataclass(frozen=True)
class ResidualReport:
    qn: QuantumNumbers
    mu: float
    max_residual: float
    coarse_residual: float
    observed_order: float
    truncation_estimate: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def residual_check(
    qn: QuantumNumbers,
    cfg: SystemConfig,
    grid: RadialGrid | None = None,
    perturb: float = 0.0,
    order: int = 4,
    tol: float = 1e-6,
) -> ResidualReport:
    """Apply the radial operator to the analytic R_nl by finite differences.

    Returns max_k |(L R)(t_k) + mu R(t_k)| / max|R| on ``grid`` together with
    the same quantity on a grid of twice the spacing. ``perturb`` is added to
    the analytic mu. Nodes whose stencil would cross t = pi/2 are skipped.
    GridTooCoarse is raised when the estimated truncation error is larger
    than ``tol``, since the residual could then not be classified either way.
    """
    if order not in (2, 4):
        raise DomainError("order must be 2 or 4")
    grid = grid or RadialGrid(cfg.beta)
    if grid.n_points < 512:
        raise GridTooCoarse("residual check needs at least 512 grid points")
    wf = radial_wavefunction(qn, cfg)
    mu = reduced_eigenvalue(qn, cfg) + perturb
    eps = cfg.epsilon

    def residual(h):
        t = grid.t
        reach = (2 if order == 4 else 1) * h
        t = t[t + reach < math.pi / 2]
        res, r = _apply_operator(wf, t, h, qn.l, eps, mu, order)
        scale = np.max(np.abs(wf.at_angle(grid.t)))
        return np.max(np.abs(res)) / scale, res / scale, t

    fine, fine_vec, t_f = residual(grid.h)
    coarse, coarse_vec, t_c = residual(2 * grid.h)
    m = min(len(fine_vec), len(coarse_vec))
    diff = np.max(np.abs(coarse_vec[:m] - fine_vec[:m]))
    truncation = diff / (2**order - 1)
    observed = math.log2(coarse / fine) if fine > 0 and coarse > 0 else math.inf
    if truncation > tol:
        raise GridTooCoarse(
            f"estimated truncation error {truncation:.3g} exceeds tolerance {tol:.3g} on {grid.n_points} points"
        )
    return ResidualReport(qn, mu, fine, coarse, observed, truncation, tol)


# ---------------------------------------------------------------------------
# finite-difference eigensolver


def _operator_matrix(l: int, eps: float, grid: RadialGrid):
    """Second-order discretisation of -(radial operator) on the cell-centred grid.

    The ghost value below t = 0 is fixed by the parity R(-t) = (-1)^|l| R(t);
    above pi/2 the function is taken as zero (it decays like cos(t)^lambda).
    """
    h = grid.h
    t = grid.t
    ct, potential = _coefficients(t, l, eps)
    lower = 1.0 / h**2 - ct / (2 * h)
    upper = 1.0 / h**2 + ct / (2 * h)
    diag = -2.0 / h**2 - potential
    diag[0] += lower[0] * (-1) ** abs(l)
    return -sps.diags([lower[1:], diag, upper[:-1]], [-1, 0, 1], format="csc")


def _lowest_eigenpairs(A, k, vectors=False):
    vals, vecs = spla.eigs(A, k=k, sigma=0.0, which="LM", return_eigenvectors=True)
    scale = np.maximum(1.0, np.abs(vals.real))
    if np.max(np.abs(vals.imag) / scale) > 1e-10:
        raise NonRealEigenvalue(f"imaginary parts up to {np.max(np.abs(vals.imag)):.3g}")
    order = np.argsort(vals.real)
    return vals.real[order], (vecs[:, order].real if vectors else None)


@dataclass(frozen=True)
class EigenResult:
    """Lowest reduced eigenvalues from the finite-difference solve.

    ``eigenvalues`` are Richardson-extrapolated from ``coarse`` (grid) and
    ``fine`` (grid refined twice); ``order_estimate`` uses a third, coarser grid.
    """

    l: int
    eigenvalues: np.ndarray
    grid: RadialGrid
    order_estimate: float
    coarse: np.ndarray
    fine: np.ndarray
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    def energies(self, cfg: SystemConfig) -> np.ndarray:
        return np.array([energy_from_reduced(mu, self.l, cfg) for mu in self.eigenvalues])


def fd_eigensolve(
    l: int,
    cfg: SystemConfig,
    grid: RadialGrid | None = None,
    k: int = 6,
    rtol: float = 1e-4,
    vectors: bool = False,
) -> EigenResult:
    """k lowest reduced eigenvalues at magnetic number ``l``.

    Solves the non-symmetric tridiagonal problem on ``grid`` and on the
    grid with half the spacing (shift-invert Arnoldi, general matrices),
    then Richardson-extrapolates assuming second-order convergence.
    ConvergenceError is raised when the two grids differ by more than
    ``rtol`` relative, i.e. the grids are outside the asymptotic range.
    """
    if not 1 <= k <= 12:
        raise DomainError("k must be between 1 and 12")
    grid = grid or RadialGrid(cfg.beta)
    if grid.n_points < 1024:
        raise DomainError("eigensolve needs at least 1024 grid points")
    eps = cfg.epsilon
    fine_grid = grid.refined(2)
    half_grid = RadialGrid(cfg.beta, grid.n_points // 2)

    coarse, _ = _lowest_eigenpairs(_operator_matrix(l, eps, grid), k)
    fine, vecs = _lowest_eigenpairs(_operator_matrix(l, eps, fine_grid), k, vectors)
    rough, _ = _lowest_eigenpairs(_operator_matrix(l, eps, half_grid), k)

    spread = np.max(np.abs(fine - coarse) / np.abs(fine))
    if spread > rtol:
        raise ConvergenceError(f"grids {grid.n_points}/{fine_grid.n_points} disagree by {spread:.3g}")
    extrapolated = (4 * fine - coarse) / 3
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = (rough - coarse) / (coarse - fine)
    order = float(np.median(np.log2(np.abs(ratios))))
    return EigenResult(l, extrapolated, grid, order, coarse, fine, vecs)


def count_levels_below(l: int, cfg: SystemConfig, cutoff: float) -> int:
    """Number of analytic levels at magnetic number ``l`` with mu below ``cutoff``."""
    n = 0
    while reduced_eigenvalue(QuantumNumbers(n, l), cfg) < cutoff:
        n += 1
    return n
