"""Independent reference implementations and frozen golden values.

Nothing here imports the package under test. The golden numbers were
produced with mpmath at 30 digits and are frozen.
"""

from fractions import Fraction

import mpmath as mp
from scipy import integrate

GOLDEN = {
    "lambda_eps1_l0_upper": 2.41421356237309504880,
    "lambda_eps05_l1_upper": 3.44948974278317809820,
    "E_eps01_ground": 1.10498756211208902702,
    "thermal_wavelength_T1": 2.50662827463100050242,
    # roots of chi_beta - chi_0 for the simplified potential, in units of omega0
    "B1_closed": 0.357834178794126743126,
    "B2_closed": 1.768775890087528220780,
    # undeformed Maxwell-Boltzmann potential, omega0 = 1, B = 0, T = 30, V = 1
    "phi_mb_beta0_T30": -18777.7854477356371019730,
    "scaled_D1_u10": 0.990285964717319213953,
    "scaled_D2_u10": 0.971403528268078604663,
    "erfc_scaled_y50": 0.0790133882027720058890,
}


def jacobi_mp(n, a, b, x, dps=60):
    """Explicit finite sum over binomials, evaluated at high precision."""
    with mp.workdps(dps):
        a, b, x = mp.mpf(a), mp.mpf(b), mp.mpf(x)
        lo, hi = (x - 1) / 2, (x + 1) / 2
        return float(
            mp.fsum(mp.binomial(n + a, n - s) * mp.binomial(n + b, s) * lo**s * hi ** (n - s) for s in range(n + 1))
        )


def fock_darwin_classes(max_N, r: Fraction):
    """Multiplicities of E/hw = N + 1 + r l for n_d + n_g <= max_N, by exact enumeration."""
    counts = {}
    for nd in range(max_N + 1):
        for ng in range(max_N + 1 - nd):
            key = nd + ng + 1 + r * (nd - ng)
            counts.setdefault(key, []).append((nd, ng))
    return {k: len(v) for k, v in counts.items()}, counts


def first_order_classes_mp(eps, r, max_N, dps=50):
    """Group first-order levels by exact equality at high precision."""
    with mp.workdps(dps):
        eps, r = mp.mpf(eps), mp.mpf(r)
        groups = {}
        for nd in range(max_N + 1):
            for ng in range(max_N + 1 - nd):
                e = (1 + eps) + (1 + eps + r) * nd + eps * nd * nd + (1 + eps - r) * ng + eps * ng * ng
                groups.setdefault(mp.nstr(e, 40), []).append((nd, ng))
    return groups


def phi_mb_undeformed(T, omega0, omega, V=1.0):
    """-(V^(1/3)/(2 pi bt)) sqrt(2 pi/bt) (w~ V^(2/3)/pi) e^{-bt w~} / ((1-e^{-a+})(1-e^{-a-}))."""
    with mp.workdps(30):
        T, omega0, omega = mp.mpf(T), mp.mpf(omega0), mp.mpf(omega)
        wt = mp.sqrt(omega**2 + omega0**2)
        r = omega / (2 * wt)
        x = wt / T
        s = mp.exp(-x) / ((1 - mp.exp(-x * (1 + r))) * (1 - mp.exp(-x * (1 - r))))
        return float(-(V ** (mp.mpf(1) / 3)) * T / (2 * mp.pi) * mp.sqrt(2 * mp.pi * T) * wt * V ** (mp.mpf(2) / 3) / mp.pi * s)


def annulus_states(p_lo, p_hi, beta, area=1.0):
    """area/(2 pi) * int_{p_lo}^{p_hi} p dp / (1 + beta p^2) by quadrature."""
    val, _ = integrate.quad(lambda p: p / (1 + beta * p * p), p_lo, p_hi, epsabs=0, epsrel=1e-13)
    return area / (2 * 3.141592653589793) * val


def s_sum_mp(a, b, power, dps=30):
    with mp.workdps(dps):
        a, b = mp.mpf(a), mp.mpf(b)
        return float(mp.nsum(lambda n: n**power * mp.exp(-a * n - b * n * n), [0, mp.inf]))
