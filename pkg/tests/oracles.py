"""Independent reference implementations used only by the tests.

Nothing here imports the package; each oracle is built from scipy, mpmath or
textbook series so that agreement with the package is a genuine cross-check.
"""
import math

import mpmath
import numpy as np
from scipy import special


def jn_series(n, z, terms=40):
    """Ascending series j_n(z) = z^n / (2n+1)!! * sum_k (-z^2/2)^k / (k! (2n+3)(2n+5)...(2n+2k+1))."""
    with mpmath.workdps(40):
        z = mpmath.mpmathify(z)
        dfact = mpmath.mpf(1)
        for k in range(1, 2 * n + 2, 2):
            dfact *= k
        total = mpmath.mpf(0)
        term = mpmath.mpf(1)
        for k in range(terms):
            if k > 0:
                term *= -(z * z / 2) / (k * (2 * n + 2 * k + 1))
            total += term
        return complex(z**n / dfact * total)


def yn_mpmath(n, x):
    """y_n(x) = sqrt(pi / 2x) Y_{n+1/2}(x) evaluated by mpmath at 40 digits."""
    with mpmath.workdps(40):
        return float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.bessely(n + 0.5, x))


def mie_reference(x, m, nmax):
    """Lorenz-Mie a_n, b_n from scipy's spherical Bessel functions (real x, complex m via mpmath)."""
    n = np.arange(1, nmax + 1)
    jx = special.spherical_jn(n, x)
    jx_d = special.spherical_jn(n, x, derivative=True)
    yx = special.spherical_yn(n, x)
    yx_d = special.spherical_yn(n, x, derivative=True)
    psi = x * jx
    dpsi = jx + x * jx_d
    xi = x * (jx + 1j * yx)
    dxi = (jx + 1j * yx) + x * (jx_d + 1j * yx_d)
    mx = m * x
    with mpmath.workdps(30):
        jm = np.array([complex(mpmath.sqrt(mpmath.pi / (2 * mx)) * mpmath.besselj(k + 0.5, mx)) for k in range(nmax + 1)])
    psim = mx * jm[1:]
    dpsim = mx * jm[:-1] - n * jm[1:]
    a = (m * psim * dpsi - psi * dpsim) / (m * psim * dxi - xi * dpsim)
    b = (psim * dpsi - m * psi * dpsim) / (psim * dxi - m * xi * dpsim)
    return a, b


def pi_tau_reference(nmax, theta):
    """pi_n and tau_n for 0 < theta < pi from scipy's associated Legendre functions.

    With P = P_n^1 (no Condon-Shortley phase), pi_n = P / sin(theta) and
    tau_n = dP/dtheta = (n mu P_n^1 - (n+1) P_{n-1}^1) / sin(theta).
    """
    mu = math.cos(theta)
    s = math.sin(theta)
    p = [0.0] + [-special.lpmv(1, n, mu) for n in range(1, nmax + 1)]
    pi = np.array([p[n] / s for n in range(1, nmax + 1)])
    tau = np.array([(n * mu * p[n] - (n + 1) * p[n - 1]) / s for n in range(1, nmax + 1)])
    return pi, tau


def sphere_form_factor_radial(u):
    """(3/R^3) int_0^R r^2 j0(q r) dr by adaptive quadrature with R = 1, q = u."""
    from scipy import integrate

    if u == 0:
        return 1.0
    val, _ = integrate.quad(lambda r: r * r * np.sinc(u * r / math.pi), 0.0, 1.0, epsabs=0, epsrel=1e-13)
    return 3.0 * val
