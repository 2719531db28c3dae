"""Lorenz-Mie scattering by a single homogeneous sphere.

Conventions
-----------
* Fields vary as ``exp(-i omega t)``; absorbing particles have ``Im(m) >= 0``.
* ``m`` is the refractive index relative to the medium and every wavenumber
  is the medium wavenumber ``k = 2 pi n_med / lambda0``.
* ``theta = 0`` is forward scattering, ``theta = pi`` is backscatter.

The Riccati-Bessel form of the coefficients follows Bohren & Huffman,
*Absorption and Scattering of Light by Small Particles* (1983), ch. 4.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from . import _kernels
from .errors import DomainError, NumericalError
from .medium import Medium
from .pattern import ScatteringPattern, check_theta_grid, polarized_intensity
from .specfun import associated_legendre, jn_table, pi_tau_tables, riccati_bessel, yn_table


@dataclass(frozen=True)
class Sphere:
    radius: float
    rri: complex
    center: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"sphere radius must be positive, got {self.radius}")
        rri = complex(self.rri)
        if rri.imag < 0:
            raise DomainError("Im(rri) must be >= 0 under the exp(-i omega t) convention")
        object.__setattr__(self, "rri", rri)
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))


@dataclass(frozen=True)
class MieCoefficients:
    order_max: int
    a: np.ndarray
    b: np.ndarray
    x: float
    m: complex


@dataclass(frozen=True)
class DipoleSource:
    """Oscillating point dipole: complex moment (C m), position (m), angular frequency."""

    moment: tuple
    position: tuple
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("dipole angular frequency must be positive")
        object.__setattr__(self, "moment", tuple(complex(p) for p in self.moment))
        object.__setattr__(self, "position", tuple(float(r) for r in self.position))

    @property
    def wavelength_vacuum(self):
        return 2.0 * math.pi * constants.c / self.omega


@dataclass(frozen=True)
class DipoleScatterCoefficients:
    """Scattered-field coefficients for dipole excitation.

    ``a[l-1, n + l_max]`` holds ``a_{l n}`` (entries with ``|n| > l`` are zero).
    ``converged`` is False when the last order still carries more than
    ``1e-6`` of the peak coefficient magnitude.
    """

    l_max: int
    a: np.ndarray
    b: np.ndarray
    k: float
    converged: bool
    meta: dict = field(default_factory=dict)

    def get(self, ell, n):
        if not (1 <= ell <= self.l_max and -ell <= n <= ell):
            raise DomainError(f"(l={ell}, n={n}) outside the stored table")
        return complex(self.a[ell - 1, n + self.l_max]), complex(self.b[ell - 1, n + self.l_max])


def size_parameter(radius, wavelength_vacuum, medium_index):
    """x = 2 pi n_med r / lambda0."""
    if not (radius > 0 and wavelength_vacuum > 0 and medium_index > 0):
        raise DomainError("radius, wavelength and medium index must all be positive")
    return 2.0 * math.pi * medium_index * radius / wavelength_vacuum


def truncation_order(x):
    """Series cutoff N = ceil(x + 4 x^(1/3) + 2)."""
    if not x > 0:
        raise DomainError("size parameter must be positive")
    return int(math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 2.0))


def _mie_ab(x, m, nmax):
    mx = m * x
    rx = riccati_bessel(nmax, x)
    rmx = riccati_bessel(nmax, mx)
    # psi_n(x) is evaluated through the same complex path as psi_n(mx) so that
    # m = 1 cancels exactly.
    psi_x = rx.psi
    dpsi_x = rx.psi_prime
    a_num = m * rmx.psi * dpsi_x - psi_x * rmx.psi_prime
    a_den = m * rmx.psi * rx.xi_prime - rx.xi * rmx.psi_prime
    b_num = rmx.psi * dpsi_x - m * psi_x * rmx.psi_prime
    b_den = rmx.psi * rx.xi_prime - m * rx.xi * rmx.psi_prime
    for name, den in (("a", a_den), ("b", b_den)):
        bad = np.flatnonzero(~np.isfinite(den) | (den == 0))
        if bad.size:
            raise NumericalError(f"Mie {name}_n denominator underflow/overflow at order n={bad[0] + 1}")
    with np.errstate(all="ignore"):
        a = a_num / a_den
        b = b_num / b_den
    return a, b


def lorenz_mie_coefficients(x, m, order_max=None):
    """Lorenz-Mie coefficients ``a_n``, ``b_n`` for n = 1..order_max.

    ``order_max`` defaults to :func:`truncation_order` and may not be smaller.
    """
    if not x > 0:
        raise DomainError("size parameter must be positive")
    m = complex(m)
    if m == 0:
        raise DomainError("relative refractive index m = 0 is not allowed")
    nmin = truncation_order(x)
    if order_max is None:
        order_max = nmin
    if order_max < nmin:
        raise DomainError(f"order_max={order_max} below the truncation order {nmin} for x={x}")
    a, b = _mie_ab(float(x), m, int(order_max))
    return MieCoefficients(int(order_max), a, b, float(x), m)


def scattering_amplitudes(coeffs, theta):
    """Amplitude-matrix elements ``S1`` (perpendicular) and ``S2`` (parallel).

    ``theta`` may be a scalar or an array; the return matches its shape.
    """
    scalar = np.ndim(theta) == 0
    th = check_theta_grid(theta)
    pi, tau = pi_tau_tables(coeffs.order_max, th)
    s1, s2 = _kernels.amplitude_sums(
        np.ascontiguousarray(coeffs.a, dtype=np.complex128),
        np.ascontiguousarray(coeffs.b, dtype=np.complex128),
        pi,
        tau,
    )
    if scalar:
        return complex(s1[0]), complex(s2[0])
    return s1, s2


def efficiencies(coeffs):
    """Scattering and extinction efficiencies (Q_sca, Q_ext)."""
    n = np.arange(1, coeffs.order_max + 1)
    w = 2.0 * n + 1.0
    scale = 2.0 / coeffs.x**2
    q_sca = scale * np.sum(w * (np.abs(coeffs.a) ** 2 + np.abs(coeffs.b) ** 2))
    q_ext = scale * np.sum(w * (coeffs.a + coeffs.b).real)
    return float(q_sca), float(q_ext)


def mie_intensity_pattern(sphere, medium_index, wavelength_vacuum, theta_grid, polarization="unpolarized"):
    """``|S|^2`` versus angle for one sphere (far-field normalised, no 1/(kr)^2)."""
    theta = check_theta_grid(theta_grid)
    x = size_parameter(sphere.radius, wavelength_vacuum, medium_index)
    coeffs = lorenz_mie_coefficients(x, sphere.rri)
    s1, s2 = scattering_amplitudes(coeffs, theta)
    return ScatteringPattern(
        theta=theta,
        intensity=polarized_intensity(s1, s2, polarization),
        model="mie",
        wavelength=float(wavelength_vacuum),
        medium_index=float(medium_index),
        polarization=polarization,
        meta={"size_parameter": x, "order_max": coeffs.order_max},
    )


# --------------------------------------------------------------------------
# dipole excitation
# --------------------------------------------------------------------------


def _spherical_basis(theta, phi):
    st, ct = math.sin(theta), math.cos(theta)
    sp, cp = math.sin(phi), math.cos(phi)
    r_hat = np.array([st * cp, st * sp, ct])
    t_hat = np.array([ct * cp, ct * sp, -st])
    p_hat = np.array([-sp, cp, 0.0])
    return r_hat, t_hat, p_hat


def outgoing_vswf(ell, m, rho, theta, phi, legendre=None, hankel=None):
    """Outgoing vector spherical wave functions ``M^(3)_{lm}``, ``N^(3)_{lm}``.

    Unnormalised convention built on ``h_l^(1)(rho) P_l^m(cos theta) e^{i m phi}``
    (Condon-Shortley phase). With it the free dipole field is exactly
    ``E = i k^3 / (4 pi eps0 eps) * p * N^(3)_{10}`` for a z-directed moment.
    Returns two Cartesian complex 3-vectors ``(M, N)``.
    """
    if legendre is None:
        legendre = associated_legendre(ell, theta)
    if hankel is None:
        hankel = jn_table(ell, [rho])[0].real + 1j * yn_table(ell, [rho])[0].real
    P, U, D = legendre
    am = abs(m)
    f = 1.0
    if m < 0:
        f = (-1.0) ** am * math.exp(math.lgamma(ell - am + 1) - math.lgamma(ell + am + 1))
    p_lm, u_lm, d_lm = f * P[ell, am], f * U[ell, am], f * D[ell, am]
    h = hankel[ell]
    dh = hankel[ell - 1] - ell * h / rho  # (rho h)'/rho
    phase = complex(math.cos(m * phi), math.sin(m * phi))
    r_hat, t_hat, p_hat = _spherical_basis(theta, phi)
    M = phase * h * (1j * m * u_lm * t_hat - d_lm * p_hat)
    N = phase * (ell * (ell + 1) * h / rho * p_lm * r_hat + dh * (d_lm * t_hat + 1j * m * u_lm * p_hat))
    return M, N


def dipole_excitation_coefficients(source, sphere, medium=None, l_max=10):
    """Scattered-wave coefficients of a sphere driven by a point dipole.

    ``a_{ln} = (-1)^n (i alpha_l k^3 / eps) (2l+1)/(l(l+1)) N^(3)_{l,-n}(k r0) . p``
    and ``b_{ln}`` likewise with ``beta_l`` and ``M^(3)``, where ``alpha_l``,
    ``beta_l`` are the Lorenz-Mie coefficients, ``r0`` is the dipole position
    relative to the sphere centre and ``eps`` is the medium's relative
    permittivity. The dot product does not conjugate ``p``.
    """
    medium = medium or Medium()
    if l_max < 1:
        raise DomainError("l_max must be >= 1")
    rel = np.asarray(source.position) - np.asarray(sphere.center)
    dist = float(np.linalg.norm(rel))
    if dist <= sphere.radius:
        raise DomainError("dipole must lie outside the sphere")
    k = medium.refractive_index * source.omega / constants.c
    x = k * sphere.radius
    alpha, beta = _mie_ab(x, sphere.rri, int(l_max))
    rho = k * dist
    theta = math.acos(max(-1.0, min(1.0, rel[2] / dist)))
    phi = math.atan2(rel[1], rel[0])
    legendre = associated_legendre(l_max, theta)
    hankel = jn_table(l_max, [rho])[0].real + 1j * yn_table(l_max, [rho])[0].real
    p = np.asarray(source.moment, dtype=np.complex128)
    eps = medium.relative_permittivity
    width = 2 * l_max + 1
    a = np.zeros((l_max, width), dtype=np.complex128)
    b = np.zeros((l_max, width), dtype=np.complex128)
    for ell in range(1, l_max + 1):
        pref = 1j * k**3 / eps * (2 * ell + 1) / (ell * (ell + 1))
        for n in range(-ell, ell + 1):
            M, N = outgoing_vswf(ell, -n, rho, theta, phi, legendre, hankel)
            sign = -1.0 if n % 2 else 1.0
            a[ell - 1, n + l_max] = sign * pref * alpha[ell - 1] * (N @ p)
            b[ell - 1, n + l_max] = sign * pref * beta[ell - 1] * (M @ p)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NumericalError("dipole coefficients overflowed; reduce l_max")
    peak = max(np.abs(a).max(), np.abs(b).max())
    tail = max(np.abs(a[-1]).max(), np.abs(b[-1]).max())
    converged = bool(peak == 0.0 or tail <= 1e-6 * peak)
    return DipoleScatterCoefficients(int(l_max), a, b, float(k), converged, {"kr0": rho, "x": x})
