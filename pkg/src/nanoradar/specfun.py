"""Special functions for the scattering modules.

Spherical Bessel ``j_n`` comes from a normalised downward recurrence, ``y_n``
(and hence the outgoing Hankel function) from the upward recurrence. Angles
are radians throughout.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import DomainError

MAX_ORDER = 10000
MAX_ARGUMENT = 1e6


def _check_order_arg(order, argument):
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a nonnegative integer, got {order!r}")
    if order > MAX_ORDER:
        raise DomainError(f"order {order} exceeds supported maximum {MAX_ORDER}")
    if not np.isfinite(argument) or abs(argument) >= MAX_ARGUMENT:
        raise DomainError(f"|argument| must be finite and < {MAX_ARGUMENT:g}, got {argument!r}")


def _finite_or_raise(values, what):
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{what} overflowed for the requested order/argument")
    return values


def jn_table(nmax, z):
    """``j_n(z)`` for n = 0..nmax and every entry of ``z``; shape ``(len(z), nmax+1)``."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    return _kernels.bessel_j_table(int(nmax), z)


def yn_table(nmax, z):
    """``y_n(z)`` for n = 0..nmax; may overflow to inf for large n at small |z|."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    with np.errstate(over="ignore", invalid="ignore"):
        return _kernels.bessel_y_table(int(nmax), z)


def spherical_bessel_j(order, argument):
    """Spherical Bessel function of the first kind, complex argument.

    Exact values at the origin: ``j_0(0) = 1`` and ``j_n(0) = 0`` for n >= 1.

    >>> round(spherical_bessel_j(0, 1.0).real, 9)
    0.841470985
    """
    _check_order_arg(order, argument)
    z = complex(argument)
    if z == 0:
        return complex(1.0 if order == 0 else 0.0)
    value = jn_table(order, [z])[0, order]
    return complex(_finite_or_raise(value, "j_n"))


def spherical_hankel1(order, argument):
    """Outgoing spherical Hankel function ``h_n^(1)(x) = j_n(x) + i y_n(x)``, real x > 0."""
    _check_order_arg(order, argument)
    x = float(argument)
    if not x > 0:
        raise DomainError(f"spherical_hankel1 needs a positive real argument, got {argument!r}")
    j = jn_table(order, [x])[0, order]
    y = yn_table(order, [x])[0, order]
    return complex(_finite_or_raise(j.real + 1j * y.real, "h_n^(1)"))


class RiccatiBessel(NamedTuple):
    """Riccati-Bessel functions at orders 1..order_max (array index n-1)."""

    psi: np.ndarray
    psi_prime: np.ndarray
    xi: np.ndarray
    xi_prime: np.ndarray


def riccati_bessel(order_max, argument):
    """``psi_n = z j_n(z)``, ``xi_n = z h_n^(1)(z)`` and their derivatives.

    Derivatives use ``f_n' = f_{n-1} - n f_n / z``.
    """
    if order_max < 1:
        raise DomainError("order_max must be >= 1")
    z = complex(argument)
    if z == 0:
        raise DomainError("Riccati-Bessel functions are singular at z = 0 (xi_n)")
    if abs(z) >= MAX_ARGUMENT:
        raise DomainError(f"|argument| must be < {MAX_ARGUMENT:g}")
    j = jn_table(order_max, [z])[0]
    y = yn_table(order_max, [z])[0]
    h = j + 1j * y
    n = np.arange(1, order_max + 1)
    psi_all = z * j
    xi_all = z * h
    psi = psi_all[1:]
    xi = xi_all[1:]
    psi_prime = psi_all[:-1] - n * psi / z
    xi_prime = xi_all[:-1] - n * xi / z
    return RiccatiBessel(psi, psi_prime, xi, xi_prime)


@dataclass(frozen=True)
class AngularFunctionTable:
    order_max: int
    pi_n: np.ndarray
    tau_n: np.ndarray
    theta: float


def angular_functions(order_max, theta):
    """Mie angular functions ``pi_n`` and ``tau_n`` for n = 1..order_max.

    The upward recurrence in ``mu = cos(theta)`` is regular at 0 and pi, so
    the endpoint limits (``pi_n(0) = n(n+1)/2``) come out directly.
    """
    if order_max < 1:
        raise DomainError("order_max must be >= 1")
    if not 0.0 <= theta <= np.pi:
        raise DomainError(f"theta must lie in [0, pi], got {theta!r}")
    pi, tau = pi_tau_tables(order_max, np.array([theta]))
    return AngularFunctionTable(int(order_max), pi[0], tau[0], float(theta))


def pi_tau_tables(order_max, theta):
    """Vectorised ``pi_n``, ``tau_n``; returns two arrays of shape ``(len(theta), order_max)``."""
    mu = np.cos(np.atleast_1d(np.asarray(theta, dtype=np.float64)))
    return _kernels.pi_tau_table(int(order_max), mu)


def associated_legendre(lmax, theta):
    """Associated Legendre data for the vector spherical wave functions.

    Returns three arrays ``P``, ``P_over_sin`` and ``dP_dtheta`` of shape
    ``(lmax+1, lmax+1)`` indexed ``[l, m]`` for ``0 <= m <= l`` (Condon-Shortley
    phase included). ``P_over_sin`` is the regular continuation of
    ``P_l^m(cos theta)/sin theta`` for m >= 1 and is set to 0 for m = 0.
    """
    mu = np.cos(theta)
    s = np.sin(theta)
    size = lmax + 1
    P = np.zeros((size, size))
    U = np.zeros((size, size))
    for m in range(size):
        # (-1)^m (2m-1)!! seeds
        dfact = 1.0
        for k in range(1, 2 * m, 2):
            dfact *= k
        sign = -1.0 if m % 2 else 1.0
        P[m, m] = sign * dfact * s**m
        if m >= 1:
            U[m, m] = sign * dfact * s ** (m - 1)
        if m + 1 <= lmax:
            P[m + 1, m] = (2 * m + 1) * mu * P[m, m]
            U[m + 1, m] = (2 * m + 1) * mu * U[m, m]
        for ell in range(m + 2, size):
            P[ell, m] = ((2 * ell - 1) * mu * P[ell - 1, m] - (ell + m - 1) * P[ell - 2, m]) / (ell - m)
            U[ell, m] = ((2 * ell - 1) * mu * U[ell - 1, m] - (ell + m - 1) * U[ell - 2, m]) / (ell - m)
    D = np.zeros((size, size))
    for ell in range(size):
        for m in range(ell + 1):
            upper = P[ell, m + 1] if m + 1 <= ell else 0.0
            if m == 0:
                D[ell, 0] = upper
            else:
                D[ell, m] = 0.5 * (upper - (ell + m) * (ell - m + 1) * P[ell, m - 1])
    return P, U, D
