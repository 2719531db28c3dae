"""Antenna figures of merit and uniform linear arrays.

Patterns are power densities ``p(theta, phi)`` over the unit sphere. Samplers
must accept broadcastable numpy arrays of angles (radians) and return
nonnegative values of the broadcast shape.
"""
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import constants

from .errors import DomainError, NumericalError

Z0 = 376.730313668
"""Wave impedance of free space in ohms."""

QUAD_RTOL = 1e-9
# internal target is tighter than the advertised tolerance so the returned
# value carries the full 1e-9 margin
_QUAD_TARGET = 1e-12
_QUAD_START = 16
_QUAD_CAP = 4096


@dataclass(frozen=True)
class RadiationPattern:
    """Power density sampler ``p(theta, phi) >= 0``."""

    sampler: Callable
    name: str = "pattern"

    def __call__(self, theta, phi=0.0):
        theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
        values = np.broadcast_to(np.asarray(self.sampler(theta, phi), dtype=float), theta.shape)
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise DomainError(f"{self.name}: power density must be finite and nonnegative")
        return values if values.ndim else float(values)


@dataclass(frozen=True)
class ArraySpec:
    """Uniform linear array along the z axis (``theta = 0``)."""

    element_count: int
    spacing: float
    progressive_phase: float
    wavelength: float

    def __post_init__(self):
        if int(self.element_count) != self.element_count or self.element_count < 1:
            raise DomainError("element_count must be an integer >= 1")
        if not self.spacing > 0:
            raise DomainError("spacing must be positive")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be positive")

    @property
    def k(self):
        return 2.0 * math.pi / self.wavelength

    @classmethod
    def end_fire(cls, element_count, spacing, wavelength):
        """Ordinary end-fire array, ``beta = -k d`` (main lobe at theta = 0)."""
        return cls(element_count, spacing, -2.0 * math.pi * spacing / wavelength, wavelength)


def hansen_woodyard_spacing(element_count, wavelength):
    """Element spacing ``d = (N - 1)/N * lambda/4``."""
    if element_count < 1 or not wavelength > 0:
        raise DomainError("need element_count >= 1 and wavelength > 0")
    return (element_count - 1) / element_count * wavelength / 4.0


def _sphere_rule(n_theta, n_phi):
    x, w = np.polynomial.legendre.leggauss(n_theta)
    theta = 0.5 * math.pi * (x + 1.0)
    w_theta = 0.5 * math.pi * w * np.sin(theta)
    phi = np.arange(n_phi) * (2.0 * math.pi / n_phi)
    return theta, w_theta, phi, 2.0 * math.pi / n_phi


def _integrate_once(pattern, n_theta, n_phi):
    theta, w_theta, phi, w_phi = _sphere_rule(n_theta, n_phi)
    values = pattern(theta[:, None], phi[None, :])
    return float(w_theta @ values.sum(axis=1) * w_phi)


def integrate_radiated_power(pattern, rtol=QUAD_RTOL):
    """``P_rad = int int p sin(theta) dphi dtheta`` over the sphere.

    Gauss-Legendre in theta with the periodic trapezoid rule in phi; both
    resolutions double until successive results agree to well within ``rtol``.
    """
    target = min(rtol, _QUAD_TARGET)
    n = _QUAD_START
    prev = _integrate_once(pattern, n, n)
    change = math.inf
    while n < _QUAD_CAP:
        n *= 2
        cur = _integrate_once(pattern, n, n)
        change = abs(cur - prev)
        if change <= target * abs(cur):
            return cur
        prev = cur
    if change <= rtol * abs(cur):
        return cur
    raise NumericalError(f"radiated-power quadrature did not converge (last change {change:.3g}, value {cur:.6g})")


def directivity(pattern, theta, phi=0.0, p_rad=None):
    """``D = 4 pi p(theta, phi) / P_rad``; ``p_rad`` may be passed to skip the integral."""
    p_rad = integrate_radiated_power(pattern) if p_rad is None else p_rad
    if not p_rad > 0:
        raise DomainError("radiated power is zero; directivity undefined")
    return 4.0 * math.pi * pattern(theta, phi) / p_rad


def radiation_efficiency(p_rad, p_loss):
    """``eta = P_rad / (P_rad + P_loss)``."""
    if p_rad < 0 or p_loss < 0:
        raise DomainError("powers must be nonnegative")
    if p_rad == 0 and p_loss == 0:
        raise DomainError("efficiency undefined when both powers are zero")
    return p_rad / (p_rad + p_loss)


def gain(pattern, p_total, theta, phi=0.0):
    """``G = 4 pi p(theta, phi) / P_total`` with ``P_total`` the accepted input power."""
    if not p_total > 0:
        raise DomainError("total input power must be positive")
    return 4.0 * math.pi * pattern(theta, phi) / p_total


def gain_from_directivity(efficiency, directivity_value):
    """``G = eta * D``; the second route to the gain."""
    if not 0.0 <= efficiency <= 1.0:
        raise DomainError("efficiency must lie in [0, 1]")
    return efficiency * directivity_value


def dipole_radiated_power(moment, omega, eps_rel=1.0, refractive_index=1.0):
    """Power radiated by a point dipole, ``|p|^2 n^3 omega^4 / (12 pi eps0 eps c^3)``."""
    if moment < 0 or not (omega > 0 and eps_rel > 0 and refractive_index > 0):
        raise DomainError("need |p| >= 0 and positive omega, eps_rel, refractive_index")
    c = constants.c
    return moment**2 / (4.0 * math.pi * constants.epsilon_0 * eps_rel) * refractive_index**3 * omega**4 / (3.0 * c**3)


def dipole_normalized_pattern():
    """``p = 3 sin^2(theta) / (8 pi)``, unit total power."""
    return RadiationPattern(lambda theta, phi: 3.0 / (8.0 * math.pi) * np.sin(theta) ** 2, name="dipole")


def isotropic_pattern():
    return RadiationPattern(lambda theta, phi: np.full(np.shape(theta), 1.0 / (4.0 * math.pi)), name="isotropic")


def ldos(power, moment, omega):
    """Local density of states ``12 eps0 P / (pi omega^2 |p|^2)`` seen by the dipole."""
    if not (moment > 0 and omega > 0):
        raise DomainError("need |p| > 0 and omega > 0")
    return 12.0 * constants.epsilon_0 / (math.pi * omega**2) * power / moment**2


def free_space_ldos(omega):
    """``omega^2 / (pi^2 c^3)``."""
    return omega**2 / (math.pi**2 * constants.c**3)


def radiation_resistance(p_rad, i_max):
    """``R = P_rad / (I_max^2 / 2)``."""
    if not i_max > 0:
        raise DomainError("current amplitude must be positive")
    return p_rad / (0.5 * i_max**2)


def dipole_radiation_resistance(delta_l, wavelength):
    """Hertzian-dipole resistance ``(2 pi / 3) Z0 (dl / lambda)^2``.

    Warns when ``dl > 0.1 lambda`` where the short-dipole formula degrades.
    """
    if delta_l < 0 or not wavelength > 0:
        raise DomainError("need delta_l >= 0 and wavelength > 0")
    if delta_l > 0.1 * wavelength:
        warnings.warn("dipole length exceeds 0.1 wavelength; short-dipole formula is approximate", stacklevel=2)
    return 2.0 * math.pi / 3.0 * Z0 * (delta_l / wavelength) ** 2


def effective_wavelength(n1, n2, wavelength, plasma_wavelength):
    """``lambda_eff = n1 + n2 * lambda / lambda_p``.

    ``n1`` is a length and ``n2`` is taken in length units per unit of the
    ratio ``lambda / lambda_p``; both depend on the antenna geometry.
    """
    if not plasma_wavelength > 0:
        raise DomainError("plasma wavelength must be positive")
    return n1 + n2 * wavelength / plasma_wavelength


def scaling_ratio(lambda_eff, lambda1, lambda2):
    """``SR = lambda_eff * lambda1 / lambda2``.

    Evaluated literally, so the result carries the length unit of
    ``lambda_eff`` rather than being dimensionless.
    """
    if not lambda2 > 0:
        raise DomainError("lambda2 must be positive")
    return lambda_eff * lambda1 / lambda2


def array_factor(spec, theta):
    """``AF = sum_m exp(i m (k d cos(theta) + beta))`` for m = 0..N-1."""
    theta = np.asarray(theta, dtype=float)
    psi = spec.k * spec.spacing * np.cos(theta) + spec.progressive_phase
    m = np.arange(spec.element_count)
    af = np.exp(1j * np.multiply.outer(psi, m)).sum(axis=-1)
    return af if af.ndim else complex(af)


def uniform_array_pattern(spec, element):
    """``element * |AF|^2 / N^2``; the array axis is ``theta = 0``."""
    n2 = float(spec.element_count) ** 2

    def sampler(theta, phi):
        af = array_factor(spec, theta)
        return element(theta, phi) * (np.abs(af) ** 2 / n2)

    return RadiationPattern(sampler, name=f"{element.name}x{spec.element_count}")
