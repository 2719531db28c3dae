"""Surface plasmon polaritons at a planar metal/dielectric interface.

The metal (region 1) fills ``z < 0`` and the dielectric (region 2) fills
``z >= 0``; propagation is along x.

Time conventions
----------------
Permittivities and wavevectors returned by :func:`drude_permittivity` and
:func:`spp_wavevector` use ``exp(-i omega t)`` like the scattering modules,
so losses show up as positive imaginary parts. The TM field expressions are
written for ``exp(j omega t)``. A phasor ``F`` in one frame corresponds to
``conj(F)`` in the other (:func:`to_engineering_frame`), which leaves the real
field ``Re(F exp(-i omega t))`` unchanged. :func:`solve_tm_mode` performs that
mapping, so a :class:`TmModeField` is always expressed in the ``exp(j omega t)``
frame.
"""
import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import constants, optimize

from .errors import DomainError, PoleError

MODES = ("standard", "as_printed")


@dataclass(frozen=True)
class DrudeMetal:
    plasma_frequency: float
    damping: float = 0.0
    eps_inf: float = 1.0

    def __post_init__(self):
        if not self.plasma_frequency > 0:
            raise DomainError("plasma frequency must be positive")
        if not self.damping >= 0:
            raise DomainError("damping rate must be >= 0")


@dataclass(frozen=True)
class Interface:
    metal: DrudeMetal
    eps2: float

    def __post_init__(self):
        if not self.eps2 > 0:
            raise DomainError("dielectric permittivity eps2 must be positive")


@dataclass(frozen=True)
class TmModeField:
    """Bound TM mode in the ``exp(j omega t)`` frame."""

    A1: complex
    A2: complex
    beta: complex
    k1: complex
    k2: complex
    omega: float

    def __post_init__(self):
        if not (self.k1.real > 0 and self.k2.real > 0):
            raise DomainError("transverse decay constants need Re(k_i) > 0 for a confined mode")


def drude_permittivity(metal, omega):
    """``eps(omega) = eps_inf - omega_p^2 / (omega^2 + i gamma omega)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise DomainError("omega must be positive")
    eps = metal.eps_inf - metal.plasma_frequency**2 / (omega**2 + 1j * metal.damping * omega)
    return eps if eps.ndim else complex(eps)


def metallic_condition_check(eps1):
    """True when ``Re(eps1) < 0``."""
    return bool(complex(eps1).real < 0)


def spp_frequency(omega_p, eps2):
    """Surface-plasmon frequency ``omega_p / sqrt(1 + eps2)``."""
    if not eps2 > 0:
        raise DomainError("eps2 must be positive")
    if not omega_p > 0:
        raise DomainError("omega_p must be positive")
    return omega_p / math.sqrt(1.0 + eps2)


def _decaying_sqrt(value):
    root = cmath.sqrt(value)
    return -root if root.imag < 0 else root


def dispersion_wavevector(eps1, eps2, omega, mode="standard"):
    """SPP wavevector for given permittivities.

    ``standard``: ``(omega/c) sqrt(eps1 eps2 / (eps1 + eps2))``.
    ``as_printed``: ``(omega/c) sqrt(eps1 eps2 / eps1 + eps1)``, kept only to
    compare against the literal expression; it has no surface-plasmon pole.
    The root is taken with ``Im >= 0``.
    """
    if not omega > 0:
        raise DomainError("omega must be positive")
    eps1 = complex(eps1)
    k0 = omega / constants.c
    if mode == "standard":
        denom = eps1 + eps2
        if denom == 0:
            raise PoleError(f"eps1 + eps2 = 0 at omega = {omega:g}: surface-plasmon resonance")
        return k0 * _decaying_sqrt(eps1 * eps2 / denom)
    if mode == "as_printed":
        if eps1 == 0:
            raise DomainError("as_printed form divides by eps1")
        return k0 * _decaying_sqrt(eps1 * eps2 / eps1 + eps1)
    raise DomainError(f"unknown dispersion mode {mode!r}; expected one of {MODES}")


def spp_wavevector(interface, omega, mode="standard"):
    """SPP wavevector at the running frequency ``omega`` (``exp(-i omega t)`` frame)."""
    eps1 = drude_permittivity(interface.metal, omega)
    return dispersion_wavevector(eps1, interface.eps2, omega, mode)


def dispersion_pole(metal, eps2):
    """Frequency where ``Re(eps1(omega)) + eps2 = 0``, found by bracketing."""
    if not eps2 > 0:
        raise DomainError("eps2 must be positive")

    def f(w):
        return drude_permittivity(metal, w).real + eps2

    lo = metal.plasma_frequency * 1e-6
    hi = metal.plasma_frequency * math.sqrt(max(metal.eps_inf, 1.0)) * 10.0
    if f(lo) * f(hi) > 0:
        raise DomainError("no surface-plasmon pole for this metal/dielectric pair")
    return optimize.brentq(f, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def to_engineering_frame(value):
    """Map a phasor between the ``exp(-i omega t)`` and ``exp(j omega t)`` frames (complex conjugate)."""
    return np.conj(value) if isinstance(value, np.ndarray) else complex(value).conjugate()


def solve_tm_mode(interface, omega, amplitude=1.0):
    """Bound mode with ``beta = k_spp`` and ``k_i = sqrt(beta^2 - k0^2 eps_i)``, ``Re(k_i) > 0``.

    Solved in the ``exp(-i omega t)`` frame, then conjugated into the
    ``exp(j omega t)`` frame of :func:`tm_mode_fields`. ``A1 = A2`` enforces
    continuity of the tangential magnetic field.
    """
    eps1 = drude_permittivity(interface.metal, omega)
    beta = spp_wavevector(interface, omega)
    k0 = omega / constants.c
    ks = []
    for eps in (eps1, interface.eps2):
        k = cmath.sqrt(beta * beta - k0 * k0 * eps)
        ks.append(-k if k.real < 0 else k)
    a = complex(amplitude)
    conj = to_engineering_frame
    return TmModeField(conj(a), conj(a), conj(beta), conj(ks[0]), conj(ks[1]), float(omega))


def region_permittivities(interface, omega):
    """``(eps1, eps2)`` in the ``exp(j omega t)`` frame."""
    return to_engineering_frame(drude_permittivity(interface.metal, omega)), complex(interface.eps2)


def tm_mode_fields(mode, interface, x, z):
    """``E_x``, ``E_z`` and ``H_y`` of the TM mode at ``(x, z)``.

    Region ``i = 1`` for ``z < 0``, ``i = 2`` for ``z >= 0``, with

    * ``E_x,i = (-1)^i j A_i k_i / (omega eps0 eps_i) exp(j beta x) exp((-1)^(i+1) k_i z)``
    * ``E_z,i = -A_i beta / (omega eps0 eps_i) exp(j beta x) exp((-1)^(i+1) k_i z)``
    * ``H_y,i = A_i exp(j beta x) exp((-1)^(i+1) k_i z)``

    The same decaying exponential is used for all three components.
    Broadcasts over array ``x`` and ``z``.
    """
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    x, z = np.broadcast_arrays(x, z)
    eps1, eps2 = region_permittivities(interface, mode.omega)
    upper = z >= 0
    sign = np.where(upper, 1.0, -1.0)  # (-1)^i
    A = np.where(upper, mode.A2, mode.A1)
    k = np.where(upper, mode.k2, mode.k1)
    eps = np.where(upper, eps2, eps1)
    w_eps = mode.omega * constants.epsilon_0 * eps
    carrier = np.exp(1j * mode.beta * x) * np.exp(-sign * k * z)
    ex = sign * 1j * A * k / w_eps * carrier
    ez = -A * mode.beta / w_eps * carrier
    hy = A * carrier
    if ex.ndim == 0:
        return complex(ex), complex(ez), complex(hy)
    return ex, ez, hy
