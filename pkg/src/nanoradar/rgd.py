"""Rayleigh-Gans-Debye (RGD) scattering.

The incident plane wave travels along +z and the scattering plane is x-z
(azimuth 0). The phase of a volume element at ``r`` is ``q . r`` with
``q = k (z_hat - s_hat)``, so ``|q| = 2 k sin(theta / 2)``. For the shapes
supported here the form factor does not depend on azimuth in that plane,
which is why the functions take ``theta`` only.

Amplitudes are far-field normalised: the ``exp(ik(r - z)) / (-ikr)``
propagator is not included.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .pattern import ScatteringPattern, check_theta_grid, polarized_intensity

DEFAULT_LIMIT = 0.3
LATTICE_START = 64
LATTICE_CAP = 512
LATTICE_TOL = 1e-5
LATTICE_SUBDIV = 8


class RgdValidityWarning(UserWarning):
    """RGD evaluated outside its validity limits."""


@dataclass(frozen=True)
class RgdValidity:
    contrast: float
    phase_shift: float
    valid: bool
    margin: float
    contrast_limit: float = DEFAULT_LIMIT
    phase_limit: float = DEFAULT_LIMIT


@dataclass(frozen=True, eq=False)
class HomogeneousRegion:
    """One homogeneous sub-volume of a scatterer.

    Use the :meth:`sphere`, :meth:`box` and :meth:`point_cloud` constructors.
    ``offset`` places the region's local origin relative to the common phase
    origin. Point clouds carry their own quadrature: each point stands for
    ``weight / sum(weights)`` of the volume.
    """

    shape: str
    rri: complex
    volume: float
    offset: tuple = (0.0, 0.0, 0.0)
    radius: float | None = None
    extents: tuple | None = None
    points: np.ndarray | None = field(default=None, repr=False)
    weights: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "rri", complex(self.rri))
        object.__setattr__(self, "offset", tuple(float(o) for o in self.offset))
        if not self.volume > 0:
            raise DomainError("region volume must be positive")
        if self.shape == "sphere":
            expected = 4.0 / 3.0 * math.pi * self.radius**3
        elif self.shape == "box":
            expected = float(np.prod(self.extents))
        elif self.shape == "points":
            pts = np.asarray(self.points, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
                raise DomainError("point cloud must be a nonempty (N, 3) array")
            w = np.ones(len(pts)) if self.weights is None else np.asarray(self.weights, dtype=float)
            if w.shape != (len(pts),) or np.any(w < 0) or w.sum() <= 0:
                raise DomainError("point weights must be nonnegative with a positive sum")
            object.__setattr__(self, "points", pts)
            object.__setattr__(self, "weights", w)
            return
        else:
            raise DomainError(f"unknown region shape {self.shape!r}")
        if abs(self.volume - expected) > 1e-9 * expected:
            raise DomainError(f"volume {self.volume} inconsistent with {self.shape} parameters ({expected})")

    @classmethod
    def sphere(cls, radius, rri, offset=(0.0, 0.0, 0.0)):
        if not radius > 0:
            raise DomainError("sphere radius must be positive")
        return cls("sphere", rri, 4.0 / 3.0 * math.pi * radius**3, offset, radius=float(radius))

    @classmethod
    def box(cls, extents, rri, offset=(0.0, 0.0, 0.0)):
        ext = tuple(float(e) for e in extents)
        if len(ext) != 3 or min(ext) <= 0:
            raise DomainError("box extents must be three positive lengths")
        return cls("box", rri, float(np.prod(ext)), offset, extents=ext)

    @classmethod
    def point_cloud(cls, points, volume, rri, weights=None, offset=(0.0, 0.0, 0.0)):
        return cls("points", rri, float(volume), offset, points=points, weights=weights)

    @property
    def linear_dimension(self):
        """Largest chord: diameter, box diagonal, or the cloud's bounding-box diagonal."""
        if self.shape == "sphere":
            return 2.0 * self.radius
        if self.shape == "box":
            return math.sqrt(sum(e * e for e in self.extents))
        span = self.points.max(axis=0) - self.points.min(axis=0)
        return float(np.linalg.norm(span))


def validity_check(m, k, d, contrast_limit=DEFAULT_LIMIT, phase_limit=DEFAULT_LIMIT):
    """Evaluate ``|m - 1| << 1`` and ``k d |m - 1| << 1`` against numeric limits."""
    if not (k > 0 and d > 0):
        raise DomainError("k and d must be positive")
    contrast = abs(complex(m) - 1.0)
    phase = k * d * contrast
    valid = contrast < contrast_limit and phase < phase_limit
    margin = min(1.0 - contrast / contrast_limit, 1.0 - phase / phase_limit)
    return RgdValidity(contrast, phase, valid, margin, contrast_limit, phase_limit)


def sphere_form_factor(u):
    """``3 (sin u - u cos u) / u^3`` with ``f(0) = 1``; accepts scalars or arrays."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("form-factor argument must be >= 0")
    small = u < 0.05
    out = np.empty_like(u)
    us = u[small]
    u2 = us * us
    out[small] = 1.0 - u2 / 10.0 + u2 * u2 / 280.0 - u2 * u2 * u2 / 15120.0
    ub = u[~small]
    out[~small] = 3.0 * (np.sin(ub) - ub * np.cos(ub)) / ub**3
    return out if out.ndim else float(out)


def scattering_vector(k, theta):
    """q = k (z_hat - s_hat) in the x-z scattering plane."""
    return np.array([-k * math.sin(theta), 0.0, k * (1.0 - math.cos(theta))])


def lattice(region, n):
    """Cell-centre axes, cell sizes and kernel shape code for an n-per-axis lattice.

    Sphere lattices span the diameter with ``n`` cells plus one padding cell
    per side so every partially covered boundary cell is included.
    """
    if region.shape == "sphere":
        h = 2.0 * region.radius / n
        # n + 2 cells centred symmetrically about the origin
        axis = (np.arange(n + 2) - (n + 1) / 2.0) * h
        return (axis, axis, axis), (h, h, h), 0
    if region.shape == "box":
        axes = tuple((np.arange(n) + 0.5 - n / 2.0) * (e / n) for e in region.extents)
        return axes, tuple(e / n for e in region.extents), 1
    raise DomainError(f"no lattice for shape {region.shape!r}")


def _sinc(x):
    return np.sinc(np.asarray(x) / math.pi)


def lattice_points(region, n, subdivisions=LATTICE_SUBDIV):
    """Explicit quadrature points and volume weights equivalent to the lattice.

    Interior cells contribute their centre; sphere boundary cells are replaced
    by their ``subdivisions**3`` subcell centres with fractional weights.
    """
    (x, y, z), (h, _, _), code = lattice(region, n)
    X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    if code == 1:
        return pts, np.ones(len(pts))
    sd = np.linalg.norm(pts, axis=1) - region.radius
    band = math.sqrt(3.0) / 2.0 * h
    inner = pts[sd <= -band]
    edge = pts[(sd > -band) & (sd < band)]
    offs = (np.arange(subdivisions) + 0.5) / subdivisions * h - 0.5 * h
    o = np.stack(np.meshgrid(offs, offs, offs, indexing="ij"), axis=-1).reshape(-1, 3)
    sub = (edge[:, None, :] + o[None, :, :]).reshape(-1, 3)
    w_sub = np.clip(0.5 - (np.linalg.norm(sub, axis=1) - region.radius) / (h / subdivisions), 0.0, 1.0)
    keep = w_sub > 0
    points = np.vstack([inner, sub[keep]])
    weights = np.concatenate([np.ones(len(inner)), w_sub[keep] / subdivisions**3])
    return points, weights


def lattice_form_factor(region, k, theta, n, subdivisions=LATTICE_SUBDIV):
    """Form factor from one lattice resolution, relative to the region's own origin.

    The phase is integrated exactly over each full cell (a product of sinc
    factors). Sphere cells cut by the surface are subdivided and their
    subcells weighted by a covered-fraction ramp in the signed distance.
    """
    (x, y, z), (h, hy, hz), code = lattice(region, n)
    q = scattering_vector(k, theta)
    ex, ey, ez = np.exp(1j * q[0] * x), np.exp(1j * q[1] * y), np.exp(1j * q[2] * z)
    radius = region.radius if code == 0 else 0.0
    offs = (np.arange(subdivisions) + 0.5) / subdivisions * h - 0.5 * h
    sx, sy, sz = np.exp(1j * q[0] * offs), np.exp(1j * q[1] * offs), np.exp(1j * q[2] * offs)
    inner, bound, w_in, w_bd = _kernels.lattice_phase_sums(code, x, y, z, ex, ey, ez, radius, h, sx, sy, sz)
    cell = float(np.prod(_sinc(q * np.array([h, hy, hz]) / 2.0)))
    subcell = float(np.prod(_sinc(q * h / (2.0 * subdivisions))))
    total = cell * np.sum(inner) + subcell * np.sum(bound)
    return complex(total / (np.sum(w_in) + np.sum(w_bd)))


def form_factor_numeric(region, k, theta, tol=LATTICE_TOL, n_start=LATTICE_START, n_cap=LATTICE_CAP):
    """``(1/V) int_V exp(i q.r) dV`` by lattice quadrature, including the offset phase.

    Resolution doubles from ``n_start`` until successive estimates differ by
    less than ``tol``; failing that at ``n_cap`` raises NumericalError.
    """
    if not region.volume > 0:
        raise DomainError("region volume must be positive")
    q = scattering_vector(k, theta)
    shift = complex(np.exp(1j * (q @ np.asarray(region.offset))))
    if region.shape == "points":
        phase = np.exp(1j * (region.points @ q))
        return shift * complex(np.sum(region.weights * phase) / np.sum(region.weights))
    n = n_start
    prev = lattice_form_factor(region, k, theta, n)
    change = math.inf
    while n < n_cap:
        n *= 2
        cur = lattice_form_factor(region, k, theta, n)
        change = abs(cur - prev)
        if change < tol:
            return shift * cur
        prev = cur
    raise NumericalError(f"form-factor quadrature did not reach {tol:g}; last change {change:.3g} at n={n}")


def form_factor(region, k, theta):
    """Closed form for spheres, lattice quadrature otherwise (offset phase included)."""
    if region.shape == "sphere":
        q = scattering_vector(k, theta)
        shift = complex(np.exp(1j * (q @ np.asarray(region.offset))))
        return shift * sphere_form_factor(2.0 * k * region.radius * math.sin(theta / 2.0))
    return form_factor_numeric(region, k, theta)


def _cos(theta):
    """cos(theta) with the rounding residue at theta = pi/2 removed, so S2 vanishes there."""
    c = np.cos(theta)
    return np.where(np.abs(c) < 1e-16, 0.0, c)


def _prefactor(region, k):
    return -1j * k**3 / (2.0 * math.pi) * (region.rri - 1.0) * region.volume


def _warn_if_invalid(region, k):
    v = validity_check(region.rri, k, region.linear_dimension)
    if not v.valid:
        warnings.warn(
            f"RGD outside validity limits: |m-1|={v.contrast:.3g}, kd|m-1|={v.phase_shift:.3g}",
            RgdValidityWarning,
            stacklevel=3,
        )
    return v


def rgd_amplitudes(particle, medium_index, wavelength_vacuum, theta, check=True):
    """``S1 = -(i k^3 / 2 pi)(m - 1) V f(theta)`` and ``S2 = S1 cos(theta)``."""
    if not 0.0 <= theta <= math.pi:
        raise DomainError("theta must lie in [0, pi]")
    k = 2.0 * math.pi * medium_index / wavelength_vacuum
    if check:
        _warn_if_invalid(particle, k)
    s1 = _prefactor(particle, k) * form_factor(particle, k, theta)
    return s1, s1 * float(_cos(theta))


def heterogeneous_amplitudes(regions, medium_index, wavelength_vacuum, theta):
    """Sum of per-region amplitudes, every phase referenced to the common origin."""
    regions = list(regions)
    if not regions:
        raise DomainError("need at least one region")
    s1 = s2 = 0j
    for region in regions:
        a1, a2 = rgd_amplitudes(region, medium_index, wavelength_vacuum, theta, check=False)
        s1 += a1
        s2 += a2
    return s1, s2


def _form_factor_grid(region, k, theta):
    if region.shape == "sphere":
        qz = k * (1.0 - np.cos(theta))
        qx = -k * np.sin(theta)
        off = np.asarray(region.offset)
        shift = np.exp(1j * (qx * off[0] + qz * off[2]))
        return shift * sphere_form_factor(2.0 * k * region.radius * np.sin(theta / 2.0))
    return np.array([form_factor_numeric(region, k, t) for t in theta])


def rgd_intensity_pattern(particle, medium_index, wavelength_vacuum, theta_grid, polarization="unpolarized"):
    """RGD ``|S|^2`` versus angle; validity failures are warned about and recorded in ``meta``."""
    theta = check_theta_grid(theta_grid)
    k = 2.0 * math.pi * medium_index / wavelength_vacuum
    validity = _warn_if_invalid(particle, k)
    s1 = _prefactor(particle, k) * _form_factor_grid(particle, k, theta)
    s2 = s1 * _cos(theta)
    meta = {"validity": validity}
    if not validity.valid:
        meta["warnings"] = ["RGD validity limits exceeded"]
    return ScatteringPattern(
        theta=theta,
        intensity=polarized_intensity(s1, s2, polarization),
        model="rgd",
        wavelength=float(wavelength_vacuum),
        medium_index=float(medium_index),
        polarization=polarization,
        meta=meta,
    )
