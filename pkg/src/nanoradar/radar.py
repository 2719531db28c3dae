"""Nanoradar detection pipeline: scene -> echo pattern -> noise -> threshold.

The echo at range ``R`` is the far-field ``|S|^2`` divided by ``(k R)^2``,
i.e. scattered intensity relative to the incident intensity. Detection keeps
every angular run above a threshold and reports the half-width ``delta`` of
the run containing the look direction (backscatter by default).
"""
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import mie, rgd
from .errors import DomainError, NanoradarError, UnsupportedConfigurationError
from .medium import Medium
from .pattern import POLARIZATIONS, ScatteringPattern, check_theta_grid
from .photodetector import photocurrent_series

MODELS = ("mie", "rgd")
NOISE_KINDS = ("none", "constant_floor", "gaussian")


@dataclass(frozen=True)
class PlaneWave:
    wavelength: float
    polarization: str = "unpolarized"

    def __post_init__(self):
        if not self.wavelength > 0:
            raise DomainError("wavelength must be positive")
        if self.polarization not in POLARIZATIONS:
            raise DomainError(f"polarization must be one of {POLARIZATIONS}")


@dataclass(frozen=True)
class RadarScene:
    """Emitter, particle, background medium and emitter-to-particle range.

    A :class:`~nanoradar.mie.DipoleSource` emitter is treated as a local plane
    wave at the particle with vacuum wavelength ``2 pi c / omega``.
    """

    source: object
    particle: object
    medium: Medium = field(default_factory=Medium)
    range: float = 1e-6

    def __post_init__(self):
        if not self.range > 0:
            raise DomainError("range must be positive")
        if not isinstance(self.particle, (mie.Sphere, rgd.HomogeneousRegion)):
            raise DomainError("particle must be a Sphere or a HomogeneousRegion")
        if isinstance(self.source, mie.DipoleSource):
            center, size = _particle_center_and_size(self.particle)
            if np.linalg.norm(np.asarray(self.source.position) - center) <= size:
                raise DomainError("dipole source lies inside the particle")
        elif not isinstance(self.source, PlaneWave):
            raise DomainError("source must be a PlaneWave or a DipoleSource")

    @property
    def wavelength(self):
        if isinstance(self.source, PlaneWave):
            return self.source.wavelength
        return self.source.wavelength_vacuum

    @property
    def polarization(self):
        return getattr(self.source, "polarization", "unpolarized")

    @property
    def k(self):
        return self.medium.wavenumber(self.wavelength)


def _particle_center_and_size(particle):
    if isinstance(particle, mie.Sphere):
        return np.asarray(particle.center), particle.radius
    return np.asarray(particle.offset), 0.5 * particle.linear_dimension


@dataclass(frozen=True)
class NoiseModel:
    kind: str = "none"
    level: float = 0.0
    sigma: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise DomainError(f"noise kind must be one of {NOISE_KINDS}")
        if self.level < 0 or self.sigma < 0:
            raise DomainError("noise level and sigma must be >= 0")


@dataclass(frozen=True)
class ModelSelection:
    """Which scattering model a scene uses and why."""

    model: str
    validity: rgd.RgdValidity
    reason: str
    forced: bool = False

    def to_dict(self):
        v = self.validity
        return {
            "model": self.model,
            "reason": self.reason,
            "forced": self.forced,
            "rgd_valid": v.valid,
            "contrast": v.contrast,
            "phase_shift": v.phase_shift,
            "contrast_margin": 1.0 - v.contrast / v.contrast_limit,
            "phase_margin": 1.0 - v.phase_shift / v.phase_limit,
        }


@dataclass(frozen=True)
class DetectionReport:
    threshold: float
    intervals: tuple
    delta: float
    detected: bool
    look_direction: float = math.pi

    def to_dict(self):
        return {
            "threshold": self.threshold,
            "intervals_deg": [[math.degrees(lo), math.degrees(hi)] for lo, hi in self.intervals],
            "delta_degrees": math.degrees(self.delta),
            "detected": self.detected,
            "look_direction_deg": math.degrees(self.look_direction),
        }


class PipelineResult(NamedTuple):
    pattern: ScatteringPattern
    report: DetectionReport
    selection: ModelSelection


def _as_region(particle):
    if isinstance(particle, rgd.HomogeneousRegion):
        return particle
    return rgd.HomogeneousRegion.sphere(particle.radius, particle.rri, offset=particle.center)


def _as_sphere(particle):
    if isinstance(particle, mie.Sphere):
        return particle
    if particle.shape == "sphere":
        return mie.Sphere(particle.radius, particle.rri, particle.offset)
    return None


def select_model(scene, model=None):
    """RGD when both validity conditions hold, otherwise Mie (spheres only).

    ``model`` forces a choice; forcing Mie on a non-spherical particle raises.
    """
    region = _as_region(scene.particle)
    validity = rgd.validity_check(region.rri, scene.k, region.linear_dimension)
    sphere = _as_sphere(scene.particle)
    if model is not None:
        if model not in MODELS:
            raise DomainError(f"model must be one of {MODELS}")
        if model == "mie" and sphere is None:
            raise UnsupportedConfigurationError("Mie requires a spherical particle")
        return ModelSelection(model, validity, "forced by caller", forced=True)
    if validity.valid:
        return ModelSelection("rgd", validity, "RGD validity conditions satisfied")
    if sphere is None:
        raise UnsupportedConfigurationError(
            "particle fails the RGD validity conditions and is not a sphere, so Mie cannot be used"
        )
    return ModelSelection("mie", validity, "RGD validity conditions violated; sphere handled by Mie")


def echo_pattern(scene, theta_grid, polarization=None, model=None):
    """Received echo ``|S|^2 / (k R)^2`` versus scattering angle."""
    pol = polarization or scene.polarization
    selection = select_model(scene, model)
    n_med = scene.medium.refractive_index
    if selection.model == "mie":
        base = mie.mie_intensity_pattern(_as_sphere(scene.particle), n_med, scene.wavelength, theta_grid, pol)
    else:
        with warnings.catch_warnings():
            # a forced RGD run outside its regime is recorded in meta instead
            warnings.simplefilter("ignore", rgd.RgdValidityWarning)
            base = rgd.rgd_intensity_pattern(_as_region(scene.particle), n_med, scene.wavelength, theta_grid, pol)
    scale = 1.0 / (scene.k * scene.range) ** 2
    return base.with_intensity(base.intensity * scale, range=scene.range, selection=selection)


def apply_noise(pattern, noise):
    """Add the noise model to the echo; Gaussian draws use a generator owned by this call."""
    if noise.kind == "none":
        return pattern
    if noise.kind == "constant_floor":
        return pattern.with_intensity(pattern.intensity + noise.level, noise=noise)
    rng = np.random.default_rng(noise.seed)
    noisy = pattern.intensity + rng.normal(0.0, noise.sigma, size=pattern.intensity.shape)
    return pattern.with_intensity(np.clip(noisy, 0.0, None), noise=noise)


def _crossing(t0, t1, y0, y1, level):
    if y1 == y0:
        return t0
    return t0 + (level - y0) * (t1 - t0) / (y1 - y0)


def threshold_detect(pattern, threshold, look_direction=math.pi):
    """Angular intervals with intensity >= threshold, and the half-width around the look direction.

    Interval endpoints are refined by linear interpolation between the last
    node above and the first node below the threshold; runs touching the ends
    of the grid stop at the grid ends.
    """
    if not threshold >= 0:
        raise DomainError("threshold must be >= 0")
    theta = np.asarray(pattern.theta, dtype=float)
    y = np.asarray(pattern.intensity, dtype=float)
    if theta.size > 1 and np.any(np.diff(theta) <= 0):
        raise DomainError("pattern angles must be strictly increasing")
    above = y >= threshold
    intervals = []
    i, n = 0, theta.size
    while i < n:
        if not above[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and above[j + 1]:
            j += 1
        lo = theta[i] if i == 0 else _crossing(theta[i - 1], theta[i], y[i - 1], y[i], threshold)
        hi = theta[j] if j == n - 1 else _crossing(theta[j], theta[j + 1], y[j], y[j + 1], threshold)
        intervals.append((float(lo), float(hi)))
        i = j + 1
    delta, detected = 0.0, False
    for lo, hi in intervals:
        if lo <= look_direction <= hi:
            delta, detected = 0.5 * (hi - lo), True
            break
    return DetectionReport(float(threshold), tuple(intervals), delta, detected, float(look_direction))


def _staged(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except NanoradarError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def run_pipeline(
    scene,
    theta_grid,
    noise=None,
    threshold=0.0,
    look_direction=math.pi,
    polarization=None,
    model=None,
    relative_threshold=False,
):
    """echo_pattern -> apply_noise -> threshold_detect.

    With ``relative_threshold`` the threshold is a fraction in (0, 1] of the
    noisy pattern's maximum. Errors carry ``stage`` naming the failing step.
    """
    noise = noise or NoiseModel()
    theta = _staged("grid", check_theta_grid, theta_grid)
    echo = _staged("echo", echo_pattern, scene, theta, polarization, model)
    noisy = _staged("noise", apply_noise, echo, noise)
    level = threshold
    if relative_threshold:
        if not 0.0 < threshold <= 1.0:
            err = DomainError("relative threshold must lie in (0, 1]")
            err.stage = "detect"
            raise err
        level = threshold * float(np.max(noisy.intensity))
    report = _staged("detect", threshold_detect, noisy, level, look_direction)
    return PipelineResult(noisy, report, echo.meta["selection"])


def echo_to_photocurrent(pattern, collection_solid_angle, aperture_center, pd, t_grid, power_scale=1.0):
    """Photocurrent of a detector collecting the echo over a small aperture.

    ``P_i = Omega * I(aperture_center) * power_scale`` with ``I`` linearly
    interpolated on the pattern grid. ``power_scale`` converts the pattern's
    relative intensity to watts (incident intensity times the range-squared
    area); the default 1 treats the pattern itself as W/sr.
    """
    if not collection_solid_angle > 0:
        raise DomainError("collection solid angle must be positive")
    theta = pattern.theta
    if not theta[0] <= aperture_center <= theta[-1]:
        raise DomainError("aperture centre lies outside the pattern grid")
    intensity = float(np.interp(aperture_center, theta, pattern.intensity))
    power = collection_solid_angle * intensity * power_scale
    trace = photocurrent_series(t_grid, power, pd)
    trace.meta.update(aperture_center=aperture_center, solid_angle=collection_solid_angle)
    return trace
