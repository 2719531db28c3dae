"""Angle-resolved scattering intensity shared by the Mie, RGD and radar modules."""
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError

POLARIZATIONS = ("unpolarized", "parallel", "perpendicular")


@dataclass(frozen=True)
class ScatteringPattern:
    """Sampled intensity versus scattering angle.

    ``theta`` is in radians with 0 the forward direction. ``intensity`` is
    ``|S|^2`` (far-field normalised) for the scattering modules and the
    range-scaled ratio ``|S|^2 / (k R)^2`` once the radar module has applied
    the 1/R^2 budget. ``meta`` holds free-form provenance (range, warnings...).
    """

    theta: np.ndarray
    intensity: np.ndarray
    model: str
    wavelength: float
    medium_index: float
    polarization: str = "unpolarized"
    meta: dict = field(default_factory=dict)

    def with_intensity(self, intensity, **meta):
        merged = dict(self.meta)
        merged.update(meta)
        return replace(self, intensity=np.asarray(intensity, dtype=float), meta=merged)

    @property
    def degrees(self):
        return np.degrees(self.theta)


def check_theta_grid(theta_grid):
    theta = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if theta.size == 0:
        raise DomainError("theta grid is empty")
    if np.any(theta < 0.0) or np.any(theta > np.pi) or not np.all(np.isfinite(theta)):
        raise DomainError("theta grid values must lie in [0, pi]")
    return theta


def polarized_intensity(s1, s2, polarization):
    """perpendicular -> |S1|^2, parallel -> |S2|^2, unpolarized -> their mean."""
    i1 = np.abs(s1) ** 2
    i2 = np.abs(s2) ** 2
    if polarization == "perpendicular":
        return i1
    if polarization == "parallel":
        return i2
    if polarization == "unpolarized":
        return 0.5 * (i1 + i2)
    raise DomainError(f"unknown polarization {polarization!r}; expected one of {POLARIZATIONS}")
