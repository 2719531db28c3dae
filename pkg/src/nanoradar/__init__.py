"""Nanoscale radar simulation toolkit.

Scattering by nanoparticles (Lorenz-Mie and Rayleigh-Gans-Debye), surface
plasmon polariton dispersion, optical antenna figures of merit, an RCE
photodetector transient model and threshold detection of the echo.

Set ``NANORADAR_DISABLE_NUMBA=1`` before import to run the pure-numpy kernels.
"""
from ._accel import backend_name
from .errors import (
    ConfigError,
    DomainError,
    NanoradarError,
    NumericalError,
    PoleError,
    UnsupportedConfigurationError,
)
from .medium import AIR, Medium
from .mie import DipoleSource, Sphere, lorenz_mie_coefficients, mie_intensity_pattern
from .pattern import ScatteringPattern
from .radar import NoiseModel, PlaneWave, RadarScene, run_pipeline
from .rgd import HomogeneousRegion, rgd_intensity_pattern

__version__ = "0.1.0"

__all__ = [
    "AIR",
    "ConfigError",
    "DipoleSource",
    "DomainError",
    "HomogeneousRegion",
    "Medium",
    "NanoradarError",
    "NoiseModel",
    "NumericalError",
    "PlaneWave",
    "PoleError",
    "RadarScene",
    "ScatteringPattern",
    "Sphere",
    "UnsupportedConfigurationError",
    "backend_name",
    "lorenz_mie_coefficients",
    "mie_intensity_pattern",
    "rgd_intensity_pattern",
    "run_pipeline",
]
