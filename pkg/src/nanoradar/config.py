"""Run configuration: YAML documents validated into typed settings.

A document must name the scenario and describe the scene (source wavelength,
particle size and relative index); everything else has defaults. Unknown
keys are rejected and validation errors name the dotted path of the bad
entry. :data:`DEFAULT_DOCUMENT` is the 50 nm sphere in air lit at 428 nm.
"""
from typing import Annotated, Literal, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Discriminator, Field, Tag, ValidationError, model_validator

from . import mie, rgd
from .errors import ConfigError, DomainError
from .medium import Medium
from .photodetector import RcePdParams
from .radar import NoiseModel, PlaneWave, RadarScene

PositiveFloat = Annotated[float, Field(gt=0)]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PlaneWaveSource(_Strict):
    kind: Literal["plane_wave"] = "plane_wave"
    wavelength: PositiveFloat
    polarization: Literal["unpolarized", "parallel", "perpendicular"] = "unpolarized"


class DipoleSourceConfig(_Strict):
    kind: Literal["dipole"]
    moment: tuple[float, float, float]
    position: tuple[float, float, float]
    omega: PositiveFloat
    polarization: Literal["unpolarized", "parallel", "perpendicular"] = "unpolarized"


class ParticleConfig(_Strict):
    shape: Literal["sphere", "box"] = "sphere"
    radius: PositiveFloat | None = None
    extents: tuple[PositiveFloat, PositiveFloat, PositiveFloat] | None = None
    rri: PositiveFloat
    rri_imag: Annotated[float, Field(ge=0)] = 0.0
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    @model_validator(mode="after")
    def _shape_fields(self):
        if self.shape == "sphere" and self.radius is None:
            raise ValueError("sphere needs a radius")
        if self.shape == "box" and self.extents is None:
            raise ValueError("box needs extents")
        return self

    @property
    def m(self):
        return complex(self.rri, self.rri_imag)

    def build(self):
        if self.shape == "sphere":
            return mie.Sphere(self.radius, self.m, self.center)
        return rgd.HomogeneousRegion.box(self.extents, self.m, offset=self.center)


class MediumConfig(_Strict):
    refractive_index: Annotated[float, Field(ge=1.0)] = 1.0
    relative_permittivity: PositiveFloat | None = None

    @model_validator(mode="after")
    def _consistent(self):
        self.build()
        return self

    def build(self):
        try:
            return Medium(self.refractive_index, self.relative_permittivity)
        except DomainError as exc:
            raise ValueError(str(exc)) from None


def _source_kind(value):
    if isinstance(value, dict):
        return value.get("kind", "plane_wave")
    return getattr(value, "kind", None)


class SceneConfig(_Strict):
    source: Annotated[
        Union[Annotated[PlaneWaveSource, Tag("plane_wave")], Annotated[DipoleSourceConfig, Tag("dipole")]],
        Discriminator(_source_kind),
    ]
    particle: ParticleConfig
    medium: MediumConfig = Field(default_factory=MediumConfig)
    range: PositiveFloat = 1e-6

    def build(self):
        src = self.source
        if src.kind == "plane_wave":
            source = PlaneWave(src.wavelength, src.polarization)
        else:
            source = mie.DipoleSource(src.moment, src.position, src.omega)
        return RadarScene(source, self.particle.build(), self.medium.build(), self.range)


class GridConfig(_Strict):
    start: Annotated[float, Field(ge=0.0, le=180.0)] = 0.0
    stop: Annotated[float, Field(ge=0.0, le=180.0)] = 180.0
    count: Annotated[int, Field(ge=2)] = 181

    @model_validator(mode="after")
    def _ordered(self):
        if not self.start < self.stop:
            raise ValueError("grid start must be below stop")
        return self

    def radians(self):
        return np.radians(np.linspace(self.start, self.stop, self.count))


class NoiseConfig(_Strict):
    kind: Literal["none", "constant_floor", "gaussian"] = "none"
    level: Annotated[float, Field(ge=0)] = 0.0
    sigma: Annotated[float, Field(ge=0)] = 0.0
    seed: Annotated[int, Field(ge=0, lt=2**64)] | None = None

    def build(self):
        return NoiseModel(self.kind, self.level, self.sigma, self.seed)


class ThresholdConfig(_Strict):
    absolute: Annotated[float, Field(ge=0)] | None = None
    relative: Annotated[float, Field(gt=0, le=1)] | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.absolute is None) == (self.relative is None):
            raise ValueError("give exactly one of 'absolute' or 'relative'")
        return self


class OutputConfig(_Strict):
    path: str
    format: Literal["csv", "structured"] = "csv"


class SppConfig(_Strict):
    plasma_frequency: PositiveFloat = 1.37e16
    damping: Annotated[float, Field(ge=0)] = 0.0
    eps_inf: float = 1.0
    eps2: PositiveFloat = 1.0
    omega_start_fraction: PositiveFloat = 0.01
    omega_stop_fraction: PositiveFloat = 0.95
    count: Annotated[int, Field(ge=2)] = 200
    mode: Literal["standard", "as_printed"] = "standard"

    @model_validator(mode="after")
    def _ordered(self):
        if not self.omega_start_fraction < self.omega_stop_fraction:
            raise ValueError("omega_start_fraction must be below omega_stop_fraction")
        return self


class AntennaConfig(_Strict):
    element_count: Annotated[int, Field(ge=1)] = 4
    spacing_wavelengths: PositiveFloat = 0.25
    progressive_phase: float | Literal["end_fire"] = "end_fire"
    element: Literal["dipole", "isotropic"] = "isotropic"


class PhotodetectorConfig(_Strict):
    x_a: PositiveFloat = 1e-6
    w_n: PositiveFloat = 0.5e-6
    w_p: PositiveFloat = 0.5e-6
    v_n: PositiveFloat = 1e5
    v_p: PositiveFloat = 0.8e5
    alpha_eff: PositiveFloat = 1e6
    mu_f: Annotated[float, Field(ge=0, le=1)] = 0.4
    mu_b: Annotated[float, Field(ge=0, le=1)] = 0.2
    nu: PositiveFloat = 700e12
    power: Annotated[float, Field(ge=0)] = 1e-6
    t_stop: PositiveFloat = 40e-12
    count: Annotated[int, Field(ge=2)] = 2001
    grouping: Literal["inside", "outside"] = "inside"

    @model_validator(mode="after")
    def _params(self):
        self.params()
        return self

    def params(self):
        try:
            return RcePdParams(self.x_a, self.w_n, self.w_p, self.v_n, self.v_p, self.alpha_eff, self.mu_f, self.mu_b, self.nu)
        except DomainError as exc:
            raise ValueError(str(exc)) from None


class CompareConfig(_Strict):
    size_parameters: list[PositiveFloat] = Field(default_factory=lambda: [0.1, 0.5, 1.0])
    rri: PositiveFloat = 1.05


class RunConfig(_Strict):
    scenario: str
    scene: SceneConfig
    grid: GridConfig = Field(default_factory=GridConfig)
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    threshold: ThresholdConfig = Field(default_factory=lambda: ThresholdConfig(relative=0.5))
    look_direction_deg: Annotated[float, Field(ge=0, le=180)] = 180.0
    model: Literal["mie", "rgd"] | None = None
    outputs: list[OutputConfig] = Field(default_factory=list)
    spp: SppConfig = Field(default_factory=SppConfig)
    antenna: AntennaConfig = Field(default_factory=AntennaConfig)
    photodetector: PhotodetectorConfig = Field(default_factory=PhotodetectorConfig)
    compare: CompareConfig = Field(default_factory=CompareConfig)


DEFAULT_DOCUMENT = {
    "scenario": "small-sphere",
    "scene": {
        "source": {"kind": "plane_wave", "wavelength": 428e-9},
        "particle": {"shape": "sphere", "radius": 50e-9, "rri": 1.05},
        "medium": {"refractive_index": 1.0},
        "range": 1e-6,
    },
}


def _format_errors(exc):
    lines = []
    for err in exc.errors():
        path = ".".join(str(p) for p in err["loc"]) or "<document>"
        lines.append(f"{path}: {err['msg']}")
    return "; ".join(lines)


def parse_config(document):
    """Validate a YAML string (or an already-loaded mapping) into a :class:`RunConfig`.

    Raises :class:`ConfigError` for malformed YAML and schema violations.
    """
    if isinstance(document, str):
        try:
            data = yaml.safe_load(document)
        except yaml.YAMLError as exc:
            raise ConfigError(f"malformed document: {exc}") from None
    else:
        data = document
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("<document>: top level must be a mapping")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc)) from None


def dump_config(config):
    """Serialise to YAML; :func:`parse_config` of the result reproduces ``config``."""
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=False)
