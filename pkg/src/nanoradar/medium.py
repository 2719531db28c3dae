import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Medium:
    """Lossless background medium. ``relative_permittivity`` defaults to ``n**2``."""

    refractive_index: float = 1.0
    relative_permittivity: float | None = None

    def __post_init__(self):
        n = float(self.refractive_index)
        if not n >= 1.0:
            raise DomainError(f"refractive_index must be >= 1, got {n}")
        eps = self.relative_permittivity
        if eps is None:
            object.__setattr__(self, "relative_permittivity", n * n)
        elif abs(eps - n * n) > 1e-12 * max(1.0, n * n):
            raise DomainError(f"relative_permittivity {eps} inconsistent with n**2 = {n * n}")

    def wavenumber(self, wavelength_vacuum):
        """k = 2 pi n / lambda0 in the medium."""
        return 2.0 * math.pi * self.refractive_index / wavelength_vacuum


AIR = Medium(1.0)
