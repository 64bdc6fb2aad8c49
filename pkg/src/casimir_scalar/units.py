"""Physical constants and conversion between SI and reduced quantities.

All constants are CODATA 2018 and live only here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import DimensionlessPoint, ForceValue
from .errors import DomainError

__all__ = [
    "HBAR",
    "C",
    "HBAR_C",
    "EV_MASS",
    "ELECTRON_MASS",
    "UnitSystem",
    "MassUnit",
    "PhysicalInput",
    "PhysicalForce",
    "reduce",
    "to_physical",
    "pressure_scale",
]

HBAR = 1.054571817e-34  # J s
C = 299792458.0  # m / s
HBAR_C = HBAR * C  # J m
EV_MASS = 1.78266192e-36  # kg per eV/c^2
ELECTRON_MASS = 9.1093837015e-31  # kg


class UnitSystem(enum.Enum):
    NATURAL = "natural"  # hbar = c = 1; a and m in reciprocal units of each other
    SI = "si"


class MassUnit(enum.Enum):
    KG = "kg"
    EV = "eV"


@dataclass(frozen=True)
class PhysicalInput:
    """Plate separation, field mass and dimension.

    ``thickness`` is carried for completeness; the force does not depend on it.
    In natural units ``mass`` and ``separation`` are plain numbers with
    hbar = c = 1.
    """

    separation: float
    mass: float
    dim: int
    unit_system: UnitSystem = UnitSystem.SI
    mass_unit: MassUnit = MassUnit.KG
    thickness: float = 0.0

    def __post_init__(self):
        if not (self.separation > 0.0) or not math.isfinite(self.separation):
            raise DomainError(f"separation must be positive, got {self.separation!r}")
        if not (self.mass >= 0.0) or not math.isfinite(self.mass):
            raise DomainError(f"mass must be >= 0, got {self.mass!r}")
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim!r}")
        if self.thickness < 0.0:
            raise DomainError("thickness must be >= 0")

    @property
    def mass_kg(self) -> float:
        if self.mass_unit is MassUnit.EV:
            return self.mass * EV_MASS
        return self.mass


def reduce(inp: PhysicalInput) -> DimensionlessPoint:
    """Reduced mass mu = m c a / hbar."""
    if inp.unit_system is UnitSystem.NATURAL:
        mu = inp.mass * inp.separation
    else:
        mu = inp.mass_kg * C * inp.separation / HBAR
    return DimensionlessPoint(int(inp.dim), mu)


def pressure_scale(separation: float, dim: int, unit_system: UnitSystem = UnitSystem.SI) -> float:
    """hbar c / a^(D+1), the unit in which the dimensionless force is expressed."""
    hc = HBAR_C if unit_system is UnitSystem.SI else 1.0
    return hc / separation ** (dim + 1)


@dataclass(frozen=True)
class PhysicalForce:
    """Pressure on a plate, N m^-(D-1) in SI, with the dimensionless value it came from."""

    pressure: float
    dimensionless_f: float


def to_physical(f: ForceValue | float, inp: PhysicalInput) -> PhysicalForce:
    """pressure = f hbar c / a^(D+1)."""
    value = f.f if isinstance(f, ForceValue) else float(f)
    return PhysicalForce(value * pressure_scale(inp.separation, inp.dim, inp.unit_system), value)
