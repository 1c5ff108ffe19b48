"""
Atom species model: constants of the atom and of the driving light.
"""
import math
from dataclasses import dataclass, fields, asdict
from typing import Any, Dict

from app.core.errors import SpeciesValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class AtomSpecies:
    """Immutable species record. All frequencies are angular [rad/s], SI otherwise."""

    name: str
    mass: float                   # kg
    wavenumber: float             # single-beam k, rad/m
    linewidth: float              # Γ, rad/s
    hyperfine_splitting: float    # ω_eg, rad/s
    saturation_intensity: float   # W/m²

    def __post_init__(self) -> None:
        if not self.name:
            raise SpeciesValidationError("name", "must not be empty")
        for f in fields(self):
            if f.name == "name":
                continue
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0:
                raise SpeciesValidationError(f.name, f"must be a finite positive number, got {value!r}")

    @property
    def wavelength(self) -> float:
        return TWO_PI / self.wavenumber

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_file_fields(self) -> Dict[str, Any]:
        """Fields in the units of the species file contract."""
        return {
            "name": self.name,
            "mass_kg": self.mass,
            "wavelength_nm": self.wavelength * 1e9,
            "linewidth_hz": self.linewidth / TWO_PI,
            "hyperfine_ghz": self.hyperfine_splitting / TWO_PI / 1e9,
            "isat_mw_cm2": self.saturation_intensity / 10.0,
        }


# 87Rb D2 line. I_sat is fitted so that the n=1 optimal-parameter row gives
# 18.0 mW/cm² at Δ = 2π×1 GHz.
RUBIDIUM_87 = AtomSpecies(
    name="Rb87",
    mass=1.443160648e-25,
    wavenumber=TWO_PI / 780.241e-9,
    linewidth=TWO_PI * 6.06e6,
    hyperfine_splitting=TWO_PI * 6.834682610904e9,
    saturation_intensity=26.8,
)

BUILTIN_SPECIES: Dict[str, AtomSpecies] = {
    "builtin": RUBIDIUM_87,
    "rb87": RUBIDIUM_87,
}
