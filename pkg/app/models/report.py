"""
Requirement report and optimal-parameter table models.
"""
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional


@dataclass(frozen=True)
class RequirementEntry:
    """A single design bound checked against the configured value."""

    name: str
    bound: float
    configured: float
    passed: bool
    formula: str
    unit: str                 # SI unit of bound/configured
    comparison: str           # ">=", "<=" or "within"
    upper_bound: Optional[float] = None   # second edge of a window
    equality_point: Optional[float] = None  # raw "≪" bound before the margin

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class RequirementReport:
    entries: List[RequirementEntry]
    species: str
    order: int
    notes: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def entry(self, name: str) -> RequirementEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "species": self.species,
            "order": self.order,
            "passed": self.passed,
            "entries": [e.to_dict() for e in self.entries],
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class OptimalParameterRow:
    """One diffraction order of the optimal-laser-parameter table."""

    order: int
    pulse_duration: float       # τ in units of 1/ω_r
    two_photon_rabi: float      # Ω₂ in units of ω_r
    effective_rabi: float       # Ω_2n in units of ω_r
    intensity: float            # W/m²
    power_bec: float            # W
    power_velocity_selected: float  # W
    spontaneous_loss: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class PulseWindow:
    """Admissible pulse durations τ_min < τ < τ_max from the momentum-width bound."""

    tau_min: float   # s
    tau_max: float   # s

    @property
    def empty(self) -> bool:
        # open interval; equality within rounding counts as empty
        return self.tau_min >= self.tau_max * (1.0 - 1e-12)

    @property
    def ratio(self) -> float:
        return self.tau_max / self.tau_min


@dataclass(frozen=True)
class WavefrontError:
    """Curvature phase of the three pulses and its equivalent acceleration bias."""

    phase: float    # rad
    bias: float     # m/s²
