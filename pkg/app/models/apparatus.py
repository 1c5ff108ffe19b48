"""
Atom cloud and apparatus configuration models.
"""
import math
from dataclasses import dataclass, field, asdict, replace
from typing import Any, Dict

from scipy.constants import k as BOLTZMANN

from app.core.config import settings
from app.core.errors import ConfigValidationError
from app.models.species import AtomSpecies, RUBIDIUM_87

# 1e-9 g with g = 9.8 m/s², the "sub-µGal" convention of the requirement bounds.
NANO_G = 9.8e-9
# SI microgal.
MICRO_GAL = 1e-8


def _require(name: str, value: float, *, allow_zero: bool = False) -> None:
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigValidationError(name, f"must be a finite number, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = "non-negative" if allow_zero else "positive"
        raise ConfigValidationError(name, f"must be {bound}, got {value!r}")


@dataclass(frozen=True)
class CloudSpec:
    """Atom cloud at release: 1/e radius and the two effective temperatures."""

    initial_radius: float             # r₀, m
    transverse_temperature: float     # T_⊥, K
    longitudinal_temperature: float   # T_∥, K

    def __post_init__(self) -> None:
        _require("initial_radius", self.initial_radius)
        _require("transverse_temperature", self.transverse_temperature)
        _require("longitudinal_temperature", self.longitudinal_temperature)

    def transverse_velocity(self, species: AtomSpecies) -> float:
        """v_⊥ = √(k_B T_⊥ / M)."""
        return math.sqrt(BOLTZMANN * self.transverse_temperature / species.mass)

    def longitudinal_momentum_width(self, species: AtomSpecies) -> float:
        """Δp_∥ = √(M k_B T_∥)."""
        return math.sqrt(species.mass * BOLTZMANN * self.longitudinal_temperature)


@dataclass(frozen=True)
class ApparatusConfig:
    """Geometry, timing and laser parameters of one gravimeter design."""

    cloud: CloudSpec
    order: int = 1
    interrogation_time: float = 50e-3          # T, s
    first_pulse_time: float = 20e-3            # t₀, s
    detuning: float = 2 * math.pi * 1e9        # Δ, rad/s
    beam_diameter: float = 6e-3                # w (1/e²), m
    curvature: float = 50e3                    # R, m
    target_accuracy: float = NANO_G            # m/s²
    loss_budget: float = settings.loss_budget  # N_s_max
    gravity: float = 9.8                       # g, m/s²
    pi_pulse_duration: float = 100e-6          # τ_π, s
    species: AtomSpecies = field(default=RUBIDIUM_87)

    def __post_init__(self) -> None:
        if isinstance(self.order, bool) or not isinstance(self.order, int) or self.order < 1:
            raise ConfigValidationError("order", f"must be an integer >= 1, got {self.order!r}")
        _require("interrogation_time", self.interrogation_time)
        _require("first_pulse_time", self.first_pulse_time, allow_zero=True)
        _require("detuning", self.detuning)
        _require("beam_diameter", self.beam_diameter)
        _require("curvature", self.curvature)
        _require("target_accuracy", self.target_accuracy)
        _require("gravity", self.gravity)
        _require("pi_pulse_duration", self.pi_pulse_duration)
        if not 0 < self.loss_budget < 1:
            raise ConfigValidationError("loss_budget", f"must lie in (0, 1), got {self.loss_budget!r}")

    def with_updates(self, **changes: Any) -> "ApparatusConfig":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
