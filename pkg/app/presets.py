"""
Named apparatus parameter sets: the typical design point with a velocity-selected
cloud or a BEC, and two published Bragg gravimeters.
"""
import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

from app.atoms import load_species
from app.core.errors import ConfigValidationError
from app.models.apparatus import ApparatusConfig, CloudSpec
from app.models.species import AtomSpecies, RUBIDIUM_87
from app.requirements import longitudinal_temperature_limit
from app.schemas.run_config import RunConfig

# Optimal π-pulse durations [1/ω_r] for orders 1, 5, 10, 15, 20, 25.
TABLE_ORDERS: Tuple[int, ...] = (1, 5, 10, 15, 20, 25)
TABLE_PULSE_DURATIONS: Tuple[float, ...] = (0.192, 0.086, 0.105, 0.086, 0.077, 0.072)
# Beam diameters for the two power columns [m].
TABLE_BEC_DIAMETER = 3.46e-3
TABLE_VELOCITY_SELECTED_DIAMETER = 6e-3
TABLE_DETUNING = 2 * math.pi * 1e9


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    build: Callable[[AtomSpecies], ApparatusConfig]


def _momentum_width_temperature(fraction: float, species: AtomSpecies) -> float:
    """T_∥ giving Δp = fraction·ħk."""
    return fraction ** 2 * longitudinal_temperature_limit(species)


def _typical(species: AtomSpecies) -> ApparatusConfig:
    cloud = CloudSpec(
        initial_radius=1.5e-3,
        transverse_temperature=5e-6,
        longitudinal_temperature=_momentum_width_temperature(0.1, species),
    )
    return ApparatusConfig(cloud=cloud, species=species)


def _bec(species: AtomSpecies) -> ApparatusConfig:
    cloud = CloudSpec(
        initial_radius=1.5e-3,
        transverse_temperature=0.36e-6,
        longitudinal_temperature=_momentum_width_temperature(0.14, species),
    )
    return ApparatusConfig(cloud=cloud, beam_diameter=TABLE_BEC_DIAMETER, curvature=5e3, species=species)


def _altin(species: AtomSpecies) -> ApparatusConfig:
    cloud = CloudSpec(
        initial_radius=1.5e-3,
        transverse_temperature=longitudinal_temperature_limit(species),
        longitudinal_temperature=longitudinal_temperature_limit(species),
    )
    return ApparatusConfig(
        cloud=cloud,
        order=2,
        interrogation_time=40e-3,
        first_pulse_time=2e-3,
        detuning=2 * math.pi * 3e9,
        beam_diameter=7.5e-3,
        species=species,
    )


def _debs(species: AtomSpecies) -> ApparatusConfig:
    cloud = CloudSpec(
        initial_radius=0.1e-3,
        transverse_temperature=_momentum_width_temperature(0.14, species),
        longitudinal_temperature=_momentum_width_temperature(0.14, species),
    )
    return ApparatusConfig(
        cloud=cloud,
        order=1,
        interrogation_time=3e-3,
        first_pulse_time=1e-3,
        detuning=2 * math.pi * 90e9,
        beam_diameter=3e-3,
        pi_pulse_duration=50e-6,
        species=species,
    )


PRESETS: Dict[str, Preset] = {
    p.name: p
    for p in (
        Preset("typical", "velocity-selected cloud, r0 = 1.5 mm, T_perp = 5 uK", _typical),
        Preset("bec", "BEC source, T_perp = 0.36 uK", _bec),
        Preset("altin", "2nd order, T = 40 ms, offset 2 delta_B, 3 GHz", _altin),
        Preset("debs", "1st order BEC, T = 3 ms, offset delta_B, 90 GHz", _debs),
    )
}


def preset_names() -> List[str]:
    return sorted(PRESETS)


def get_preset(name: str, species: AtomSpecies = RUBIDIUM_87) -> ApparatusConfig:
    try:
        preset = PRESETS[name]
    except KeyError:
        raise ConfigValidationError("preset", f"unknown preset {name!r}; choose from {preset_names()}") from None
    return preset.build(species)


def resolve_apparatus(run: RunConfig, species: Optional[AtomSpecies] = None) -> ApparatusConfig:
    """Preset for the run, with the run's apparatus section applied on top."""
    species = species or load_species(run.species, use_default=True)
    config = get_preset(run.preset, species)
    cloud_changes = run.apparatus.cloud.model_dump(exclude_unset=True, exclude_none=True)
    try:
        cloud = replace(config.cloud, **cloud_changes)
        return config.with_updates(cloud=cloud, **run.apparatus.overrides())
    except ConfigValidationError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigValidationError("apparatus", str(e)) from e
