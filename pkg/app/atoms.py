"""
Species registry and the constants derived from it.

Frequencies are angular [rad/s]; chirp rates cross the API in ordinary
frequency [Hz/s].
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Mapping

import yaml
from pydantic import ValidationError
from scipy.constants import hbar, k as BOLTZMANN

from app.core.errors import PersistenceError, SpeciesValidationError
from app.models.species import AtomSpecies, BUILTIN_SPECIES, RUBIDIUM_87, TWO_PI
from app.schemas.species import SpeciesFile

logger = logging.getLogger(__name__)


def recoil_frequency(species: AtomSpecies) -> float:
    """ω_r = ħk²/(2M)."""
    return hbar * species.wavenumber ** 2 / (2.0 * species.mass)


def bragg_bandwidth(species: AtomSpecies) -> float:
    """δ_B = 4ω_r = 2ħk²/M, the first-order Bragg resonance offset."""
    return 4.0 * recoil_frequency(species)


def recoil_velocity(species: AtomSpecies) -> float:
    """ħk/M."""
    return hbar * species.wavenumber / species.mass


def momentum_width(temperature: float, species: AtomSpecies) -> float:
    """Thermal momentum spread √(M k_B T)."""
    return math.sqrt(species.mass * BOLTZMANN * temperature)


def resonant_chirp_rate(species: AtomSpecies, g: float) -> float:
    """α₀ = kg/π [Hz/s], the chirp that nulls the gravity phase."""
    return species.wavenumber * g / math.pi


def species_from_file_fields(data: SpeciesFile) -> AtomSpecies:
    return AtomSpecies(
        name=data.name,
        mass=data.mass_kg,
        wavenumber=TWO_PI / (data.wavelength_nm * 1e-9),
        linewidth=TWO_PI * data.linewidth_hz,
        hyperfine_splitting=TWO_PI * data.hyperfine_ghz * 1e9,
        saturation_intensity=data.isat_mw_cm2 * 10.0,
    )


def _read_source(source: str | Path) -> Mapping[str, Any]:
    path = Path(source)
    if not path.is_file():
        raise PersistenceError(path, "species file not found")
    try:
        loaded = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as e:
        raise PersistenceError(path, f"cannot parse species file: {e}") from e
    if loaded is None:
        return {}
    if not isinstance(loaded, Mapping):
        raise SpeciesValidationError("<root>", "species file must be a key-value mapping")
    return loaded


def load_species(
    source: str | Path | Mapping[str, Any] | None = None,
    *,
    use_default: bool = False,
) -> AtomSpecies:
    """Load and validate a species.

    `source` is None, "builtin"/"rb87", a YAML file path or a mapping using the
    species-file keys. With `use_default`, missing keys are taken from the
    bundled 87Rb entry, so a file may override only the wavelength.
    """
    if source is None or (isinstance(source, str) and source.lower() in BUILTIN_SPECIES):
        if source is None and not use_default:
            raise SpeciesValidationError("<source>", "no species source given")
        return BUILTIN_SPECIES.get(str(source).lower(), RUBIDIUM_87)

    raw = dict(source) if isinstance(source, Mapping) else dict(_read_source(source))
    if use_default:
        raw = {**RUBIDIUM_87.to_file_fields(), **raw}
    try:
        data = SpeciesFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise SpeciesValidationError(field, first["msg"]) from e

    species = species_from_file_fields(data)
    logger.debug("loaded species %s: ω_r = %.6g rad/s", species.name, recoil_frequency(species))
    return species
