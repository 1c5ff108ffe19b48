"""
Simulation service: chirp-scan and phase-scan gravimetry runs, and single-pulse ladder checks.
"""
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from app.atoms import recoil_frequency, resonant_chirp_rate
from app.core.config import settings
from app.dynamics import effective_rabi, transfer_population
from app.interferometer import (
    chirp_scan,
    find_resonant_chirp,
    gravity_from_chirp,
    phase_scan,
    phase_scan_fit,
    refine_gravity,
    thermal_contrast,
)
from app.ladder import ladder_evolve
from app.models.apparatus import ApparatusConfig
from app.models.fringe import ContrastEstimate, FringeFit, FringeScan, ResonanceResult
from app.models.pulse import BraggPulse, LadderState, LadderTrajectory
from app.models.species import AtomSpecies
from app.repositories.fringe_repository import FringeCsvRepository, FringeRecordRepository
from app.repositories.report_repository import ModelRecordRepository
from app.repositories.trajectory_repository import TrajectoryCsvRepository
from app.schemas.records import FringeFitRecord, ResonanceRecord
from app.utils import config_hash, metadata_header, timed

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChirpRun:
    scans: List[FringeScan]
    resonance: Optional[ResonanceResult]
    gravity: Optional[float]


@dataclass(frozen=True)
class PhaseRun:
    scan: FringeScan
    fit: FringeFit
    gravity: float


class SimulationService:
    """Service for simulated gravity measurements."""

    def default_alpha_range(self, config: ApparatusConfig) -> Tuple[float, float]:
        centre = resonant_chirp_rate(config.species, config.gravity)
        half = settings.alpha_half_width_hz_per_s
        return centre - half, centre + half

    def run_chirp(
        self,
        config: ApparatusConfig,
        interrogation_times: Sequence[float],
        alpha_range: Optional[Tuple[float, float]] = None,
        samples: Optional[int] = None,
        contrast: float = 1.0,
    ) -> ChirpRun:
        """Fringes for each T; with two or more distinct T, also α₀ and g."""
        alpha_range = alpha_range or self.default_alpha_range(config)
        with timed() as timings:
            scans = chirp_scan(config, list(interrogation_times), alpha_range, samples, contrast)
            resonance = gravity = None
            if len(set(interrogation_times)) >= 2:
                resonance = find_resonant_chirp(scans)
                gravity = gravity_from_chirp(resonance.chirp_rate, config.species)
        logger.info("chirp run: %d scans in %d ms", len(scans), timings["total"])
        return ChirpRun(scans=scans, resonance=resonance, gravity=gravity)

    def run_phase(
        self,
        config: ApparatusConfig,
        chirp_rate: Optional[float] = None,
        points: Optional[int] = None,
        contrast: float = 1.0,
        noise: float = 0.0,
        seed: Optional[int] = None,
    ) -> PhaseRun:
        """Laser-phase fringe at a fixed chirp, its fit and the refined g."""
        if chirp_rate is None:
            chirp_rate = resonant_chirp_rate(config.species, config.gravity)
        phases = np.linspace(0.0, 2.0 * np.pi, points or settings.phase_points, endpoint=False)
        scan = phase_scan(config, chirp_rate, phases, contrast, noise=noise, seed=seed)
        fit = phase_scan_fit(scan)
        gravity = refine_gravity(fit, chirp_rate, config.order, config.interrogation_time, config.species)
        return PhaseRun(scan=scan, fit=fit, gravity=gravity)

    def contrast(self, config: ApparatusConfig, n_atoms: Optional[int] = None,
                 seed: Optional[int] = None) -> ContrastEstimate:
        return thermal_contrast(config, n_atoms, seed)

    def save_scans(self, scans: Sequence[FringeScan], config: ApparatusConfig, directory: Path,
                   record: bool = False, seed: Optional[int] = None) -> List[Path]:
        header = metadata_header(config.species.name, config_hash(config), {"seed": seed} if seed is not None else None)
        repository = FringeRecordRepository(directory) if record else FringeCsvRepository(directory)
        paths = []
        for scan in scans:
            name = f"{scan.scan_kind.value}_T{scan.metadata.interrogation_time * 1e3:g}ms"
            paths.append(repository.save(scan, name, header))
        return paths

    def save_summary(self, run: Union[ChirpRun, PhaseRun], config: ApparatusConfig, directory: Path) -> Optional[Path]:
        header = metadata_header(config.species.name, config_hash(config))
        if isinstance(run, PhaseRun):
            return ModelRecordRepository(directory, FringeFitRecord).save(
                FringeFitRecord.from_fit(run.fit), "phase_fit", header)
        if run.resonance is None:
            return None
        return ModelRecordRepository(directory, ResonanceRecord).save(
            ResonanceRecord.from_result(run.resonance, run.gravity), "resonance", header)

    def run_ladder(
        self,
        species: AtomSpecies,
        order: int,
        two_photon_rabi: float,
        detuning: float,
        duration: Optional[float] = None,
        omega_eff: Optional[float] = None,
        samples: int = 201,
    ) -> Tuple[LadderTrajectory, float]:
        """Ladder trajectory of one square pulse and the closed-form transfer it should match.

        Defaults: a π pulse of the closed-form Ω_2n, driven at ω_eff = 4nω_r.
        """
        effective = effective_rabi(order, two_photon_rabi, species)
        duration = duration or np.pi / effective
        if omega_eff is None:
            omega_eff = 4.0 * order * recoil_frequency(species)
        pulse = BraggPulse(order=order, two_photon_rabi=two_photon_rabi,
                           single_photon_detuning=detuning, duration=duration)
        half_width = order + 2
        with timed() as timings:
            trajectory = ladder_evolve(LadderState.at_rest(-half_width, half_width), pulse, omega_eff,
                                       species, samples=samples)
        logger.info("ladder run: %d steps in %d ms", trajectory.steps, timings["total"])
        return trajectory, transfer_population(effective, duration)

    def save_trajectory(self, trajectory: LadderTrajectory, species: AtomSpecies, settings_used: dict,
                        directory: Path) -> Path:
        header = metadata_header(species.name, config_hash(settings_used))
        return TrajectoryCsvRepository(directory).save(trajectory, "ladder_trajectory", header)
