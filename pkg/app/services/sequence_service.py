"""
Sequence service: builds, validates and exports the timing program.
"""
import logging
import math
from pathlib import Path
from typing import List, Optional, Tuple

from app.dynamics import two_photon_rabi_for
from app.models.apparatus import ApparatusConfig
from app.models.schedule import ScheduleViolation, TimingSchedule
from app.repositories.schedule_repository import ScheduleCsvRepository, ScheduleRecordRepository
from app.sequencer import build_schedule, validate_schedule
from app.utils import config_hash, metadata_header

logger = logging.getLogger(__name__)


class SequenceService:
    """Service for interferometer timing schedules."""

    def rabi_for(self, config: ApparatusConfig) -> float:
        """Ω₂ that makes the configured τ_π a π pulse at the configured order."""
        return two_photon_rabi_for(config.order, math.pi / config.pi_pulse_duration, config.species)

    def build(self, config: ApparatusConfig,
              two_photon_rabi: Optional[float] = None) -> Tuple[TimingSchedule, List[ScheduleViolation]]:
        schedule = build_schedule(config, two_photon_rabi or self.rabi_for(config))
        violations = validate_schedule(schedule, config)
        for v in violations:
            logger.warning("schedule violation %s: %s", v.code, v.message)
        return schedule, violations

    def save(self, schedule: TimingSchedule, config: ApparatusConfig, directory: Path) -> List[Path]:
        """CSV table plus the re-importable record."""
        header = metadata_header(config.species.name, config_hash(config))
        return [
            ScheduleCsvRepository(directory).save(schedule, "schedule", header),
            ScheduleRecordRepository(directory).save(schedule, "schedule", header),
        ]

    def load(self, path: Path) -> TimingSchedule:
        return ScheduleRecordRepository(Path(path).parent).load(path)
