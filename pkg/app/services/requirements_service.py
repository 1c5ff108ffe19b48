"""
Requirements service: design report and optimal-parameter table, rendered for
people (4 significant figures) and persisted for machines.
"""
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from app.models.apparatus import ApparatusConfig
from app.models.report import OptimalParameterRow, RequirementEntry, RequirementReport
from app.models.species import AtomSpecies
from app.presets import (
    TABLE_BEC_DIAMETER,
    TABLE_ORDERS,
    TABLE_PULSE_DURATIONS,
    TABLE_VELOCITY_SELECTED_DIAMETER,
)
from app.repositories.report_repository import (
    ReportRecordRepository,
    ReportTextRepository,
    TableCsvRepository,
    ModelRecordRepository,
)
from app.requirements import evaluate_requirements, optimal_parameter_table
from app.schemas.records import ParameterTableRecord
from app.utils import config_hash, metadata_header, sig4

logger = logging.getLogger(__name__)

# entry name -> (label, display unit, factor from SI)
_DISPLAY: Dict[str, Tuple[str, str, float]] = {
    "longitudinal_temperature": ("T_par_max", "uK", 1e6),
    "pulse_duration_window": ("tau_pi", "us", 1e6),
    "beam_diameter": ("w_min", "mm", 1e3),
    "wavefront_curvature": ("R_min", "km", 1e-3),
    "single_photon_detuning": ("Delta_min", "GHz", 1e-9 / (2 * math.pi)),
    "fall_time": ("t_fall_min", "ms", 1e3),
}


def format_entry(entry: RequirementEntry) -> str:
    label, unit, factor = _DISPLAY.get(entry.name, (entry.name, entry.unit, 1.0))
    status = "PASS" if entry.passed else "FAIL"
    configured = f"configured {sig4(entry.configured * factor)} {unit}"
    prefix = "2pi x " if entry.name == "single_photon_detuning" else ""
    if entry.comparison == "within":
        upper = "inf" if entry.upper_bound is None or math.isinf(entry.upper_bound) else sig4(entry.upper_bound * factor)
        line = f"{label} in [{sig4(entry.bound * factor)}, {upper}] {unit}; {configured}"
    else:
        line = f"{label} = {prefix}{sig4(entry.bound * factor)} {unit}; {configured}"
    if entry.equality_point is not None and entry.name == "longitudinal_temperature":
        line += f" (equality point {sig4(entry.equality_point * factor)} {unit})"
    return f"[{status}] {line}"


class RequirementsService:
    """Service for design requirements and the optimal-parameter table."""

    def evaluate(self, config: ApparatusConfig) -> RequirementReport:
        return evaluate_requirements(config)

    def render(self, report: RequirementReport) -> str:
        lines = [f"Requirements for {report.species}, order n = {report.order}"]
        lines.extend(format_entry(e) for e in report.entries)
        lines.extend(f"note: {note}" for note in report.notes)
        lines.append("overall: " + ("PASS" if report.passed else "FAIL"))
        return "\n".join(lines) + "\n"

    def table(
        self,
        species: AtomSpecies,
        orders: Optional[Sequence[int]] = None,
        pulse_durations: Optional[Sequence[float]] = None,
        detuning: float = 2 * math.pi * 1e9,
        bec_diameter: Optional[float] = None,
        velocity_selected_diameter: Optional[float] = None,
    ) -> List[OptimalParameterRow]:
        """Rows for the given orders and τ [1/ω_r]; the published set by default."""
        if orders is None:
            orders, pulse_durations = TABLE_ORDERS, TABLE_PULSE_DURATIONS
        return optimal_parameter_table(
            list(orders),
            list(pulse_durations),
            detuning,
            bec_diameter or TABLE_BEC_DIAMETER,
            velocity_selected_diameter or TABLE_VELOCITY_SELECTED_DIAMETER,
            species,
        )

    def save_report(self, report: RequirementReport, config: ApparatusConfig,
                    directory: Path, record: bool = False) -> List[Path]:
        header = metadata_header(config.species.name, config_hash(config))
        paths = [ReportTextRepository(directory).save(self.render(report), "requirements", header)]
        if record:
            paths.append(ReportRecordRepository(directory).save(report, "requirements", header))
        return paths

    def save_table(self, rows: List[OptimalParameterRow], species: AtomSpecies, directory: Path,
                   detuning: float, diameters: Tuple[float, float], record: bool = False) -> Path:
        settings_used = {"detuning": detuning, "diameters": list(diameters), "species": species.to_dict()}
        header = metadata_header(species.name, config_hash(settings_used))
        if record:
            table = ParameterTableRecord.from_rows(rows, detuning, diameters)
            return ModelRecordRepository(directory, ParameterTableRecord).save(table, "table1", header)
        return TableCsvRepository(directory).save(rows, "table1", header)
