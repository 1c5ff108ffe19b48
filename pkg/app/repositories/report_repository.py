"""
Requirement reports, optimal-parameter tables and run summaries.
"""
import io
from pathlib import Path
from typing import Any, List, Mapping, Type, TypeVar

import pandas as pd
from pydantic import BaseModel

from app.models.report import OptimalParameterRow, RequirementReport
from app.repositories.base import BaseRepository, CsvRepository, RecordRepository
from app.schemas.records import RequirementReportRecord
from app.utils import header_lines

M = TypeVar("M", bound=BaseModel)

# column -> (row field, factor from SI to the column unit)
TABLE_COLUMNS = {
    "order": ("order", 1),
    "pulse_duration_per_wr": ("pulse_duration", 1.0),
    "two_photon_rabi_wr": ("two_photon_rabi", 1.0),
    "effective_rabi_wr": ("effective_rabi", 1.0),
    "intensity_mw_cm2": ("intensity", 0.1),
    "power_bec_mw": ("power_bec", 1e3),
    "power_velocity_selected_mw": ("power_velocity_selected", 1e3),
    "spontaneous_loss": ("spontaneous_loss", 1.0),
}


class ReportTextRepository(BaseRepository[str]):
    """Human-readable report, header as comment lines."""

    def serialize(self, entity: str, header: Mapping[str, Any]) -> str:
        return "\n".join(header_lines(header)) + "\n\n" + entity.rstrip("\n") + "\n"

    def deserialize(self, text: str) -> str:
        return "\n".join(line for line in text.splitlines() if not line.startswith("# ")).strip() + "\n"


class ReportRecordRepository(RecordRepository[RequirementReport]):
    def serialize(self, entity: RequirementReport, header: Mapping[str, Any]) -> str:
        return self.wrap(RequirementReportRecord.from_report(entity).model_dump_json(indent=2), header)

    def deserialize(self, text: str) -> RequirementReport:
        _, record = self.unwrap(text)
        return RequirementReportRecord.model_validate_json(record).to_report()


class TableCsvRepository(CsvRepository[List[OptimalParameterRow]]):
    """Optimal-parameter table in recoil units, mW/cm² and mW."""

    def serialize(self, entity: List[OptimalParameterRow], header: Mapping[str, Any]) -> str:
        frame = pd.DataFrame(
            [{col: getattr(row, name) * factor for col, (name, factor) in TABLE_COLUMNS.items()} for row in entity],
            columns=list(TABLE_COLUMNS),
        )
        return self.with_header(frame.to_csv(index=False, float_format="%.17g"), header)

    def deserialize(self, text: str) -> List[OptimalParameterRow]:
        _, body = self.split_header(text)
        frame = pd.read_csv(io.StringIO(body), float_precision="round_trip")
        rows = []
        for record in frame.to_dict(orient="records"):
            values = {name: record[col] / factor for col, (name, factor) in TABLE_COLUMNS.items()}
            values["order"] = int(record["order"])
            rows.append(OptimalParameterRow(**values))
        return rows


class ModelRecordRepository(RecordRepository[M]):
    """Any pydantic record (fits, resonance summaries, tables)."""

    def __init__(self, directory: Path, model: Type[M]):
        super().__init__(directory)
        self.model = model

    def serialize(self, entity: M, header: Mapping[str, Any]) -> str:
        return self.wrap(entity.model_dump_json(indent=2), header)

    def deserialize(self, text: str) -> M:
        _, record = self.unwrap(text)
        return self.model.model_validate_json(record)
