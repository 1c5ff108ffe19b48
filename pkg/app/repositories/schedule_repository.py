"""
Schedule files: CSV event table or full-precision JSON record.
"""
from typing import Any, Mapping

from app.models.schedule import TimingSchedule
from app.repositories.base import CsvRepository, RecordRepository
from app.sequencer import CSV_UNITS, ScheduleFormat, export_schedule, import_schedule, schedule_frame


class ScheduleCsvRepository(CsvRepository[TimingSchedule]):
    """Write-only in practice: the CSV drops Rabi frequency and metadata types."""

    def serialize(self, entity: TimingSchedule, header: Mapping[str, Any]) -> str:
        header = dict(header, order=entity.order, units=CSV_UNITS)
        return self.with_header(schedule_frame(entity).to_csv(index=False, float_format="%.17g"), header)

    def deserialize(self, text: str) -> TimingSchedule:
        raise ValueError("schedule CSV files cannot be re-imported; use the record format")


class ScheduleRecordRepository(RecordRepository[TimingSchedule]):
    def serialize(self, entity: TimingSchedule, header: Mapping[str, Any]) -> str:
        return self.wrap(export_schedule(entity, ScheduleFormat.RECORD), header)

    def deserialize(self, text: str) -> TimingSchedule:
        _, record = self.unwrap(text)
        return import_schedule(record, ScheduleFormat.RECORD)
