"""
Fringe scan files: `x, P1, P2` CSV with the scan metadata in the header, or JSON record.
"""
import io
from typing import Any, Mapping

import pandas as pd

from app.models.fringe import FringeMetadata, FringeScan, ScanKind
from app.repositories.base import CsvRepository, RecordRepository
from app.schemas.records import FringeMetadataRecord, FringeScanRecord

FRINGE_COLUMNS = ["x", "P1", "P2"]


class FringeCsvRepository(CsvRepository[FringeScan]):
    def serialize(self, entity: FringeScan, header: Mapping[str, Any]) -> str:
        # scan metadata owns its keys; a run-level seed must not leak into it
        scan_header = {
            **{k: v for k, v in header.items() if k not in FringeMetadataRecord.model_fields},
            "scan_kind": entity.scan_kind.value,
            **{k: v for k, v in entity.metadata.to_dict().items() if v is not None},
        }
        frame = pd.DataFrame({"x": entity.x, "P1": entity.p1, "P2": entity.p2}, columns=FRINGE_COLUMNS)
        return self.with_header(frame.to_csv(index=False, float_format="%.17g"), scan_header)

    def deserialize(self, text: str) -> FringeScan:
        header, body = self.split_header(text)
        frame = pd.read_csv(io.StringIO(body), float_precision="round_trip")
        if list(frame.columns) != FRINGE_COLUMNS:
            raise ValueError(f"expected columns {FRINGE_COLUMNS}, got {list(frame.columns)}")
        fields = FringeMetadataRecord.model_fields
        metadata = FringeMetadataRecord(**{k: v for k, v in header.items() if k in fields})
        return FringeScan(
            ScanKind(header["scan_kind"]),
            frame["x"].to_numpy(),
            frame["P1"].to_numpy(),
            frame["P2"].to_numpy(),
            FringeMetadata(**metadata.model_dump()),
        )


class FringeRecordRepository(RecordRepository[FringeScan]):
    def serialize(self, entity: FringeScan, header: Mapping[str, Any]) -> str:
        return self.wrap(FringeScanRecord.from_scan(entity).model_dump_json(), header)

    def deserialize(self, text: str) -> FringeScan:
        _, record = self.unwrap(text)
        return FringeScanRecord.model_validate_json(record).to_scan()
