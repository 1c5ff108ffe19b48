"""
Machine-readable record schemas for schedules, fringes, fits and reports.
"""
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.models.fringe import FringeFit, FringeMetadata, FringeScan, ResonanceResult, ScanKind
from app.models.report import OptimalParameterRow, RequirementEntry, RequirementReport
from app.models.schedule import EventKind, ScheduleEvent, TimingSchedule


class ScheduleEventRecord(BaseModel):
    t_start: float
    duration: float
    kind: EventKind
    intensity: float
    freq_offset_start: float = Field(description="rad/s")
    chirp_slope: float = Field(description="rad/s^2")


class ScheduleRecord(BaseModel):
    """Full-precision schedule record; re-imports to an identical TimingSchedule."""

    model_config = ConfigDict(extra="forbid")

    events: List[ScheduleEventRecord]
    order: int
    interrogation_time: float
    two_photon_rabi: float
    species: str
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_schedule(cls, schedule: TimingSchedule) -> "ScheduleRecord":
        return cls(
            events=[ScheduleEventRecord(**vars(e)) for e in schedule.events],
            order=schedule.order,
            interrogation_time=schedule.interrogation_time,
            two_photon_rabi=schedule.two_photon_rabi,
            species=schedule.species,
            metadata=dict(schedule.metadata),
        )

    def to_schedule(self) -> TimingSchedule:
        return TimingSchedule(
            events=tuple(ScheduleEvent(**e.model_dump()) for e in self.events),
            order=self.order,
            interrogation_time=self.interrogation_time,
            two_photon_rabi=self.two_photon_rabi,
            species=self.species,
            metadata=dict(self.metadata),
        )


class FringeMetadataRecord(BaseModel):
    order: int
    interrogation_time: float
    first_pulse_time: float
    contrast: float
    species: str
    g_true: Optional[float] = None
    chirp_rate: Optional[float] = None
    seed: Optional[int] = None


class FringeScanRecord(BaseModel):
    scan_kind: ScanKind
    x: List[float]
    p1: List[float]
    p2: List[float]
    metadata: FringeMetadataRecord

    @classmethod
    def from_scan(cls, scan: FringeScan) -> "FringeScanRecord":
        return cls(
            scan_kind=scan.scan_kind,
            x=scan.x.tolist(),
            p1=scan.p1.tolist(),
            p2=scan.p2.tolist(),
            metadata=FringeMetadataRecord(**scan.metadata.to_dict()),
        )

    def to_scan(self) -> FringeScan:
        return FringeScan(self.scan_kind, self.x, self.p1, self.p2,
                          FringeMetadata(**self.metadata.model_dump()))


class FringeFitRecord(BaseModel):
    amplitude: float
    offset: float
    phase: float
    amplitude_error: float
    offset_error: float
    phase_error: float
    residual_rms: float
    contrast: float

    @classmethod
    def from_fit(cls, fit: FringeFit) -> "FringeFitRecord":
        return cls(**fit.to_dict())


class ResonanceRecord(BaseModel):
    chirp_rate: float = Field(description="resonant chirp α₀, Hz/s")
    residual_variance: float
    aliases: List[float] = Field(default_factory=list)
    candidates: int = 0
    gravity: float = Field(description="g = πα₀/k, m/s^2")

    @classmethod
    def from_result(cls, result: ResonanceResult, gravity: float) -> "ResonanceRecord":
        return cls(gravity=gravity, **result.to_dict())


class RequirementEntryRecord(BaseModel):
    name: str
    bound: float
    configured: float
    passed: bool
    formula: str
    unit: str
    comparison: str
    upper_bound: Optional[float] = None
    equality_point: Optional[float] = None


class RequirementReportRecord(BaseModel):
    species: str
    order: int
    passed: bool
    entries: List[RequirementEntryRecord]
    notes: List[str] = Field(default_factory=list)

    model_config = ConfigDict(json_schema_extra={
        "example": {
            "species": "Rb87",
            "order": 1,
            "passed": False,
            "entries": [{
                "name": "beam_diameter",
                "bound": 0.006046,
                "configured": 0.006,
                "passed": False,
                "formula": "w > 2 sqrt(r0^2 + v_perp^2 (t0 + 2T)^2)",
                "unit": "m",
                "comparison": ">=",
            }],
            "notes": [],
        }
    })

    @classmethod
    def from_report(cls, report: RequirementReport) -> "RequirementReportRecord":
        return cls(**report.to_dict())

    def to_report(self) -> RequirementReport:
        return RequirementReport(
            entries=[RequirementEntry(**e.model_dump()) for e in self.entries],
            species=self.species,
            order=self.order,
            notes=list(self.notes),
        )


class ParameterRowRecord(BaseModel):
    order: int
    pulse_duration: float = Field(description="τ in units of 1/ω_r")
    two_photon_rabi: float = Field(description="Ω₂ in units of ω_r")
    effective_rabi: float = Field(description="Ω_2n in units of ω_r")
    intensity: float = Field(description="W/m^2")
    power_bec: float = Field(description="W")
    power_velocity_selected: float = Field(description="W")
    spontaneous_loss: float


class ParameterTableRecord(BaseModel):
    detuning: float = Field(description="Δ, rad/s")
    bec_diameter: float
    velocity_selected_diameter: float
    rows: List[ParameterRowRecord]

    @classmethod
    def from_rows(
        cls,
        rows: List[OptimalParameterRow],
        detuning: float,
        diameters: Tuple[float, float],
    ) -> "ParameterTableRecord":
        return cls(
            detuning=detuning,
            bec_diameter=diameters[0],
            velocity_selected_diameter=diameters[1],
            rows=[ParameterRowRecord(**r.to_dict()) for r in rows],
        )
