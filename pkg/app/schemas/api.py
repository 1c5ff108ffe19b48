"""
API response schemas.
"""
from typing import List, Optional

from pydantic import BaseModel

from app.schemas.records import (
    FringeFitRecord,
    FringeScanRecord,
    RequirementReportRecord,
    ResonanceRecord,
    ScheduleRecord,
)


class SpeciesResponse(BaseModel):
    """Species file fields plus derived recoil constants."""
    name: str
    mass_kg: float
    wavelength_nm: float
    linewidth_hz: float
    hyperfine_ghz: float
    isat_mw_cm2: float
    recoil_frequency: float
    bragg_bandwidth: float


class RequirementsResponse(BaseModel):
    report: RequirementReportRecord
    text: str


class ChirpSimulationResponse(BaseModel):
    scans: List[FringeScanRecord]
    resonance: Optional[ResonanceRecord] = None


class PhaseSimulationResponse(BaseModel):
    scan: FringeScanRecord
    fit: FringeFitRecord
    gravity: float


class ViolationResponse(BaseModel):
    code: str
    message: str
    magnitude: float


class SequenceResponse(BaseModel):
    schedule: ScheduleRecord
    violations: List[ViolationResponse]
    valid: bool
