"""
Run-config schema: the YAML document (or API body) a run is resolved from.
Flags and request fields override file values.
"""
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.core.errors import ConfigValidationError, PersistenceError


class OutputFormat(str, Enum):
    CSV = "csv"
    RECORD = "record"


class ScanType(str, Enum):
    CHIRP = "chirp"
    PHASE = "phase"


class CloudSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    initial_radius: Optional[float] = Field(None, gt=0, description="r0, m")
    transverse_temperature: Optional[float] = Field(None, gt=0, description="K")
    longitudinal_temperature: Optional[float] = Field(None, gt=0, description="K")


class ApparatusSection(BaseModel):
    """Overrides on top of the preset; unset fields keep the preset value."""

    model_config = ConfigDict(extra="forbid")

    cloud: CloudSection = Field(default_factory=CloudSection)
    order: Optional[int] = Field(None, ge=1)
    interrogation_time: Optional[float] = Field(None, gt=0, description="T, s")
    first_pulse_time: Optional[float] = Field(None, ge=0, description="t0, s")
    detuning_ghz: Optional[float] = Field(None, gt=0, description="Δ/2π, GHz")
    beam_diameter: Optional[float] = Field(None, gt=0, description="1/e^2 diameter, m")
    curvature: Optional[float] = Field(None, gt=0, description="R, m")
    target_accuracy: Optional[float] = Field(None, gt=0, description="m/s^2")
    loss_budget: Optional[float] = Field(None, gt=0, lt=1)
    gravity: Optional[float] = Field(None, gt=0, description="g, m/s^2")
    pi_pulse_duration: Optional[float] = Field(None, gt=0, description="τ_π, s")

    def overrides(self) -> Dict[str, Any]:
        """Set fields in ApparatusConfig units."""
        data = self.model_dump(exclude_unset=True, exclude_none=True, exclude={"cloud"})
        if "detuning_ghz" in data:
            data["detuning"] = 2 * math.pi * data.pop("detuning_ghz") * 1e9
        return data


class ScanSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: ScanType = ScanType.CHIRP
    interrogation_times: List[float] = Field(default_factory=lambda: [40e-3, 50e-3, 60e-3])
    alpha_min: Optional[float] = Field(None, description="Hz/s; default α₀ minus the configured half-width")
    alpha_max: Optional[float] = Field(None, description="Hz/s")
    samples: Optional[int] = Field(None, ge=2)
    contrast: float = Field(1.0, ge=0, le=1)
    chirp_rate: Optional[float] = Field(None, description="fixed α of a phase scan, Hz/s")
    phase_points: Optional[int] = Field(None, ge=5)
    noise: float = Field(0.0, ge=0)

    @field_validator("interrogation_times")
    @classmethod
    def positive_times(cls, v: List[float]) -> List[float]:
        if not v or any(t <= 0 for t in v):
            raise ValueError("interrogation times must be positive and non-empty")
        return v

    @model_validator(mode="after")
    def ordered_range(self) -> "ScanSection":
        if self.alpha_min is not None and self.alpha_max is not None and self.alpha_max <= self.alpha_min:
            raise ValueError("alpha_max must exceed alpha_min")
        return self


class TableSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    orders: Optional[List[int]] = None
    pulse_durations: Optional[List[float]] = Field(None, description="τ in units of 1/ω_r")
    detuning_ghz: float = Field(1.0, gt=0)
    bec_diameter: Optional[float] = Field(None, gt=0)
    velocity_selected_diameter: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def matching_lengths(self) -> "TableSection":
        if (self.orders is None) != (self.pulse_durations is None):
            raise ValueError("orders and pulse_durations must be given together")
        if self.orders is not None and len(self.orders) != len(self.pulse_durations):
            raise ValueError("orders and pulse_durations must have the same length")
        return self


class OutputSection(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: Optional[Path] = None
    format: OutputFormat = OutputFormat.CSV
    seed: Optional[int] = None


class RunConfig(BaseModel):
    """Everything one subcommand needs besides its flags."""

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "species": "builtin",
                "preset": "typical",
                "apparatus": {"order": 1, "interrogation_time": 0.05, "cloud": {"transverse_temperature": 5e-6}},
                "scan": {"kind": "chirp", "interrogation_times": [0.04, 0.05, 0.06]},
                "output": {"format": "csv", "seed": 7},
            }
        },
    )

    species: str = "builtin"
    preset: str = "typical"
    apparatus: ApparatusSection = Field(default_factory=ApparatusSection)
    scan: ScanSection = Field(default_factory=ScanSection)
    table: TableSection = Field(default_factory=TableSection)
    output: OutputSection = Field(default_factory=OutputSection)

    @classmethod
    def from_mapping(cls, data: Dict[str, Any]) -> "RunConfig":
        try:
            return cls.model_validate(data or {})
        except ValidationError as e:
            error = e.errors()[0]
            field = ".".join(str(part) for part in error["loc"]) or "<root>"
            raise ConfigValidationError(field, error["msg"]) from e

    @classmethod
    def from_yaml(cls, path: Path) -> "RunConfig":
        path = Path(path)
        if not path.is_file():
            raise PersistenceError(path, "run config not found")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except yaml.YAMLError as e:
            raise PersistenceError(path, f"not valid YAML: {e}") from e
        if data is not None and not isinstance(data, dict):
            raise ConfigValidationError("<root>", "run config must be a mapping")
        return cls.from_mapping(data or {})

    def alpha_range(self, centre: float, half_width: float) -> Tuple[float, float]:
        lo = self.scan.alpha_min if self.scan.alpha_min is not None else centre - half_width
        hi = self.scan.alpha_max if self.scan.alpha_max is not None else centre + half_width
        return lo, hi
