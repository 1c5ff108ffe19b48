"""
Timing schedule model: intensity and frequency program of one interferometer shot.
"""
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Tuple


class EventKind(str, Enum):
    WAIT = "wait"
    PULSE_HALF_PI = "pulse_pi/2"
    PULSE_PI = "pulse_pi"
    RAMP_SEGMENT = "ramp_segment"

    @property
    def is_pulse(self) -> bool:
        return self in (EventKind.PULSE_HALF_PI, EventKind.PULSE_PI)


@dataclass(frozen=True)
class ScheduleEvent:
    """One segment: light on (pulse) or off, with a linear frequency ramp."""

    t_start: float              # s
    duration: float             # s
    kind: EventKind
    intensity: float            # W/m²
    freq_offset_start: float    # rad/s
    chirp_slope: float          # rad/s²

    @property
    def t_end(self) -> float:
        return self.t_start + self.duration

    @property
    def centre(self) -> float:
        return self.t_start + 0.5 * self.duration

    def offset_at(self, t: float) -> float:
        return self.freq_offset_start + self.chirp_slope * (t - self.t_start)


@dataclass(frozen=True)
class TimingSchedule:
    """Ordered events plus the markers derived from them."""

    events: Tuple[ScheduleEvent, ...]
    order: int
    interrogation_time: float
    two_photon_rabi: float
    species: str
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def pulses(self) -> List[ScheduleEvent]:
        return [e for e in self.events if e.kind.is_pulse]

    @property
    def fall_time(self) -> float:
        """t_Fall: switch-on of the first pulse."""
        pulses = self.pulses
        return pulses[0].t_start if pulses else 0.0

    @property
    def pulse_centres(self) -> List[float]:
        return [p.centre for p in self.pulses]

    @property
    def detection_time(self) -> float:
        pulses = self.pulses
        return pulses[-1].t_end if pulses else 0.0

    @property
    def total_duration(self) -> float:
        return self.events[-1].t_end if self.events else 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["events"] = [dict(asdict(e), kind=e.kind.value) for e in self.events]
        return data


@dataclass(frozen=True)
class ScheduleViolation:
    """One broken schedule invariant."""

    code: str
    message: str
    magnitude: float = 0.0
