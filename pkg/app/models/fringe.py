"""
Interference fringe models and analysis results.
"""
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


class ScanKind(str, Enum):
    CHIRP_RATE = "chirp_rate"
    LASER_PHASE = "laser_phase"


@dataclass(frozen=True)
class FringeMetadata:
    """Context of a fringe: what generated it and with which parameters."""

    order: int
    interrogation_time: float       # T, s
    first_pulse_time: float         # t₀, s
    contrast: float                 # V
    species: str
    g_true: Optional[float] = None  # m/s², only for simulated scans
    chirp_rate: Optional[float] = None  # Hz/s, fixed chirp of a phase scan
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FringeScan:
    """Output-port populations P1, P2 sampled against a scan variable x."""

    scan_kind: ScanKind
    x: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    metadata: FringeMetadata

    def __post_init__(self) -> None:
        for name in ("x", "p1", "p2"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.x) == len(self.p1) == len(self.p2)):
            raise ValueError("x, P1 and P2 must have the same length")

    def __len__(self) -> int:
        return len(self.x)

    def points(self) -> List[Tuple[float, float, float]]:
        return list(zip(self.x.tolist(), self.p1.tolist(), self.p2.tolist()))


@dataclass(frozen=True)
class FringeFit:
    """Least-squares fit P1(x) = A + B cos(x + φ) with standard errors."""

    amplitude: float      # B
    offset: float         # A
    phase: float          # φ, wrapped to (-π, π]
    amplitude_error: float
    offset_error: float
    phase_error: float
    residual_rms: float

    @property
    def contrast(self) -> float:
        return 2.0 * self.amplitude

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["contrast"] = self.contrast
        return data


@dataclass(frozen=True)
class ResonanceResult:
    """Resonant chirp rate found as the common extremum of several fringes."""

    chirp_rate: float                      # α₀, Hz/s
    residual_variance: float
    aliases: List[float] = field(default_factory=list)
    candidates: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ContrastEstimate:
    """Monte-Carlo contrast of a thermal cloud and mean per-pulse transfer."""

    contrast: float
    transfer_efficiencies: Tuple[float, float, float]
    n_atoms: int
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
