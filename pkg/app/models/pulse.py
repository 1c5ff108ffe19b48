"""
Bragg pulse and momentum-ladder state models.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from app.core.errors import DomainError


class Envelope(str, Enum):
    """Temporal shape of the two-photon Rabi frequency."""
    SQUARE = "square"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class BraggPulse:
    """One Bragg pulse of order n with two-photon Rabi frequency Ω₂ and detuning Δ."""

    order: int
    two_photon_rabi: float          # Ω₂, rad/s
    single_photon_detuning: float   # Δ, rad/s
    duration: float                 # τ, s
    envelope: Envelope = Envelope.SQUARE
    sigma: Optional[float] = None   # gaussian 1/e half-width parameter, s

    def __post_init__(self) -> None:
        if isinstance(self.order, bool) or not isinstance(self.order, int) or self.order < 1:
            raise DomainError(f"order must be an integer >= 1, got {self.order!r}")
        for name in ("two_photon_rabi", "single_photon_detuning", "duration"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be positive, got {value!r}")
        if self.envelope is Envelope.GAUSSIAN and (self.sigma is None or self.sigma <= 0):
            raise DomainError("gaussian envelope needs a positive sigma")

    @property
    def single_photon_rabi_squared(self) -> float:
        """Ω₀² = 2ΔΩ₂."""
        return 2.0 * self.single_photon_detuning * self.two_photon_rabi

    def rabi_at(self, t: float) -> float:
        """Ω₂(t) for 0 <= t <= τ; the gaussian is centred on the pulse."""
        if t < 0 or t > self.duration:
            return 0.0
        if self.envelope is Envelope.SQUARE:
            return self.two_photon_rabi
        centre = 0.5 * self.duration
        return self.two_photon_rabi * math.exp(-((t - centre) / self.sigma) ** 2)


@dataclass(frozen=True)
class LadderState:
    """Amplitudes c_m of the momentum states |g, 2mħk>, m = m_min..m_min+len-1."""

    amplitudes: np.ndarray
    m_min: int
    time: float = 0.0

    def __post_init__(self) -> None:
        amplitudes = np.array(self.amplitudes, dtype=complex)
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def at_rest(cls, m_min: int = -2, m_max: int = 3) -> "LadderState":
        """All population in m = 0."""
        if not m_min <= 0 <= m_max:
            raise DomainError("ladder bounds must include m = 0")
        amplitudes = np.zeros(m_max - m_min + 1, dtype=complex)
        amplitudes[-m_min] = 1.0
        return cls(amplitudes=amplitudes, m_min=m_min)

    @property
    def m_max(self) -> int:
        return self.m_min + len(self.amplitudes) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.m_min, self.m_max + 1)

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def norm(self) -> float:
        return float(np.sum(self.populations))

    def population(self, m: int) -> float:
        if not self.m_min <= m <= self.m_max:
            return 0.0
        return float(self.populations[m - self.m_min])

    def widened(self, extra: int) -> "LadderState":
        """Same state on a ladder padded by `extra` empty rungs on each side."""
        padded = np.concatenate([np.zeros(extra, complex), self.amplitudes, np.zeros(extra, complex)])
        return LadderState(amplitudes=padded, m_min=self.m_min - extra, time=self.time)


@dataclass(frozen=True)
class LadderTrajectory:
    """Sampled evolution: times[i] and amplitudes[i, j] for rung m_min + j."""

    times: np.ndarray
    amplitudes: np.ndarray
    m_min: int
    max_norm_error: float
    steps: int

    def __post_init__(self) -> None:
        for name in ("times", "amplitudes"):
            arr = np.array(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m_max(self) -> int:
        return self.m_min + self.amplitudes.shape[1] - 1

    def population(self, m: int) -> np.ndarray:
        if not self.m_min <= m <= self.m_max:
            return np.zeros(len(self.times))
        return np.abs(self.amplitudes[:, m - self.m_min]) ** 2

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def final(self) -> LadderState:
        return LadderState(amplitudes=self.amplitudes[-1], m_min=self.m_min, time=float(self.times[-1]))


@dataclass(frozen=True)
class SpontaneousLoss:
    """Spontaneous-emission loss probability with its validity flags."""

    probability: float        # clamped to [0, 1]
    unclamped: float
    overflow: bool            # unclamped value exceeded 1
    small_detuning: bool      # Δ below the large-detuning threshold
