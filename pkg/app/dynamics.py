"""
Closed-form Bragg transition formulas: detunings, effective Rabi frequency,
populations, pulse durations and spontaneous-emission loss.
"""
from __future__ import annotations

import logging
import math
from enum import Enum

import numpy as np

from app.atoms import bragg_bandwidth, recoil_frequency
from app.core.errors import DomainError
from app.models.pulse import BraggPulse, SpontaneousLoss
from app.models.species import AtomSpecies

logger = logging.getLogger(__name__)

# Closed forms assume Δ >> ω_r; below this many recoil frequencies results are flagged.
LARGE_DETUNING_RECOILS = 100.0
# Orders up to this use exact factorials; above it log-gamma.
_DIRECT_FACTORIAL_MAX_ORDER = 15


class TransitionMode(str, Enum):
    RAMAN = "raman"
    BRAGG = "bragg"


def transition_frequency(mode: TransitionMode, species: AtomSpecies) -> float:
    """Resonant beam frequency difference for an atom at rest [rad/s]."""
    base = 4.0 * recoil_frequency(species)
    if TransitionMode(mode) is TransitionMode.RAMAN:
        return species.hyperfine_splitting + base
    return base


def two_photon_detuning(
    mode: TransitionMode,
    omega_diff: float,
    species: AtomSpecies,
    velocity: float = 0.0,
) -> float:
    """Δ₂ = ω_diff − (resonance + 2kv) for Raman or first-order Bragg."""
    doppler = 2.0 * species.wavenumber * velocity
    return omega_diff - (transition_frequency(mode, species) + doppler)


def intermediate_detuning(m: int, pulse: BraggPulse, species: AtomSpecies) -> float:
    """Detuning Δ_m of rung m on the resonant order-n ladder."""
    n = pulse.order
    if not 1 <= m <= 2 * n:
        raise DomainError(f"rung m must lie in 1..{2 * n}, got {m}")
    wr = recoil_frequency(species)
    if m % 2:
        return pulse.single_photon_detuning + (m * m - 2 * n * (m - 1)) * wr
    return m * (2 * n - m) * wr


def intermediate_detuning_general(
    m: int,
    order: int,
    detuning: float,
    omega_eff: float,
    species: AtomSpecies,
) -> float:
    """Δ_m for an arbitrary beam frequency difference ω_eff."""
    if not 1 <= m <= 2 * order:
        raise DomainError(f"rung m must lie in 1..{2 * order}, got {m}")
    wr = recoil_frequency(species)
    if m % 2:
        return detuning + m * m * wr - 0.5 * (m - 1) * omega_eff
    return 0.5 * m * omega_eff - m * m * wr


def _log_rabi_denominator(order: int, species: AtomSpecies) -> float:
    """ln[(8ω_r)^(n-1) ((n-1)!)²]."""
    return (order - 1) * math.log(8.0 * recoil_frequency(species)) + 2.0 * math.lgamma(order)


def effective_rabi(order: int, two_photon_rabi: float, species: AtomSpecies) -> float:
    """Ω_2n = Ω₂ⁿ / [(8ω_r)^(n-1) ((n-1)!)²]."""
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if two_photon_rabi <= 0:
        raise DomainError("two-photon Rabi frequency must be positive")
    if order == 1:
        return two_photon_rabi
    if order <= _DIRECT_FACTORIAL_MAX_ORDER:
        denominator = (8.0 * recoil_frequency(species)) ** (order - 1) * math.factorial(order - 1) ** 2
        return two_photon_rabi ** order / denominator
    return math.exp(order * math.log(two_photon_rabi) - _log_rabi_denominator(order, species))


def two_photon_rabi_for(order: int, effective: float, species: AtomSpecies) -> float:
    """Inverse of effective_rabi: the Ω₂ that yields Ω_2n = `effective`."""
    if effective <= 0:
        raise DomainError("effective Rabi frequency must be positive")
    if order == 1:
        return effective
    return math.exp((math.log(effective) + _log_rabi_denominator(order, species)) / order)


def effective_rabi_product(
    order: int,
    two_photon_rabi: float,
    detuning: float,
    species: AtomSpecies,
) -> float:
    """Ω_2n = Ω₀^2n / (2^(2n-1) Δ₁Δ₂…Δ_(2n-1)) with every rung detuning kept."""
    pulse = BraggPulse(order=order, two_photon_rabi=two_photon_rabi,
                       single_photon_detuning=detuning, duration=1.0)
    log_sum = 0.0
    for m in range(1, 2 * order):
        dm = intermediate_detuning(m, pulse, species)
        if dm <= 0:
            raise DomainError(f"rung {m} detuning is not positive ({dm:.4g} rad/s); Δ too small")
        log_sum += math.log(dm)
    log_omega0_sq = math.log(pulse.single_photon_rabi_squared)
    return math.exp(order * log_omega0_sq - (2 * order - 1) * math.log(2.0) - log_sum)


def transfer_population(effective: float, t: float) -> float:
    """Population in |p + 2nħk> after a resonant pulse: ½[1 − cos(Ωt)]."""
    return 0.5 * (1.0 - math.cos(effective * t))


def off_resonant_transfer(effective: float, delta, t: float):
    """Two-level transfer with detuning δ: [Ω²/(Ω²+δ²)] sin²(√(Ω²+δ²) t/2).

    `delta` may be an array (one detuning per atom); the result then is too.
    """
    generalized = np.hypot(effective, delta)
    result = (effective / generalized) ** 2 * np.sin(0.5 * generalized * t) ** 2
    return float(result) if np.ndim(result) == 0 else result


def pulse_durations(effective: float) -> tuple[float, float]:
    """(τ_π, τ_π/2) for the effective Rabi frequency."""
    if effective <= 0:
        raise DomainError("effective Rabi frequency must be positive")
    tau_pi = math.pi / effective
    return tau_pi, 0.5 * tau_pi


def spontaneous_loss(pulse: BraggPulse, species: AtomSpecies) -> SpontaneousLoss:
    """N_s = (Ω₂/2Δ) Γ τ, clamped to [0, 1]."""
    small = pulse.single_photon_detuning < LARGE_DETUNING_RECOILS * recoil_frequency(species)
    if small:
        logger.warning("Δ = %.4g rad/s is below %g ω_r; excited-state estimate is unreliable",
                       pulse.single_photon_detuning, LARGE_DETUNING_RECOILS)
    value = pulse.two_photon_rabi / (2.0 * pulse.single_photon_detuning) * species.linewidth * pulse.duration
    return SpontaneousLoss(
        probability=min(max(value, 0.0), 1.0),
        unclamped=value,
        overflow=value > 1.0,
        small_detuning=small,
    )


def min_detuning(pulse_area: float, max_loss: float, species: AtomSpecies) -> float:
    """Δ_min = Ω₂τ Γ / (2 N_s_max)."""
    if not 0 < max_loss < 1:
        raise DomainError(f"loss budget must lie in (0, 1), got {max_loss}")
    return pulse_area * species.linewidth / (2.0 * max_loss)


def resonance_frequency(order: int, t: float, species: AtomSpecies, g: float) -> float:
    """δ_n(t) = nδ_B + 2kgt, the resonant frequency difference while falling."""
    if t < 0:
        raise DomainError("time since release must be non-negative")
    return order * bragg_bandwidth(species) + 2.0 * species.wavenumber * g * t
