"""
Design-constraint engine: turns an apparatus configuration into numeric
requirements (cloud temperature, beam size and curvature, detuning, fall time)
and regenerates the optimal laser-parameter table.
"""
from __future__ import annotations

import logging
import math
from typing import List, Sequence

from scipy.constants import hbar, k as BOLTZMANN

from app.atoms import bragg_bandwidth, recoil_frequency
from app.core.config import settings
from app.core.errors import DomainError
from app.dynamics import (
    effective_rabi,
    min_detuning,
    spontaneous_loss,
    two_photon_rabi_for,
)
from app.models.apparatus import ApparatusConfig, CloudSpec
from app.models.pulse import BraggPulse
from app.models.report import (
    OptimalParameterRow,
    PulseWindow,
    RequirementEntry,
    RequirementReport,
    WavefrontError,
)
from app.models.species import AtomSpecies

logger = logging.getLogger(__name__)


def longitudinal_temperature_limit(species: AtomSpecies) -> float:
    """T at which Δp_∥ = ħk: (ħk)²/(M k_B)."""
    return (hbar * species.wavenumber) ** 2 / (species.mass * BOLTZMANN)


def pulse_duration_window(cloud: CloudSpec, species: AtomSpecies) -> PulseWindow:
    """τ range from 2kΔp_∥/M << 1/τ << δ_B (equality points, no margin)."""
    tau_min = 1.0 / bragg_bandwidth(species)
    dp = cloud.longitudinal_momentum_width(species)
    tau_max = math.inf if dp == 0 else species.mass / (2.0 * species.wavenumber * dp)
    return PulseWindow(tau_min=tau_min, tau_max=tau_max)


def cloud_radius(cloud: CloudSpec, species: AtomSpecies, t: float) -> float:
    """r(t) = √(r₀² + v_⊥² t²)."""
    if t < 0:
        raise DomainError("time must be non-negative")
    v = cloud.transverse_velocity(species)
    return math.hypot(cloud.initial_radius, v * t)


def min_beam_diameter(cloud: CloudSpec, species: AtomSpecies, t0: float, T: float) -> float:
    """1/e² diameter covering the cloud at the last pulse, 2r(t₀ + 2T)."""
    if t0 < 0 or T <= 0:
        raise DomainError("need t0 >= 0 and T > 0")
    return 2.0 * cloud_radius(cloud, species, t0 + 2.0 * T)


def wavefront_phase_error(
    order: int,
    species: AtomSpecies,
    curvature: float,
    cloud: CloudSpec,
    T: float,
) -> WavefrontError:
    """δφ = (k_eff/R) v_⊥² T² with k_eff = 2nk; bias = δφ / (2nkT²) = v_⊥²/R."""
    if curvature <= 0:
        raise DomainError("curvature radius must be positive")
    v_sq = cloud.transverse_velocity(species) ** 2
    if math.isinf(curvature):
        return WavefrontError(phase=0.0, bias=0.0)
    k_eff = 2.0 * order * species.wavenumber
    return WavefrontError(phase=k_eff / curvature * v_sq * T * T, bias=v_sq / curvature)


def min_curvature(cloud: CloudSpec, species: AtomSpecies, target_accuracy: float) -> float:
    """R_min = v_⊥² / target accuracy."""
    if target_accuracy <= 0:
        raise DomainError("target accuracy must be positive")
    return cloud.transverse_velocity(species) ** 2 / target_accuracy


def min_fall_time(order: int, species: AtomSpecies, g: float) -> float:
    """Time after release when the Doppler shift 2kgt reaches nδ_B."""
    if order < 1 or g <= 0:
        raise DomainError("need order >= 1 and g > 0")
    return order * bragg_bandwidth(species) / (2.0 * species.wavenumber * g)


def intensity_from_rabi(two_photon_rabi: float, detuning: float, species: AtomSpecies) -> float:
    """I = 2 I_sat Ω₀²/Γ² with Ω₀² = 2ΔΩ₂ [W/m²]."""
    if two_photon_rabi <= 0 or detuning <= 0:
        raise DomainError("Ω₂ and Δ must be positive")
    omega0_sq = 2.0 * detuning * two_photon_rabi
    return 2.0 * species.saturation_intensity * omega0_sq / species.linewidth ** 2


def rabi_from_intensity(intensity: float, detuning: float, species: AtomSpecies) -> float:
    """Inverse of intensity_from_rabi."""
    if intensity <= 0 or detuning <= 0:
        raise DomainError("I and Δ must be positive")
    omega0_sq = intensity * species.linewidth ** 2 / (2.0 * species.saturation_intensity)
    return omega0_sq / (2.0 * detuning)


def power_from_intensity(intensity: float, diameter: float) -> float:
    """P = I π (w/2)² [W]."""
    if intensity <= 0 or diameter <= 0:
        raise DomainError("intensity and diameter must be positive")
    return intensity * math.pi * (0.5 * diameter) ** 2


def optimal_parameter_table(
    orders: Sequence[int],
    pulse_durations: Sequence[float],
    detuning: float,
    bec_diameter: float,
    velocity_selected_diameter: float,
    species: AtomSpecies,
) -> List[OptimalParameterRow]:
    """Ω₂, intensity, powers and loss per order for π pulses of the given τ [1/ω_r]."""
    if len(orders) != len(pulse_durations):
        raise DomainError("orders and pulse durations must have the same length")
    wr = recoil_frequency(species)
    rows: List[OptimalParameterRow] = []
    for n, tau in zip(orders, pulse_durations):
        if tau <= 0:
            raise DomainError(f"pulse duration for order {n} must be positive")
        tau_s = tau / wr
        rabi = two_photon_rabi_for(n, math.pi / tau_s, species)
        intensity = intensity_from_rabi(rabi, detuning, species)
        pulse = BraggPulse(order=n, two_photon_rabi=rabi, single_photon_detuning=detuning, duration=tau_s)
        rows.append(OptimalParameterRow(
            order=n,
            pulse_duration=tau,
            two_photon_rabi=rabi / wr,
            effective_rabi=effective_rabi(n, rabi, species) / wr,
            intensity=intensity,
            power_bec=power_from_intensity(intensity, bec_diameter),
            power_velocity_selected=power_from_intensity(intensity, velocity_selected_diameter),
            spontaneous_loss=spontaneous_loss(pulse, species).unclamped,
        ))
    return rows


def evaluate_requirements(config: ApparatusConfig) -> RequirementReport:
    """Check every design bound against the configured values."""
    species = config.species
    cloud = config.cloud
    margin = settings.much_less_margin
    n = config.order
    notes: List[str] = []

    t_limit = longitudinal_temperature_limit(species)
    temperature = RequirementEntry(
        name="longitudinal_temperature",
        bound=t_limit / margin,
        configured=cloud.longitudinal_temperature,
        passed=cloud.longitudinal_temperature <= t_limit / margin,
        formula="T_par << (hbar k)^2 / (M k_B)",
        unit="K",
        comparison="<=",
        equality_point=t_limit,
    )

    window = pulse_duration_window(cloud, species)
    tau = config.pi_pulse_duration
    lower, upper = margin * window.tau_min, window.tau_max / margin
    pulse_window = RequirementEntry(
        name="pulse_duration_window",
        bound=lower,
        configured=tau,
        passed=lower <= tau <= upper,
        formula="2k dp/M << 1/tau << delta_B",
        unit="s",
        comparison="within",
        upper_bound=upper,
        equality_point=window.tau_min,
    )
    if window.empty:
        notes.append("pulse-duration window is empty: the cloud is too hot for complete Bragg diffraction")

    w_min = min_beam_diameter(cloud, species, config.first_pulse_time, config.interrogation_time)
    diameter = RequirementEntry(
        name="beam_diameter",
        bound=w_min,
        configured=config.beam_diameter,
        passed=config.beam_diameter >= w_min,
        formula="w > 2 sqrt(r0^2 + v_perp^2 (t0 + 2T)^2)",
        unit="m",
        comparison=">=",
    )

    r_min = min_curvature(cloud, species, config.target_accuracy)
    curvature = RequirementEntry(
        name="wavefront_curvature",
        bound=r_min,
        configured=config.curvature,
        passed=config.curvature >= r_min,
        formula="R >= v_perp^2 / accuracy",
        unit="m",
        comparison=">=",
    )
    bias = wavefront_phase_error(n, species, config.curvature, cloud, config.interrogation_time).bias
    notes.append(f"wavefront bias at configured R: {bias:.4g} m/s^2")

    rabi = two_photon_rabi_for(n, math.pi / tau, species)
    delta_min = min_detuning(rabi * tau, config.loss_budget, species)
    detuning = RequirementEntry(
        name="single_photon_detuning",
        bound=delta_min,
        configured=config.detuning,
        passed=config.detuning >= delta_min,
        formula="Delta >= Omega2 tau Gamma / (2 N_s)",
        unit="rad/s",
        comparison=">=",
    )

    t_fall = min_fall_time(n, species, config.gravity)
    fall = RequirementEntry(
        name="fall_time",
        bound=t_fall,
        configured=config.first_pulse_time,
        passed=config.first_pulse_time >= t_fall,
        formula="t0 >= n delta_B / (2 k g)",
        unit="s",
        comparison=">=",
    )

    entries = [temperature, pulse_window, diameter, curvature, detuning, fall]
    failed = [e.name for e in entries if not e.passed]
    if failed:
        logger.info("requirements failing for order %d: %s", n, ", ".join(failed))
    return RequirementReport(entries=entries, species=species.name, order=n, notes=notes)
