"""
Three-pulse Mach-Zehnder gravimeter: phase and output-port populations,
chirp-rate and laser-phase fringe generation, resonance finding, fringe
fitting and a thermal-cloud contrast estimate.
"""
from __future__ import annotations

import logging
import math
import warnings
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.constants import k as BOLTZMANN
from scipy.interpolate import CubicSpline
from scipy.optimize import OptimizeWarning, curve_fit, minimize_scalar
from scipy.signal import find_peaks

from app.core.config import settings
from app.core.errors import DomainError, FitError, ResonanceNotFoundError
from app.dynamics import off_resonant_transfer, pulse_durations
from app.models.apparatus import ApparatusConfig
from app.models.fringe import (
    ContrastEstimate,
    FringeFit,
    FringeMetadata,
    FringeScan,
    ResonanceResult,
    ScanKind,
)
from app.models.species import AtomSpecies

logger = logging.getLogger(__name__)

# Fraction of the shortest fringe period within which extrema count as common.
_COMMON_WINDOW_FRACTION = 0.1
# Grid-level across-T variance of P1 below which another common extremum is an alias.
_ALIAS_VARIANCE = 1e-3
_MIN_FIT_POINTS = 5
# Linear-solve RMS residual below which a fringe counts as noiseless.
_EXACT_FIT_RMS = 1e-12


def interferometer_phase(
    order: int,
    species: AtomSpecies,
    g: float,
    chirp_rate,
    T: float,
    phase_offset=0.0,
):
    """Δφ = n(2kgT² − 2παT²) + φ_L.

    `chirp_rate` and `phase_offset` may be arrays.
    """
    if T <= 0:
        raise DomainError(f"interrogation time must be positive, got {T}")
    result = order * 2.0 * (T * T) * (species.wavenumber * g - math.pi * np.asarray(chirp_rate)) + phase_offset
    return float(result) if np.ndim(result) == 0 else result


def output_populations(phase, contrast: float = 1.0):
    """(P1, P2) = ½(1 ± V cos Δφ)."""
    if not 0.0 <= contrast <= 1.0:
        raise DomainError(f"contrast must lie in [0, 1], got {contrast}")
    fringe = contrast * np.cos(phase)
    p1 = 0.5 * (1.0 + fringe)
    p2 = 1.0 - p1
    if np.ndim(p1) == 0:
        return float(p1), float(p2)
    return p1, p2


def gravity_from_chirp(chirp_rate: float, species: AtomSpecies) -> float:
    """g = πα₀/k."""
    if chirp_rate <= 0:
        raise DomainError("resonant chirp rate must be positive")
    return math.pi * chirp_rate / species.wavenumber


def scale_factor(order: int, species: AtomSpecies, T: float) -> float:
    """dΔφ/dg = 2nkT² [rad per m/s²]."""
    if order < 1 or T <= 0:
        raise DomainError("need order >= 1 and T > 0")
    return 2.0 * order * species.wavenumber * T * T


def gravity_resolution(phase_resolution: float, order: int, species: AtomSpecies, T: float) -> float:
    """Smallest resolvable change in g for a phase resolution δφ."""
    if phase_resolution <= 0:
        raise DomainError("phase resolution must be positive")
    return phase_resolution / scale_factor(order, species, T)


def _metadata(config: ApparatusConfig, T: float, contrast: float, **extra) -> FringeMetadata:
    return FringeMetadata(
        order=config.order,
        interrogation_time=T,
        first_pulse_time=config.first_pulse_time,
        contrast=contrast,
        species=config.species.name,
        g_true=config.gravity,
        **extra,
    )


def chirp_scan(
    config: ApparatusConfig,
    T_values: Sequence[float],
    alpha_range: Tuple[float, float],
    samples: Optional[int] = None,
    contrast: float = 1.0,
    phase_offset: float = 0.0,
) -> List[FringeScan]:
    """P1, P2 against chirp rate α [Hz/s], one fringe per interrogation time."""
    if not T_values:
        raise DomainError("need at least one interrogation time")
    samples = samples or settings.chirp_samples
    lo, hi = alpha_range
    if samples < 2 or not hi > lo:
        raise DomainError("chirp range must be increasing and sampled at least twice")
    alpha = np.linspace(lo, hi, samples)
    scans = []
    for T in T_values:
        phase = interferometer_phase(config.order, config.species, config.gravity, alpha, T, phase_offset)
        p1, p2 = output_populations(phase, contrast)
        scans.append(FringeScan(ScanKind.CHIRP_RATE, alpha, p1, p2, _metadata(config, T, contrast)))
    return scans


def phase_scan(
    config: ApparatusConfig,
    chirp_rate: float,
    phases: Optional[Sequence[float]] = None,
    contrast: float = 1.0,
    *,
    interrogation_time: Optional[float] = None,
    noise: float = 0.0,
    seed: Optional[int] = None,
) -> FringeScan:
    """Fringe against the laser phase of the third pulse at a fixed chirp rate.

    With `noise` > 0, seeded additive Gaussian detection noise is added to P1.
    """
    T = interrogation_time or config.interrogation_time
    if phases is None:
        phases = np.linspace(0.0, 2.0 * math.pi, settings.phase_points, endpoint=False)
    x = np.asarray(phases, dtype=float)
    phase = interferometer_phase(config.order, config.species, config.gravity, chirp_rate, T, x)
    p1, _ = output_populations(phase, contrast)
    if noise < 0:
        raise DomainError("noise must be non-negative")
    if noise > 0:
        if seed is None:
            seed = settings.default_seed
        rng = np.random.default_rng(np.random.SeedSequence(seed))
        p1 = np.clip(p1 + rng.normal(0.0, noise, len(x)), 0.0, 1.0)
    metadata = _metadata(config, T, contrast, chirp_rate=chirp_rate, seed=seed)
    return FringeScan(ScanKind.LASER_PHASE, x, p1, 1.0 - p1, metadata)


def _common_grid(scans: Sequence[FringeScan]) -> np.ndarray:
    x = scans[0].x
    scale = float(np.max(np.abs(x))) or 1.0
    for scan in scans[1:]:
        if len(scan.x) != len(x) or not np.allclose(scan.x, x, rtol=0.0, atol=1e-12 * scale):
            raise DomainError("scans must share a common chirp grid")
    return x


def _period_in_samples(peaks: np.ndarray, n: int) -> float:
    return float(np.median(np.diff(peaks))) if len(peaks) > 1 else float(n)


def find_resonant_chirp(scans: Sequence[FringeScan]) -> ResonanceResult:
    """Chirp rate at which every fringe has a common extremum (the central fringe).

    Candidates are extrema of the same kind present in every scan within a
    tenth of the shortest period. The one with the smallest across-T variance
    of P1 is refined by bounded Brent search on spline-interpolated fringes.
    Other common extrema are returned as aliases.
    """
    if len(scans) < 2:
        raise DomainError("need at least two scans")
    x = _common_grid(scans)
    T_values = [s.metadata.interrogation_time for s in scans]
    if len(set(T_values)) < 2:
        raise ResonanceNotFoundError(
            "all scans share one interrogation time; the common fringe is ambiguous",
            {T_values[0]: []},
        )
    P = np.vstack([s.p1 for s in scans])
    maxima = [find_peaks(p)[0] for p in P]
    minima = [find_peaks(-p)[0] for p in P]
    extrema: Dict[float, List[float]] = {
        T: x[np.sort(np.concatenate([hi, lo]))].tolist() for T, hi, lo in zip(T_values, maxima, minima)
    }

    spacing = min(_period_in_samples(m, len(x)) for m in maxima)
    window = max(1, int(round(_COMMON_WINDOW_FRACTION * spacing)))
    candidates: List[int] = []
    for peaks in (maxima, minima):
        if any(len(p) == 0 for p in peaks):
            continue
        reference = max(peaks, key=len)
        for i in reference:
            if all(np.min(np.abs(p - i)) <= window for p in peaks):
                candidates.append(int(i))
    if not candidates:
        raise ResonanceNotFoundError("no common fringe extremum in the scanned chirp range", extrema)

    variances = {i: float(np.var(P[:, i])) for i in candidates}
    best = min(candidates, key=lambda i: variances[i])

    splines = [CubicSpline(x, p) for p in P]

    def spread(alpha: float) -> float:
        return float(np.var([s(alpha) for s in splines]))

    lo = x[max(best - window, 0)]
    hi = x[min(best + window, len(x) - 1)]
    result = minimize_scalar(spread, bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-10 * max(abs(x[best]), 1.0)})
    alpha0 = float(result.x)
    residual = float(result.fun)

    aliases = sorted(
        float(x[i]) for i in candidates
        if abs(i - best) > window and variances[i] < _ALIAS_VARIANCE
    )
    if aliases:
        logger.warning("common fringe extrema also at %s Hz/s; reporting %.10g as resonant",
                       ", ".join(f"{a:.8g}" for a in aliases), alpha0)
    logger.debug("resonant chirp %.10g Hz/s, residual variance %.3g, %d candidates",
                 alpha0, residual, len(candidates))
    return ResonanceResult(chirp_rate=alpha0, residual_variance=residual,
                           aliases=aliases, candidates=len(candidates))


def _fringe_model(x: np.ndarray, offset: float, amplitude: float, phase: float) -> np.ndarray:
    return offset + amplitude * np.cos(x + phase)


def _wrap(phase: float) -> float:
    """Wrap to (−π, π]."""
    return math.pi - ((math.pi - phase) % (2.0 * math.pi))


def _linear_errors(design: np.ndarray, residuals: np.ndarray, c: float, s: float) -> np.ndarray:
    """Standard errors of (A, B, φ) propagated from the linear model A + c cos x + s sin x."""
    dof = max(len(residuals) - design.shape[1], 1)
    variance = float(residuals @ residuals) / dof
    covariance = variance * np.linalg.inv(design.T @ design)
    b2 = c * c + s * s
    if b2 == 0.0:
        return np.array([math.sqrt(covariance[0, 0]), math.inf, math.inf])
    b = math.sqrt(b2)
    # d(B, φ)/d(c, s) with B = hypot(c, s), φ = atan2(−s, c)
    jacobian = np.array([
        [1.0, 0.0, 0.0],
        [0.0, c / b, s / b],
        [0.0, s / b2, -c / b2],
    ])
    propagated = jacobian @ covariance @ jacobian.T
    return np.sqrt(np.clip(np.diag(propagated), 0.0, None))


def phase_scan_fit(scan: FringeScan) -> FringeFit:
    """Least-squares fit of P1(x) = A + B cos(x + φ) with B >= 0."""
    x, y = scan.x, scan.p1
    if len(x) < _MIN_FIT_POINTS:
        raise DomainError(f"need at least {_MIN_FIT_POINTS} points, got {len(x)}")
    if np.ptp(x) < 2.0 * math.pi * (1.0 - 1.0 / len(x)) - 1e-12:
        raise DomainError("scan must span at least one fringe period")

    # linear start: A + c cos x + s sin x
    design = np.column_stack([np.ones_like(x), np.cos(x), np.sin(x)])
    (a0, c, s), *_ = np.linalg.lstsq(design, y, rcond=None)
    linear_residuals = y - design @ np.array([a0, c, s])
    params = np.array([a0, math.hypot(c, s), math.atan2(-s, c)])

    if np.sqrt(np.mean(linear_residuals ** 2)) <= _EXACT_FIT_RMS:
        # noiseless fringe: the linear solve is already the optimum
        errors = _linear_errors(design, linear_residuals, c, s)
    else:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", OptimizeWarning)
                params, covariance = curve_fit(_fringe_model, x, y, p0=params, maxfev=10000)
        except RuntimeError as e:
            raise FitError(f"sinusoid fit did not converge: {e}",
                           residuals=linear_residuals.tolist()) from e
        errors = np.sqrt(np.clip(np.diag(covariance), 0.0, None))
        if not np.all(np.isfinite(errors)):
            errors = _linear_errors(design, linear_residuals, c, s)

    offset, amplitude, phase = (float(p) for p in params)
    if amplitude < 0:
        amplitude, phase = -amplitude, phase + math.pi
    if amplitude <= _EXACT_FIT_RMS:
        raise FitError("fringe has no modulation; phase is undefined",
                       residuals=linear_residuals.tolist())
    if not np.all(np.isfinite(errors)):
        raise FitError("parameter covariance could not be estimated",
                       residuals=(y - _fringe_model(x, *params)).tolist())
    residuals = y - _fringe_model(x, offset, amplitude, phase)
    return FringeFit(
        amplitude=amplitude,
        offset=offset,
        phase=_wrap(phase),
        amplitude_error=float(errors[1]),
        offset_error=float(errors[0]),
        phase_error=float(errors[2]),
        residual_rms=float(np.sqrt(np.mean(residuals ** 2))),
    )


def refine_gravity(fit: FringeFit, chirp_rate: float, order: int, T: float, species: AtomSpecies) -> float:
    """g from the fitted phase at a chirp α inside the central fringe: (πα + φ/2nT²)/k."""
    if order < 1 or T <= 0:
        raise DomainError("need order >= 1 and T > 0")
    return (math.pi * chirp_rate + fit.phase / (2.0 * order * T * T)) / species.wavenumber


def thermal_contrast(
    config: ApparatusConfig,
    n_atoms: Optional[int] = None,
    seed: Optional[int] = None,
) -> ContrastEstimate:
    """Monte-Carlo fringe contrast over the longitudinal velocity distribution.

    Each atom sees the 2n-photon detuning δ = 2nk·v for all three pulses of a
    square π/2-π-π/2 sequence with τ_π = `config.pi_pulse_duration`. Its fringe
    amplitude is 2√(p₁(1−p₁))·p₂·2√(p₃(1−p₃)); V is the ensemble mean.
    """
    n_atoms = settings.thermal_samples if n_atoms is None else n_atoms
    if n_atoms < 1:
        raise DomainError("need at least one atom")
    seed = settings.default_seed if seed is None else seed
    species = config.species
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    sigma_v = math.sqrt(BOLTZMANN * config.cloud.longitudinal_temperature / species.mass)
    velocity = rng.normal(0.0, sigma_v, n_atoms)
    delta = 2.0 * config.order * species.wavenumber * velocity

    effective = math.pi / config.pi_pulse_duration
    tau_pi, tau_half = pulse_durations(effective)
    splitter = np.asarray(off_resonant_transfer(effective, delta, tau_half))
    mirror = np.asarray(off_resonant_transfer(effective, delta, tau_pi))
    beam_split = 2.0 * np.sqrt(np.clip(splitter * (1.0 - splitter), 0.0, None))
    amplitude = beam_split * mirror * beam_split

    efficiency = float(np.mean(splitter)), float(np.mean(mirror)), float(np.mean(splitter))
    contrast = float(np.mean(amplitude))
    logger.debug("thermal contrast %.4f from %d atoms (seed %d)", contrast, n_atoms, seed)
    return ContrastEstimate(contrast=contrast, transfer_efficiencies=efficiency,
                            n_atoms=n_atoms, seed=seed)
