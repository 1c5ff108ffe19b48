"""
Timing program of one gravimeter shot: free fall, π/2-π-π/2 Bragg pulses with
equal intensity, and a continuous frequency-difference ramp nδ_B + 2kg·t that
keeps the falling atoms on the order-n resonance.

Interrogation time T is measured centre to centre; the ramp runs from release.
"""
from __future__ import annotations

import io
import logging
from enum import Enum
from typing import List

import pandas as pd

from app.atoms import bragg_bandwidth
from app.core.errors import DomainError, PersistenceError, ScheduleBuildError
from app.dynamics import effective_rabi, pulse_durations, resonance_frequency
from app.models.apparatus import ApparatusConfig
from app.models.schedule import EventKind, ScheduleEvent, ScheduleViolation, TimingSchedule
from app.models.species import AtomSpecies, TWO_PI
from app.requirements import intensity_from_rabi, min_fall_time
from app.schemas.records import ScheduleRecord
from app.utils import config_hash, header_lines, metadata_header

logger = logging.getLogger(__name__)

CSV_COLUMNS = [
    "t_start",
    "duration",
    "kind",
    "intensity",
    "freq_offset_start_hz",
    "chirp_slope_hz_per_s",
]
CSV_UNITS = "t_start,duration: s; intensity: W/m^2; freq_offset_start_hz: Hz; chirp_slope_hz_per_s: Hz/s"

# Centre spacing must match T to this [s].
SPACING_TOLERANCE = 1e-6
# Frequency tracking during pulses, relative to δ_B.
TRACKING_TOLERANCE = 1e-6
_TIME_EPSILON = 1e-12


class ScheduleFormat(str, Enum):
    CSV = "csv"
    RECORD = "record"


def build_schedule(config: ApparatusConfig, two_photon_rabi: float) -> TimingSchedule:
    """Wait t₀, then three pulses T apart centre to centre on a continuous chirp.

    The first π/2 pulse switches on at t₀, so detection follows at t₀ + 2T + τ_π/2.
    """
    if two_photon_rabi <= 0:
        raise ScheduleBuildError("two-photon Rabi frequency must be positive")
    species = config.species
    n, T, t0 = config.order, config.interrogation_time, config.first_pulse_time

    t_min = min_fall_time(n, species, config.gravity)
    if t0 < t_min * (1.0 - 1e-12):
        raise ScheduleBuildError(
            f"fall time {t0 * 1e3:.4g} ms is below the {t_min * 1e3:.4g} ms bound "
            f"n·δ_B/(2kg) for order {n}; the counter-propagating lattice would also be resonant"
        )

    tau_pi, tau_half = pulse_durations(effective_rabi(n, two_photon_rabi, species))
    if 0.5 * tau_half + 0.5 * tau_pi >= T:
        raise ScheduleBuildError(
            f"pulses overlap: τ_π = {tau_pi * 1e6:.4g} µs does not fit in T = {T * 1e3:.4g} ms"
        )

    intensity = intensity_from_rabi(two_photon_rabi, config.detuning, species)
    slope = 2.0 * species.wavenumber * config.gravity
    start_offset = n * bragg_bandwidth(species)
    first_centre = t0 + 0.5 * tau_half

    def segment(t_start: float, t_end: float, kind: EventKind, power: float) -> ScheduleEvent:
        return ScheduleEvent(
            t_start=t_start,
            duration=t_end - t_start,
            kind=kind,
            intensity=power,
            freq_offset_start=start_offset + slope * t_start,
            chirp_slope=slope,
        )

    pulses = [
        (t0, tau_half, EventKind.PULSE_HALF_PI),
        (first_centre + T - 0.5 * tau_pi, tau_pi, EventKind.PULSE_PI),
        (first_centre + 2.0 * T - 0.5 * tau_half, tau_half, EventKind.PULSE_HALF_PI),
    ]
    events: List[ScheduleEvent] = []
    cursor = 0.0
    for i, (start, duration, kind) in enumerate(pulses):
        end = start + duration
        if start > cursor:
            gap = EventKind.WAIT if i == 0 else EventKind.RAMP_SEGMENT
            events.append(segment(cursor, start, gap, 0.0))
        events.append(segment(start, end, kind, intensity))
        cursor = end

    metadata = metadata_header(species.name, config_hash(config), {
        "min_fall_time": t_min,
        "pi_pulse_duration": tau_pi,
    })
    logger.debug("schedule built: %d events, τ_π = %.4g s, I = %.4g W/m^2", len(events), tau_pi, intensity)
    return TimingSchedule(
        events=tuple(events),
        order=n,
        interrogation_time=T,
        two_photon_rabi=two_photon_rabi,
        species=species.name,
        metadata=metadata,
    )


def validate_schedule(schedule: TimingSchedule, config: ApparatusConfig) -> List[ScheduleViolation]:
    """Every broken invariant of a schedule as data; empty when it is valid."""
    species = config.species
    delta_b = bragg_bandwidth(species)
    violations: List[ScheduleViolation] = []
    events = schedule.events

    for prev, nxt in zip(events, events[1:]):
        if nxt.t_start < prev.t_end - _TIME_EPSILON:
            violations.append(ScheduleViolation(
                "ordering", f"event at {nxt.t_start:.9g} s starts before the previous one ends",
                prev.t_end - nxt.t_start))
        gap = abs(prev.offset_at(prev.t_end) - nxt.freq_offset_start)
        if gap > 1e-9 * max(abs(nxt.freq_offset_start), delta_b):
            violations.append(ScheduleViolation(
                "continuity", f"frequency offset jumps at {nxt.t_start:.9g} s", gap))
    for e in events:
        if e.duration < 0:
            violations.append(ScheduleViolation("ordering", f"negative duration at {e.t_start:.9g} s", -e.duration))

    pulses = schedule.pulses
    kinds = [p.kind for p in pulses]
    expected = [EventKind.PULSE_HALF_PI, EventKind.PULSE_PI, EventKind.PULSE_HALF_PI]
    if kinds != expected:
        violations.append(ScheduleViolation(
            "pulse_sequence", f"expected pulses π/2, π, π/2, got {[k.value for k in kinds]}", len(pulses)))
        return violations

    tau_pi, tau_half = pulse_durations(effective_rabi(schedule.order, schedule.two_photon_rabi, species))
    durations = [p.duration for p in pulses]
    mismatch = max(abs(d - e) for d, e in zip(durations, (tau_half, tau_pi, tau_half)))
    if mismatch > 1e-9 * tau_pi:
        violations.append(ScheduleViolation(
            "pulse_order", f"pulse durations {durations} do not follow τ_π/2, τ_π, τ_π/2", mismatch))

    centres = schedule.pulse_centres
    for a, b in zip(centres, centres[1:]):
        error = abs((b - a) - config.interrogation_time)
        if error > SPACING_TOLERANCE:
            violations.append(ScheduleViolation(
                "interrogation_time", f"pulse centres {a:.9g} s and {b:.9g} s are not T apart", error))

    t_min = min_fall_time(schedule.order, species, config.gravity)
    first_light = pulses[0].t_start
    if first_light < t_min * (1.0 - 1e-12):
        violations.append(ScheduleViolation(
            "fall_time", f"first pulse at {first_light * 1e3:.4g} ms is before {t_min * 1e3:.4g} ms",
            t_min - first_light))

    intensities = [p.intensity for p in pulses]
    if min(intensities) <= 0 or max(intensities) - min(intensities) > 1e-12 * max(intensities):
        violations.append(ScheduleViolation(
            "intensity", f"pulse intensities differ: {intensities}", max(intensities) - min(intensities)))

    for p in pulses:
        residuals = [
            abs(p.offset_at(t) - resonance_frequency(schedule.order, t, species, config.gravity))
            for t in (p.t_start, p.centre, p.t_end)
        ]
        if max(residuals) >= TRACKING_TOLERANCE * delta_b:
            violations.append(ScheduleViolation(
                "frequency_tracking",
                f"{p.kind.value} at {p.centre:.9g} s is off resonance by {residuals[1] / TWO_PI:.6g} Hz",
                residuals[1]))
    return violations


def schedule_frame(schedule: TimingSchedule) -> pd.DataFrame:
    """Event rows in ordinary-frequency units."""
    return pd.DataFrame(
        [
            (e.t_start, e.duration, e.kind.value, e.intensity, e.freq_offset_start / TWO_PI, e.chirp_slope / TWO_PI)
            for e in schedule.events
        ],
        columns=CSV_COLUMNS,
    )


def export_schedule(schedule: TimingSchedule, fmt: ScheduleFormat = ScheduleFormat.CSV) -> str:
    """CSV (ordinary-frequency units, metadata header) or JSON record."""
    fmt = ScheduleFormat(fmt)
    if fmt is ScheduleFormat.RECORD:
        return ScheduleRecord.from_schedule(schedule).model_dump_json(indent=2)
    frame = schedule_frame(schedule)
    header = dict(schedule.metadata, order=schedule.order, units=CSV_UNITS)
    lines = header_lines(header)
    return "\n".join(lines) + "\n" + frame.to_csv(index=False, float_format="%.17g")


def import_schedule(document: str, fmt: ScheduleFormat = ScheduleFormat.RECORD) -> TimingSchedule:
    """Inverse of export_schedule for the record format."""
    if ScheduleFormat(fmt) is not ScheduleFormat.RECORD:
        raise DomainError("only the record format carries enough metadata to re-import")
    try:
        return ScheduleRecord.model_validate_json(document).to_schedule()
    except ValueError as e:
        raise PersistenceError("<schedule record>", str(e)) from e


def schedule_events_frame(document: str) -> pd.DataFrame:
    """Read the event rows of an exported schedule CSV."""
    try:
        return pd.read_csv(io.StringIO(document), comment="#")
    except (ValueError, pd.errors.ParserError) as e:
        raise PersistenceError("<schedule csv>", str(e)) from e


def pulse_area(schedule: TimingSchedule, species: AtomSpecies) -> float:
    """Ω_2n·τ of the middle pulse; π for a correctly built schedule."""
    pulses = schedule.pulses
    if len(pulses) != 3:
        raise DomainError("schedule has no π pulse")
    return effective_rabi(schedule.order, schedule.two_photon_rabi, species) * pulses[1].duration
