"""
Command-line front end: requirements | table1 | simulate | sequence | ladder | species.

    python -m app.cli requirements --preset typical --out out/
    python -m app.cli simulate -T 0.04 -T 0.05 -T 0.06 --seed 7

A YAML run config supplies defaults; flags override it.
"""
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from app.atoms import bragg_bandwidth, load_species, recoil_frequency
from app.core.config import settings
from app.core.errors import BraggToolkitError
from app.core.logging import configure_logging
from app.models.apparatus import ApparatusConfig
from app.models.species import TWO_PI
from app.presets import (
    TABLE_BEC_DIAMETER,
    TABLE_VELOCITY_SELECTED_DIAMETER,
    preset_names,
    resolve_apparatus,
)
from app.schemas.run_config import OutputFormat, RunConfig, ScanType
from app.services.requirements_service import RequirementsService
from app.services.sequence_service import SequenceService
from app.services.simulation_service import SimulationService
from app.utils import sig4

app = typer.Typer(help="Design and simulation toolkit for nth-order Bragg atom gravimeters.", no_args_is_help=True)
console = Console(soft_wrap=True)
err_console = Console(stderr=True, soft_wrap=True)

ConfigOption = typer.Option(None, "--config", "-c", help="YAML run config.")
SpeciesOption = typer.Option(None, "--species", help="Species YAML file or 'builtin'.")
PresetOption = typer.Option(None, "--preset", help=f"One of {', '.join(preset_names())}.")
OutOption = typer.Option(None, "--out", "-o", help="Output directory.")
FormatOption = typer.Option(None, "--format", "-f", help="csv or record.")
LogLevelOption = typer.Option(None, "--log-level", help="Python logging level.")


def _fail(error: Exception) -> None:
    err_console.print(f"[red]error:[/red] {escape(str(error))}", markup=True, highlight=False)
    raise typer.Exit(code=1)


def _load_run(config: Optional[Path], flags: Dict[str, Any]) -> RunConfig:
    """Run config from file, with every non-None flag written over it."""
    base = RunConfig.from_yaml(config) if config else RunConfig()
    data = base.model_dump(exclude_unset=True, mode="json")
    for dotted, value in flags.items():
        if value is None:
            continue
        section = data
        *parents, leaf = dotted.split(".")
        for part in parents:
            section = section.setdefault(part, {})
        section[leaf] = value
    return RunConfig.from_mapping(data)


def _apparatus_flags(
    order: Optional[int],
    interrogation_time: Optional[float],
    first_pulse_time: Optional[float],
    detuning_ghz: Optional[float],
    beam_diameter: Optional[float],
    curvature: Optional[float],
    pi_pulse_duration: Optional[float],
    transverse_temperature: Optional[float],
    longitudinal_temperature: Optional[float],
) -> Dict[str, Any]:
    return {
        "apparatus.order": order,
        "apparatus.interrogation_time": interrogation_time,
        "apparatus.first_pulse_time": first_pulse_time,
        "apparatus.detuning_ghz": detuning_ghz,
        "apparatus.beam_diameter": beam_diameter,
        "apparatus.curvature": curvature,
        "apparatus.pi_pulse_duration": pi_pulse_duration,
        "apparatus.cloud.transverse_temperature": transverse_temperature,
        "apparatus.cloud.longitudinal_temperature": longitudinal_temperature,
    }


def _common_flags(species: Optional[str], preset: Optional[str], out: Optional[Path],
                  fmt: Optional[OutputFormat], seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "species": species,
        "preset": preset,
        "output.directory": str(out) if out else None,
        "output.format": fmt.value if fmt else None,
        "output.seed": seed,
    }


def _out_dir(run: RunConfig) -> Path:
    return Path(run.output.directory or settings.output_dir)


def _describe(config: ApparatusConfig) -> str:
    return (f"{config.species.name}, n = {config.order}, T = {sig4(config.interrogation_time * 1e3)} ms, "
            f"t0 = {sig4(config.first_pulse_time * 1e3)} ms")


@app.callback()
def main(log_level: Optional[str] = LogLevelOption) -> None:
    configure_logging(log_level)


@app.command()
def requirements(
    config: Optional[Path] = ConfigOption,
    species: Optional[str] = SpeciesOption,
    preset: Optional[str] = PresetOption,
    out: Optional[Path] = OutOption,
    fmt: Optional[OutputFormat] = FormatOption,
    order: Optional[int] = typer.Option(None, "--order", "-n"),
    interrogation_time: Optional[float] = typer.Option(None, "--interrogation-time", "-T", help="s"),
    first_pulse_time: Optional[float] = typer.Option(None, "--first-pulse-time", help="t0, s"),
    detuning_ghz: Optional[float] = typer.Option(None, "--detuning-ghz"),
    beam_diameter: Optional[float] = typer.Option(None, "--beam-diameter", help="m"),
    curvature: Optional[float] = typer.Option(None, "--curvature", help="m"),
    pi_pulse_duration: Optional[float] = typer.Option(None, "--pi-pulse-duration", help="s"),
    transverse_temperature: Optional[float] = typer.Option(None, "--transverse-temperature", help="K"),
    longitudinal_temperature: Optional[float] = typer.Option(None, "--longitudinal-temperature", help="K"),
) -> None:
    """Evaluate every design bound; exit 0 only if all pass."""
    try:
        run = _load_run(config, {
            **_common_flags(species, preset, out, fmt),
            **_apparatus_flags(order, interrogation_time, first_pulse_time, detuning_ghz, beam_diameter,
                               curvature, pi_pulse_duration, transverse_temperature, longitudinal_temperature),
        })
        apparatus = resolve_apparatus(run)
        service = RequirementsService()
        report = service.evaluate(apparatus)
        paths = service.save_report(report, apparatus, _out_dir(run), record=run.output.format is OutputFormat.RECORD)
    except BraggToolkitError as e:
        _fail(e)
    console.print(service.render(report), highlight=False, markup=False)
    for path in paths:
        console.print(f"wrote {path}", highlight=False, markup=False)
    if not report.passed:
        raise typer.Exit(code=1)


@app.command()
def table1(
    config: Optional[Path] = ConfigOption,
    species: Optional[str] = SpeciesOption,
    out: Optional[Path] = OutOption,
    fmt: Optional[OutputFormat] = FormatOption,
    orders: Optional[List[int]] = typer.Option(None, "--order", "-n", help="Repeat per column."),
    taus: Optional[List[float]] = typer.Option(None, "--tau", help="π-pulse duration in 1/ω_r, one per order."),
    detuning_ghz: Optional[float] = typer.Option(None, "--detuning-ghz"),
    bec_diameter: Optional[float] = typer.Option(None, "--bec-diameter", help="m"),
    velocity_selected_diameter: Optional[float] = typer.Option(None, "--velocity-selected-diameter", help="m"),
) -> None:
    """Optimal laser parameters per diffraction order."""
    try:
        run = _load_run(config, {
            **_common_flags(species, None, out, fmt),
            "table.orders": list(orders) if orders else None,
            "table.pulse_durations": list(taus) if taus else None,
            "table.detuning_ghz": detuning_ghz,
            "table.bec_diameter": bec_diameter,
            "table.velocity_selected_diameter": velocity_selected_diameter,
        })
        section = run.table
        atom = load_species(run.species, use_default=True)
        detuning = 2 * math.pi * section.detuning_ghz * 1e9
        diameters = (section.bec_diameter or TABLE_BEC_DIAMETER,
                     section.velocity_selected_diameter or TABLE_VELOCITY_SELECTED_DIAMETER)
        service = RequirementsService()
        rows = service.table(atom, section.orders, section.pulse_durations, detuning, *diameters)
        path = service.save_table(rows, atom, _out_dir(run), detuning, diameters,
                                  record=run.output.format is OutputFormat.RECORD)
    except BraggToolkitError as e:
        _fail(e)
    table = Table(title=f"Optimal laser parameters, Δ = 2π × {sig4(section.detuning_ghz)} GHz")
    for column in ("n", "τ [1/ω_r]", "Ω₂ [ω_r]", "I [mW/cm²]", "P BEC [mW]", "P vel. sel. [mW]", "N_s"):
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(str(row.order), sig4(row.pulse_duration), sig4(row.two_photon_rabi),
                      sig4(row.intensity / 10), sig4(row.power_bec * 1e3),
                      sig4(row.power_velocity_selected * 1e3), sig4(row.spontaneous_loss))
    console.print(table)
    console.print(f"wrote {path}", highlight=False, markup=False)


@app.command()
def simulate(
    config: Optional[Path] = ConfigOption,
    species: Optional[str] = SpeciesOption,
    preset: Optional[str] = PresetOption,
    out: Optional[Path] = OutOption,
    fmt: Optional[OutputFormat] = FormatOption,
    seed: Optional[int] = typer.Option(None, "--seed"),
    kind: Optional[ScanType] = typer.Option(None, "--kind"),
    times: Optional[List[float]] = typer.Option(None, "--interrogation-time", "-T", help="s; repeat per fringe."),
    alpha_min: Optional[float] = typer.Option(None, "--alpha-min", help="Hz/s"),
    alpha_max: Optional[float] = typer.Option(None, "--alpha-max", help="Hz/s"),
    samples: Optional[int] = typer.Option(None, "--samples"),
    contrast: Optional[float] = typer.Option(None, "--contrast"),
    chirp_rate: Optional[float] = typer.Option(None, "--chirp-rate", help="Hz/s, phase scans"),
    points: Optional[int] = typer.Option(None, "--points", help="phase scan points"),
    noise: Optional[float] = typer.Option(None, "--noise", help="additive Gaussian σ on P1"),
    order: Optional[int] = typer.Option(None, "--order", "-n"),
) -> None:
    """Simulate chirp-rate or laser-phase fringes and extract g."""
    try:
        run = _load_run(config, {
            **_common_flags(species, preset, out, fmt, seed),
            "apparatus.order": order,
            "scan.kind": kind.value if kind else None,
            "scan.interrogation_times": list(times) if times else None,
            "scan.alpha_min": alpha_min,
            "scan.alpha_max": alpha_max,
            "scan.samples": samples,
            "scan.contrast": contrast,
            "scan.chirp_rate": chirp_rate,
            "scan.phase_points": points,
            "scan.noise": noise,
        })
        apparatus = resolve_apparatus(run)
        service = SimulationService()
        record = run.output.format is OutputFormat.RECORD
        directory = _out_dir(run)
        if run.scan.kind is ScanType.PHASE:
            phase_run = service.run_phase(apparatus, run.scan.chirp_rate, run.scan.phase_points,
                                          run.scan.contrast, run.scan.noise, run.output.seed)
            paths = service.save_scans([phase_run.scan], apparatus, directory, record, run.output.seed)
            paths.append(service.save_summary(phase_run, apparatus, directory))
            fit = phase_run.fit
            summary = [
                f"phase scan: {_describe(apparatus)}",
                f"contrast = {sig4(fit.contrast)} ± {sig4(2 * fit.amplitude_error)}",
                f"phase = {sig4(fit.phase)} ± {sig4(fit.phase_error)} rad",
                f"g = {phase_run.gravity:.10g} m/s^2",
            ]
        else:
            lo, hi = service.default_alpha_range(apparatus)
            alpha_range = run.alpha_range(0.5 * (lo + hi), 0.5 * (hi - lo))
            chirp_run = service.run_chirp(apparatus, run.scan.interrogation_times, alpha_range,
                                          run.scan.samples, run.scan.contrast)
            paths = service.save_scans(chirp_run.scans, apparatus, directory, record, run.output.seed)
            summary = [f"chirp scan: {_describe(apparatus)}, {len(chirp_run.scans)} fringes"]
            if chirp_run.resonance is not None:
                paths.append(service.save_summary(chirp_run, apparatus, directory))
                summary += [
                    f"alpha0 = {chirp_run.resonance.chirp_rate:.10g} Hz/s "
                    f"(residual variance {sig4(chirp_run.resonance.residual_variance)})",
                    f"g = {chirp_run.gravity:.10g} m/s^2",
                ]
                if chirp_run.resonance.aliases:
                    summary.append("aliases at " + ", ".join(f"{a:.8g}" for a in chirp_run.resonance.aliases))
    except BraggToolkitError as e:
        _fail(e)
    for line in summary:
        console.print(line, highlight=False, markup=False)
    for path in paths:
        console.print(f"wrote {path}", highlight=False, markup=False)


@app.command()
def sequence(
    config: Optional[Path] = ConfigOption,
    species: Optional[str] = SpeciesOption,
    preset: Optional[str] = PresetOption,
    out: Optional[Path] = OutOption,
    order: Optional[int] = typer.Option(None, "--order", "-n"),
    interrogation_time: Optional[float] = typer.Option(None, "--interrogation-time", "-T", help="s"),
    first_pulse_time: Optional[float] = typer.Option(None, "--first-pulse-time", help="t0, s"),
    detuning_ghz: Optional[float] = typer.Option(None, "--detuning-ghz"),
    pi_pulse_duration: Optional[float] = typer.Option(None, "--pi-pulse-duration", help="s"),
) -> None:
    """Build, validate and export the timing schedule (CSV and record)."""
    try:
        run = _load_run(config, {
            **_common_flags(species, preset, out, None),
            **_apparatus_flags(order, interrogation_time, first_pulse_time, detuning_ghz, None, None,
                               pi_pulse_duration, None, None),
        })
        apparatus = resolve_apparatus(run)
        service = SequenceService()
        schedule, violations = service.build(apparatus)
        paths = service.save(schedule, apparatus, _out_dir(run))
    except BraggToolkitError as e:
        _fail(e)
    first = schedule.events[0]
    console.print(f"schedule: {_describe(apparatus)}", highlight=False, markup=False)
    console.print(f"initial offset = {sig4(first.freq_offset_start / bragg_bandwidth(apparatus.species))} delta_B "
                  f"({sig4(first.freq_offset_start / TWO_PI / 1e3)} kHz), "
                  f"chirp = {sig4(first.chirp_slope / TWO_PI / 1e6)} MHz/s", highlight=False, markup=False)
    console.print("pulse centres [ms]: " + ", ".join(sig4(c * 1e3) for c in schedule.pulse_centres),
                  highlight=False, markup=False)
    for v in violations:
        console.print(f"violation {v.code}: {v.message}", highlight=False, markup=False)
    console.print("valid" if not violations else f"{len(violations)} violations", highlight=False, markup=False)
    for path in paths:
        console.print(f"wrote {path}", highlight=False, markup=False)
    if violations:
        raise typer.Exit(code=1)


@app.command()
def ladder(
    species: Optional[str] = SpeciesOption,
    out: Optional[Path] = OutOption,
    order: int = typer.Option(1, "--order", "-n"),
    rabi: float = typer.Option(0.2, "--rabi", help="Ω₂ in units of ω_r."),
    omega_eff: Optional[float] = typer.Option(None, "--omega-eff", help="ω_eff in units of ω_r; default 4n."),
    duration: Optional[float] = typer.Option(None, "--duration", help="s; default a closed-form π pulse."),
    detuning_ghz: float = typer.Option(1.0, "--detuning-ghz"),
    samples: int = typer.Option(201, "--samples"),
) -> None:
    """Integrate one square pulse on the momentum ladder and compare with the closed form."""
    try:
        atom = load_species(species, use_default=True)
        wr = recoil_frequency(atom)
        service = SimulationService()
        trajectory, expected = service.run_ladder(
            atom, order, rabi * wr, 2 * math.pi * detuning_ghz * 1e9, duration,
            omega_eff * wr if omega_eff is not None else None, samples,
        )
        used = {"order": order, "rabi_wr": rabi, "omega_eff_wr": omega_eff, "duration": duration,
                "detuning_ghz": detuning_ghz, "species": atom.to_dict()}
        path = service.save_trajectory(trajectory, atom, used, Path(out or settings.output_dir))
    except BraggToolkitError as e:
        _fail(e)
    final = trajectory.final
    console.print(f"ladder m = {trajectory.m_min}..{trajectory.m_max}, {trajectory.steps} steps, "
                  f"norm error {trajectory.max_norm_error:.2e}", highlight=False, markup=False)
    console.print(f"P(m = {order}) = {final.population(order):.6f}; closed form {expected:.6f}",
                  highlight=False, markup=False)
    console.print(f"wrote {path}", highlight=False, markup=False)


@app.command("species")
def show_species(source: Optional[str] = typer.Argument(None, help="Species YAML file; builtin if omitted.")) -> None:
    """Show a species and its recoil constants."""
    try:
        atom = load_species(source, use_default=True)
    except BraggToolkitError as e:
        _fail(e)
    table = Table(title=atom.name)
    table.add_column("field")
    table.add_column("value", justify="right")
    for key, value in atom.to_file_fields().items():
        table.add_row(key, str(value))
    table.add_row("recoil frequency [2π kHz]", sig4(recoil_frequency(atom) / TWO_PI / 1e3))
    table.add_row("Bragg bandwidth [2π kHz]", sig4(bragg_bandwidth(atom) / TWO_PI / 1e3))
    console.print(table)


if __name__ == "__main__":
    app()
