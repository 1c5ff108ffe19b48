"""
Simulated gravimetry routes.
"""
from fastapi import APIRouter, Depends

from app.core.dependencies import get_simulation_service, to_http_error
from app.core.errors import BraggToolkitError
from app.presets import resolve_apparatus
from app.schemas.api import ChirpSimulationResponse, PhaseSimulationResponse
from app.schemas.records import FringeFitRecord, FringeScanRecord, ResonanceRecord
from app.schemas.run_config import RunConfig
from app.services.simulation_service import SimulationService

router = APIRouter(prefix="/simulate", tags=["Simulation"])


@router.post("/chirp", response_model=ChirpSimulationResponse)
def simulate_chirp_scan(
    run: RunConfig,
    service: SimulationService = Depends(get_simulation_service),
):
    """Chirp-rate fringes for each T and, for two or more T, the extracted g."""
    try:
        config = resolve_apparatus(run)
        lo, hi = service.default_alpha_range(config)
        result = service.run_chirp(
            config,
            run.scan.interrogation_times,
            run.alpha_range(0.5 * (lo + hi), 0.5 * (hi - lo)),
            run.scan.samples,
            run.scan.contrast,
        )
    except BraggToolkitError as e:
        raise to_http_error(e)
    resonance = None
    if result.resonance is not None:
        resonance = ResonanceRecord.from_result(result.resonance, result.gravity)
    return ChirpSimulationResponse(
        scans=[FringeScanRecord.from_scan(s) for s in result.scans],
        resonance=resonance,
    )


@router.post("/phase", response_model=PhaseSimulationResponse)
def simulate_phase_scan(
    run: RunConfig,
    service: SimulationService = Depends(get_simulation_service),
):
    """Laser-phase fringe, its sinusoid fit and the refined g."""
    try:
        result = service.run_phase(
            resolve_apparatus(run),
            run.scan.chirp_rate,
            run.scan.phase_points,
            run.scan.contrast,
            run.scan.noise,
            run.output.seed,
        )
    except BraggToolkitError as e:
        raise to_http_error(e)
    return PhaseSimulationResponse(
        scan=FringeScanRecord.from_scan(result.scan),
        fit=FringeFitRecord.from_fit(result.fit),
        gravity=result.gravity,
    )
