"""
Requirement report and optimal-parameter table routes.
"""
import math

from fastapi import APIRouter, Depends, Query

from app.atoms import load_species
from app.core.dependencies import get_requirements_service, to_http_error
from app.core.errors import BraggToolkitError
from app.presets import TABLE_BEC_DIAMETER, TABLE_VELOCITY_SELECTED_DIAMETER, resolve_apparatus
from app.schemas.api import RequirementsResponse
from app.schemas.records import ParameterTableRecord, RequirementReportRecord
from app.schemas.run_config import RunConfig
from app.services.requirements_service import RequirementsService

router = APIRouter(tags=["Requirements"])


@router.post("/requirements", response_model=RequirementsResponse)
def evaluate_requirements(
    run: RunConfig,
    service: RequirementsService = Depends(get_requirements_service),
):
    """Evaluate every design bound for the resolved apparatus."""
    try:
        report = service.evaluate(resolve_apparatus(run))
    except BraggToolkitError as e:
        raise to_http_error(e)
    return RequirementsResponse(report=RequirementReportRecord.from_report(report), text=service.render(report))


@router.get("/table1", response_model=ParameterTableRecord)
def get_parameter_table(
    detuning_ghz: float = Query(1.0, gt=0, description="Δ/2π in GHz"),
    species: str = Query("builtin"),
    service: RequirementsService = Depends(get_requirements_service),
):
    """Optimal laser parameters for the published orders and pulse durations."""
    detuning = 2 * math.pi * detuning_ghz * 1e9
    try:
        rows = service.table(load_species(species, use_default=True), detuning=detuning)
    except BraggToolkitError as e:
        raise to_http_error(e)
    return ParameterTableRecord.from_rows(rows, detuning, (TABLE_BEC_DIAMETER, TABLE_VELOCITY_SELECTED_DIAMETER))
