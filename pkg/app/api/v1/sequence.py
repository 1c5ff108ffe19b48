"""
Timing schedule routes.
"""
from fastapi import APIRouter, Depends

from app.core.dependencies import get_sequence_service, to_http_error
from app.core.errors import BraggToolkitError
from app.presets import resolve_apparatus
from app.schemas.api import SequenceResponse, ViolationResponse
from app.schemas.records import ScheduleRecord
from app.schemas.run_config import RunConfig
from app.services.sequence_service import SequenceService

router = APIRouter(prefix="/sequence", tags=["Sequence"])


@router.post("", response_model=SequenceResponse)
def build_sequence(
    run: RunConfig,
    service: SequenceService = Depends(get_sequence_service),
):
    """Build and validate the π/2-π-π/2 schedule for the resolved apparatus."""
    try:
        schedule, violations = service.build(resolve_apparatus(run))
    except BraggToolkitError as e:
        raise to_http_error(e)
    return SequenceResponse(
        schedule=ScheduleRecord.from_schedule(schedule),
        violations=[ViolationResponse(code=v.code, message=v.message, magnitude=v.magnitude) for v in violations],
        valid=not violations,
    )
