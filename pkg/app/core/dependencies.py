"""
Dependency injection container and FastAPI dependencies.
"""
from fastapi import HTTPException, status

from app.core.errors import BraggToolkitError, PersistenceError
from app.services.requirements_service import RequirementsService
from app.services.sequence_service import SequenceService
from app.services.simulation_service import SimulationService

# Service instances (singleton pattern)
_requirements_service = None
_simulation_service = None
_sequence_service = None


def get_requirements_service() -> RequirementsService:
    """Get requirements service instance."""
    global _requirements_service
    if _requirements_service is None:
        _requirements_service = RequirementsService()
    return _requirements_service


def get_simulation_service() -> SimulationService:
    """Get simulation service instance."""
    global _simulation_service
    if _simulation_service is None:
        _simulation_service = SimulationService()
    return _simulation_service


def get_sequence_service() -> SequenceService:
    """Get sequence service instance."""
    global _sequence_service
    if _sequence_service is None:
        _sequence_service = SequenceService()
    return _sequence_service


def to_http_error(error: BraggToolkitError) -> HTTPException:
    """Missing files are 404; every other toolkit error is a 422."""
    if isinstance(error, PersistenceError):
        return HTTPException(status_code=status.HTTP_404_NOT_FOUND, detail=str(error))
    return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(error))
