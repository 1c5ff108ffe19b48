"""
API v1 router initialization.
"""
from fastapi import APIRouter

from app.api.v1 import requirements, sequence, simulate, species
from app.core.config import settings

# Create main API router
api_router = APIRouter()

# Include all sub-routers
api_router.include_router(species.router)
api_router.include_router(requirements.router)
api_router.include_router(simulate.router)
api_router.include_router(sequence.router)


# Health check endpoint
@api_router.get("/health", tags=["Health"])
def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "version": settings.VERSION}
