"""
Species API routes.
"""
from fastapi import APIRouter

from app.atoms import bragg_bandwidth, recoil_frequency
from app.models.species import RUBIDIUM_87
from app.schemas.api import SpeciesResponse

router = APIRouter(prefix="/species", tags=["Species"])


@router.get("/builtin", response_model=SpeciesResponse)
def get_builtin_species():
    """Bundled 87Rb entry with its recoil constants [rad/s]."""
    return SpeciesResponse(
        **RUBIDIUM_87.to_file_fields(),
        recoil_frequency=recoil_frequency(RUBIDIUM_87),
        bragg_bandwidth=bragg_bandwidth(RUBIDIUM_87),
    )
