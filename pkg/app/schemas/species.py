"""
Species file schema. Field names are part of the CLI contract.
"""
from pydantic import BaseModel, ConfigDict, Field


class SpeciesFile(BaseModel):
    """Species as written in a YAML key-value file (ordinary-frequency units)."""

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "name": "Rb87",
                "mass_kg": 1.443160648e-25,
                "wavelength_nm": 780.241,
                "linewidth_hz": 6.06e6,
                "hyperfine_ghz": 6.834682610904,
                "isat_mw_cm2": 2.68,
            }
        },
    )

    name: str = Field(min_length=1)
    mass_kg: float = Field(gt=0)
    wavelength_nm: float = Field(gt=0)
    linewidth_hz: float = Field(gt=0)
    hyperfine_ghz: float = Field(gt=0)
    isat_mw_cm2: float = Field(gt=0)
