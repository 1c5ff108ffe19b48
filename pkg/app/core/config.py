"""
Unified configuration settings for the Bragg gravimeter toolkit.
Every tunable default lives here; environment variables (prefix BRAGG_) win.
"""
import os
from pathlib import Path

from pydantic import BaseModel, Field, field_validator
from dotenv import load_dotenv

load_dotenv()


class Settings(BaseModel):
    """Unified application settings."""

    # API Settings
    API_V1_STR: str = "/api/v1"
    PROJECT_NAME: str = "Bragg Gravimeter Toolkit"
    VERSION: str = "0.4.0"
    DESCRIPTION: str = "Design requirements and simulation for nth-order Bragg atom gravimeters"

    # Server Settings
    HOST: str = Field(default=os.getenv("BRAGG_HOST", "127.0.0.1"))
    PORT: int = Field(default=int(os.getenv("BRAGG_PORT", "8000")))
    DEBUG: bool = Field(default=(os.getenv("BRAGG_DEBUG", "false").lower() == "true"))
    allowed_origins: list[str] = Field(default=os.getenv("BRAGG_ALLOWED_ORIGINS", "*").split(","))

    log_level: str = Field(default=os.getenv("BRAGG_LOG_LEVEL", "WARNING"))

    # Reproducibility and output
    default_seed: int = Field(default=int(os.getenv("BRAGG_SEED", "20160329")))
    output_dir: Path = Field(default=Path(os.getenv("BRAGG_OUTPUT_DIR", "out")))

    # Momentum-ladder integrator
    ladder_norm_tolerance: float = Field(default=float(os.getenv("BRAGG_LADDER_NORM_TOL", "1e-9")))
    ladder_step_tolerance: float = Field(default=float(os.getenv("BRAGG_LADDER_STEP_TOL", "1e-8")))
    ladder_edge_population: float = Field(default=float(os.getenv("BRAGG_LADDER_EDGE_POP", "1e-6")))
    ladder_max_half_width: int = Field(default=int(os.getenv("BRAGG_LADDER_MAX_HALF_WIDTH", "60")))
    ladder_max_steps: int = Field(default=int(os.getenv("BRAGG_LADDER_MAX_STEPS", "200000")))

    # Interferometer simulation
    thermal_samples: int = Field(default=int(os.getenv("BRAGG_THERMAL_SAMPLES", "100000")))
    alpha_half_width_hz_per_s: float = Field(default=float(os.getenv("BRAGG_ALPHA_HALF_WIDTH", "4000")))
    chirp_samples: int = Field(default=int(os.getenv("BRAGG_CHIRP_SAMPLES", "4001")))
    phase_points: int = Field(default=int(os.getenv("BRAGG_PHASE_POINTS", "100")))

    # Requirement reporting
    much_less_margin: float = Field(default=float(os.getenv("BRAGG_MUCH_LESS_MARGIN", "10")))
    loss_budget: float = Field(default=float(os.getenv("BRAGG_LOSS_BUDGET", "0.01")))

    @field_validator(
        "ladder_norm_tolerance",
        "ladder_step_tolerance",
        "ladder_edge_population",
        "alpha_half_width_hz_per_s",
        "much_less_margin",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("tolerances and margins must be positive")
        return v

    @field_validator("loss_budget")
    @classmethod
    def validate_loss_budget(cls, v: float) -> float:
        if not 0 < v < 1:
            raise ValueError("BRAGG_LOSS_BUDGET must lie in (0, 1)")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        return v.strip().upper()


# Global settings instance
settings = Settings()
