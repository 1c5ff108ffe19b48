"""
Exception hierarchy shared by the physics modules, services, CLI and API.
"""
from typing import Any, Dict, List, Optional


class BraggToolkitError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class SpeciesValidationError(BraggToolkitError, ValueError):
    """A species field is missing or non-positive."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"invalid species field '{field}': {message}")


class ConfigValidationError(BraggToolkitError, ValueError):
    """An apparatus or run configuration field is invalid."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"invalid config field '{field}': {message}")


class DomainError(BraggToolkitError, ValueError):
    """An argument lies outside the domain of an operation."""


class IntegrationError(BraggToolkitError):
    """The momentum-ladder integrator could not meet its tolerances."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        self.diagnostics = diagnostics or {}
        detail = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        super().__init__(f"{message} ({detail})" if detail else message)


class ResonanceNotFoundError(BraggToolkitError):
    """No chirp rate is a common fringe extremum across the scans."""

    def __init__(self, message: str, extrema: Optional[Dict[float, List[float]]] = None):
        self.extrema = extrema or {}
        super().__init__(message)


class FitError(BraggToolkitError):
    """Sinusoid least-squares fit failed."""

    def __init__(self, message: str, residuals: Optional[List[float]] = None):
        self.residuals = residuals or []
        super().__init__(message)


class ScheduleBuildError(BraggToolkitError):
    """A timing schedule cannot be built for the given configuration."""


class PersistenceError(BraggToolkitError):
    """Reading or writing an artifact file failed."""

    def __init__(self, path: Any, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
