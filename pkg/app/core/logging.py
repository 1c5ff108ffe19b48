"""
Logging setup. Modules log through logging.getLogger(__name__); the CLI and
the API call configure_logging once at start-up.
"""
import logging

from rich.logging import RichHandler

from app.core.config import settings

_configured = False


def configure_logging(level: str | None = None) -> None:
    """Attach a rich handler to the root logger (idempotent)."""
    global _configured
    level_name = (level or settings.log_level).upper()
    root = logging.getLogger()
    root.setLevel(level_name)
    if _configured:
        return
    handler = RichHandler(rich_tracebacks=True, show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(name)s: %(message)s"))
    root.addHandler(handler)
    _configured = True
