from __future__ import annotations

import hashlib
import json
import math
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Mapping

from .core.config import settings


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)


def config_hash(payload: Any) -> str:
    """sha256 of the canonical JSON of a resolved config."""
    if hasattr(payload, "to_dict"):
        payload = payload.to_dict()
    return sha256(canonical_json(payload))


def metadata_header(species: str, digest: str, extra: Mapping[str, Any] | None = None) -> Dict[str, Any]:
    header: Dict[str, Any] = {
        "toolkit": settings.PROJECT_NAME,
        "version": settings.VERSION,
        "species": species,
        "config_sha256": digest,
    }
    header.update(extra or {})
    return header


def header_lines(header: Mapping[str, Any]) -> List[str]:
    """`# key: value` comment lines placed above CSV data."""
    return [f"# {key}: {value}" for key, value in header.items()]


def sig4(value: float) -> str:
    """Four significant figures for human-facing reports."""
    if value == 0 or not math.isfinite(value):
        return f"{value:g}"
    return f"{value:.4g}" if 1e-4 <= abs(value) < 1e6 else f"{value:.3e}"


@contextmanager
def timed() -> Iterator[dict[str, int]]:
    start = time.time()
    timings: dict[str, int] = {}
    try:
        yield timings
    finally:
        timings["total"] = int((time.time() - start) * 1000)
