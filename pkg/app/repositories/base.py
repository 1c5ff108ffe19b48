"""
Base repository pattern for artifact files.
Every file written carries a metadata header (toolkit version, species, config hash).
"""
import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Generic, List, Mapping, Tuple, TypeVar

from app.core.errors import PersistenceError
from app.utils import header_lines

T = TypeVar('T')

logger = logging.getLogger(__name__)


class BaseRepository(ABC, Generic[T]):
    """Base repository with common file operations."""

    suffix: str = ".txt"

    def __init__(self, directory: Path):
        self.directory = Path(directory)

    @abstractmethod
    def serialize(self, entity: T, header: Mapping[str, Any]) -> str:
        """Render an entity, header included."""
        pass

    @abstractmethod
    def deserialize(self, text: str) -> T:
        """Parse an entity back from a file body."""
        pass

    def path_for(self, name: str) -> Path:
        return self.directory / f"{name}{self.suffix}"

    def save(self, entity: T, name: str, header: Mapping[str, Any]) -> Path:
        """Write the entity and return its path."""
        path = self.path_for(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.serialize(entity, header), encoding="utf-8")
        except OSError as e:
            raise PersistenceError(path, f"cannot write: {e.strerror or e}") from e
        logger.debug("wrote %s", path)
        return path

    def load(self, path: Path) -> T:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise PersistenceError(path, f"cannot read: {e.strerror or e}") from e
        try:
            return self.deserialize(text)
        except (ValueError, KeyError) as e:
            raise PersistenceError(path, f"malformed {self.suffix} file: {e}") from e

    def exists(self, name: str) -> bool:
        return self.path_for(name).is_file()


class CsvRepository(BaseRepository[T]):
    """CSV body below `# key: value` header lines."""

    suffix = ".csv"

    @staticmethod
    def with_header(body: str, header: Mapping[str, Any]) -> str:
        return "\n".join(header_lines(header)) + "\n" + body

    @staticmethod
    def split_header(text: str) -> Tuple[Dict[str, str], str]:
        header: Dict[str, str] = {}
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith("# ") and ": " in line and not body:
                key, value = line[2:].split(": ", 1)
                header[key] = value
            else:
                body.append(line)
        return header, "\n".join(body) + "\n"


class RecordRepository(BaseRepository[T]):
    """JSON document {"header": {...}, "record": {...}}."""

    suffix = ".json"

    @staticmethod
    def wrap(record_json: str, header: Mapping[str, Any]) -> str:
        return '{\n"header": ' + json.dumps(dict(header), default=str) + ',\n"record": ' + record_json + "\n}\n"

    @staticmethod
    def unwrap(text: str) -> Tuple[Dict[str, Any], str]:
        document = json.loads(text)
        return document.get("header", {}), json.dumps(document["record"])
