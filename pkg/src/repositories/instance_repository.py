"""Repository for instance and report JSON documents."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, TypeVar

from pydantic import BaseModel, ValidationError

from src.exceptions import InstanceFormatError
from src.models.schemas import DescentReportModel, InstanceFile

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)


def dump_json(payload: Any) -> str:
    """Canonical JSON text: indented, keys sorted, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


class InstanceRepository:
    """Reads and writes JSON documents on disk (or stdout when no path is given)."""

    def _load(self, path: Path, model: type[M]) -> M:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise InstanceFormatError(f"cannot read {path}: {e}") from None
        try:
            return model.model_validate_json(text)
        except ValidationError as e:
            raise InstanceFormatError(f"{path} is not a valid {model.__name__}: {e}") from None

    def load_instance(self, path: Path) -> InstanceFile:
        """Load an instance file.

        Args:
            path: JSON file written by `fixtures` or by hand

        Returns:
            The validated InstanceFile

        Raises:
            InstanceFormatError: If the file is missing, not JSON, or has unknown keys
        """
        instance = self._load(path, InstanceFile)
        logger.debug(f"Loaded {instance.kind} instance over {instance.field} from {path}")
        return instance

    def load_report(self, path: Path) -> DescentReportModel:
        """Load a descent report written by `descend`."""
        return self._load(path, DescentReportModel)

    def write(self, payload: Any, path: Optional[Path] = None) -> None:
        """Write a JSON-ready payload (or a pydantic model) to a file or stdout.

        Args:
            payload: dict, list or BaseModel
            path: Target file; None writes to stdout
        """
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json", exclude_none=True)
        text = dump_json(payload)
        if path is None:
            sys.stdout.write(text)
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {path}")
