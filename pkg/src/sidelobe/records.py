"""Append-only JSON-lines experiment log."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from . import __version__

SCHEMA_VERSION = 1
RECORD_ENV = "SIDELOBE_RECORD_FILE"
DEFAULT_RECORD_FILE = "sidelobe_records.jsonl"


@dataclass(frozen=True)
class ExperimentRecord:
    schema_version: int
    timestamp: str
    command: list
    inputs: dict
    outputs: dict
    elapsed_ms: int
    tool_version: str

    @classmethod
    def create(cls, command, inputs, outputs, elapsed_ms):
        return cls(
            SCHEMA_VERSION,
            datetime.now(timezone.utc).isoformat(timespec="milliseconds"),
            list(command),
            inputs,
            outputs,
            int(elapsed_ms),
            __version__,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "ExperimentRecord":
        return cls(**json.loads(line))


def record_path(flag: Optional[str] = None) -> Path:
    """Flag, then environment, then a file in the working directory."""
    return Path(flag or os.environ.get(RECORD_ENV) or DEFAULT_RECORD_FILE)


def append_record(record: ExperimentRecord, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(record.to_json() + "\n")


def read_records(path: Path) -> list[ExperimentRecord]:
    with open(path, encoding="utf-8") as fh:
        return [ExperimentRecord.from_json(line) for line in fh if line.strip()]
