"""
Run Manifest

Every command that writes files also writes manifest.json next to them.
The manifest holds the full configuration, the command and its options,
the seed and a sha256 digest of every output, which is enough to re-run
the command and compare outputs bit for bit.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

from hermburg import __version__
from hermburg.solver.picard import SIGN_CONVENTION

MANIFEST_NAME = "manifest.json"


def file_digest(path: str | Path) -> str:
    """sha256 hex digest of a file."""
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Provenance record of one command invocation."""

    command: str
    options: dict[str, Any]
    config: dict[str, Any]
    master_seed: int
    stream_index: int
    started_at: datetime = field(default_factory=datetime.now)
    completed_at: datetime | None = None
    outputs: dict[str, str] = field(default_factory=dict)
    """Output file name (relative to the manifest) -> sha256."""

    diagnostics: dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0
    tool_version: str = __version__
    sign_convention: str = SIGN_CONVENTION

    def record_output(self, path: Path, root: Path) -> None:
        """Add a written file with its digest."""
        self.outputs[path.relative_to(root).as_posix()] = file_digest(path)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "options": self.options,
            "config": self.config,
            "master_seed": self.master_seed,
            "stream_index": self.stream_index,
            "started_at": self.started_at.isoformat(),
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
            "outputs": dict(sorted(self.outputs.items())),
            "sign_convention": self.sign_convention,
            "diagnostics": self.diagnostics,
            "exit_code": self.exit_code,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> RunManifest:
        """Rebuild a manifest from its JSON form."""
        completed = data.get("completed_at")
        return cls(
            command=data["command"],
            options=data.get("options", {}),
            config=data["config"],
            master_seed=data["master_seed"],
            stream_index=data.get("stream_index", 0),
            started_at=datetime.fromisoformat(data["started_at"]),
            completed_at=datetime.fromisoformat(completed) if completed else None,
            outputs=data.get("outputs", {}),
            diagnostics=data.get("diagnostics", {}),
            exit_code=data.get("exit_code", 0),
            tool_version=data.get("tool_version", __version__),
            sign_convention=data.get("sign_convention", SIGN_CONVENTION),
        )

    def save(self, directory: str | Path) -> Path:
        """Write manifest.json into directory."""
        path = Path(directory) / MANIFEST_NAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
        return path

    @classmethod
    def load(cls, path: str | Path) -> RunManifest:
        """Read a manifest file (or the manifest inside a directory)."""
        path = Path(path)
        if path.is_dir():
            path = path / MANIFEST_NAME
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))
