"""Run manifests: every CLI invocation records how to reproduce itself.

A manifest is a small JSON document (sorted keys, fixed layout) naming the
tool version, the subcommand, all effective parameters, the input files with
their SHA-256 digests, and the produced artifacts.  Re-driving a run from
its manifest yields byte-identical outputs, and the digests make silent
input drift detectable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ManifestError

__all__ = ["RunManifest", "sha256_file"]

_FORMAT = "adapix-run/1"


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record of one CLI run."""

    version: str
    command: str
    parameters: dict[str, Any]
    inputs: dict[str, dict[str, str]] = field(default_factory=dict)
    outputs: tuple[str, ...] = ()

    def to_json(self) -> str:
        payload = {
            "format": _FORMAT,
            "version": self.version,
            "command": self.command,
            "parameters": self.parameters,
            "inputs": self.inputs,
            "outputs": list(self.outputs),
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json())

    @staticmethod
    def read(path: str | Path) -> "RunManifest":
        """Load a manifest, validating structure but not input digests.

        Raises:
            ManifestError: Malformed JSON or missing required keys.
            OSError: The file cannot be read.
        """
        text = Path(path).read_text()
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as err:
            raise ManifestError(f"{path}: not valid JSON ({err})") from None
        if not isinstance(payload, dict) or payload.get("format") != _FORMAT:
            raise ManifestError(f"{path}: not an {_FORMAT} manifest")
        for key in ("version", "command", "parameters", "inputs", "outputs"):
            if key not in payload:
                raise ManifestError(f"{path}: manifest is missing key {key!r}")
        return RunManifest(
            version=payload["version"],
            command=payload["command"],
            parameters=payload["parameters"],
            inputs=payload["inputs"],
            outputs=tuple(payload["outputs"]),
        )
