"""Reproducibility envelope: every command emits a manifest next to its outputs.

The manifest pins the command, the full configuration snapshot, content
digests of every input file, and the seed.  Two runs with identical
manifests must produce byte-identical outputs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from pathlib import Path

TOOL_VERSION = "0.1.0"
MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    command: str
    config: dict
    input_digests: dict[str, str]
    seed: int
    tool_version: str = TOOL_VERSION

    def write(self, out_dir: str | Path) -> Path:
        path = Path(out_dir) / MANIFEST_NAME
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(
                asdict(self), fh, ensure_ascii=False, sort_keys=True,
                separators=(",", ":"),
            )
            fh.write("\n")
        return path


def digest_file(path: str | Path) -> str:
    hasher = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            hasher.update(chunk)
    return hasher.hexdigest()


def build_manifest(
    command: str, config: dict, input_paths: list[str | Path], seed: int
) -> RunManifest:
    digests = {str(p): digest_file(p) for p in sorted(str(p) for p in input_paths)}
    return RunManifest(command, config, digests, seed)


def load_manifest(out_dir: str | Path) -> RunManifest:
    with open(Path(out_dir) / MANIFEST_NAME, encoding="utf-8") as fh:
        payload = json.load(fh)
    return RunManifest(
        payload["command"],
        payload["config"],
        payload["input_digests"],
        payload["seed"],
        payload["tool_version"],
    )
