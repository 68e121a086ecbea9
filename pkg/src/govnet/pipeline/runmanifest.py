"""Run manifest: per-stage input/output digests, counts, and timestamps."""
from __future__ import annotations

import datetime as dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _utcnow() -> str:
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


@dataclass
class StageRecord:
    name: str
    started_at: str = ""
    finished_at: str = ""
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "inputs": dict(sorted(self.inputs.items())),
            "outputs": dict(sorted(self.outputs.items())),
            "counts": dict(sorted(self.counts.items())),
        }


@dataclass
class RunManifest:
    """Timestamps live only here; every other artifact is bit-reproducible."""

    config_hash: str
    seed: int
    stages: dict = field(default_factory=dict)

    def start_stage(self, name: str) -> StageRecord:
        record = StageRecord(name=name, started_at=_utcnow())
        self.stages[name] = record
        return record

    def finish_stage(
        self,
        record: StageRecord,
        inputs: dict | None = None,
        outputs: dict | None = None,
        counts: dict | None = None,
    ) -> None:
        record.finished_at = _utcnow()
        if inputs:
            record.inputs.update(inputs)
        if outputs:
            record.outputs.update(outputs)
        if counts:
            record.counts.update(counts)

    def to_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "seed": self.seed,
            "stages": {name: rec.to_dict() for name, rec in sorted(self.stages.items())},
        }

    def write(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        return path

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        manifest = cls(config_hash=data["config_hash"], seed=data["seed"])
        for name, rec in data.get("stages", {}).items():
            manifest.stages[name] = StageRecord(
                name=name,
                started_at=rec.get("started_at", ""),
                finished_at=rec.get("finished_at", ""),
                inputs=rec.get("inputs", {}),
                outputs=rec.get("outputs", {}),
                counts=rec.get("counts", {}),
            )
        return manifest


def digest_paths(paths) -> dict:
    """Relative-name -> sha256 for a list of (label, path) or paths."""
    out = {}
    for item in paths:
        label, path = item if isinstance(item, tuple) else (Path(item).name, item)
        path = Path(path)
        if path.is_file():
            out[str(label)] = file_digest(path)
    return out
