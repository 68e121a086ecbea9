"""Training-segment JSON-lines loading.

One segment per line: {"email_id", "start", "sentences": [str], "labels":
[0|1]}, the format the pipeline's export-training command writes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class DataError(ValueError):
    """Training data is missing, empty, or malformed."""


@dataclass(frozen=True)
class TrainingSegment:
    email_id: str
    start: int
    sentences: tuple[str, ...]
    labels: tuple[bool, ...]

    def __post_init__(self):
        if not self.sentences:
            raise DataError(f"empty segment at {self.email_id}:{self.start}")
        if len(self.sentences) != len(self.labels):
            raise DataError(
                f"{len(self.sentences)} sentences but {len(self.labels)} labels "
                f"at {self.email_id}:{self.start}"
            )


def load_segments(path: str | Path) -> list[TrainingSegment]:
    path = Path(path)
    if not path.is_file():
        raise DataError(f"training data not found: {path}")
    segments: list[TrainingSegment] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            try:
                segments.append(
                    TrainingSegment(
                        email_id=str(obj["email_id"]),
                        start=int(obj["start"]),
                        sentences=tuple(str(s) for s in obj["sentences"]),
                        labels=tuple(bool(x) for x in obj["labels"]),
                    )
                )
            except KeyError as exc:
                raise DataError(f"{path}:{lineno}: missing field {exc}") from exc
    if not segments:
        raise DataError(f"no training segments in {path}")
    return segments
