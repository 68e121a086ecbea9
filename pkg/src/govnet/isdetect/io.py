"""Gold-annotation, prediction, and training-segment files (JSON-lines)."""
from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from pathlib import Path

from .segment import Segment, SentenceRecord
from .tokenizer import Tokenizer, default_tokenizer


def load_gold(path: str | Path) -> dict[tuple[str, int], bool]:
    """Read {"email_id", "sentence_index", "label": 0|1} lines."""
    labels: dict[tuple[str, int], bool] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            labels[(str(obj["email_id"]), int(obj["sentence_index"]))] = bool(obj["label"])
    return labels


def write_gold(labels: Mapping[tuple[str, int], bool], path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for (email_id, index) in sorted(labels):
            fh.write(
                json.dumps(
                    {
                        "email_id": email_id,
                        "sentence_index": index,
                        "label": int(labels[(email_id, index)]),
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    return path


def write_predictions(
    predicted: Mapping[tuple[str, int], bool], path: str | Path
) -> Path:
    """Mirror of the gold format with a "predicted" field."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for (email_id, index) in sorted(predicted):
            fh.write(
                json.dumps(
                    {
                        "email_id": email_id,
                        "sentence_index": index,
                        "predicted": int(predicted[(email_id, index)]),
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    return path


def load_predictions(path: str | Path) -> dict[tuple[str, int], bool]:
    predicted: dict[tuple[str, int], bool] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            predicted[(str(obj["email_id"]), int(obj["sentence_index"]))] = bool(
                obj["predicted"]
            )
    return predicted


def write_training_segments(segments: Iterable[Segment], path: str | Path) -> Path:
    """One labeled segment per line for external classifier training.

    Format: {"email_id", "start", "sentences": [str], "labels": [0|1]}.
    Every sentence must carry a gold label; unlabeled segments are a caller
    error, not something to silently drop.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        for segment in segments:
            if any(r.gold_label is None for r in segment.records):
                raise ValueError(
                    f"segment at {segment.email_id}:{segment.start} has unlabeled sentences"
                )
            fh.write(
                json.dumps(
                    {
                        "email_id": segment.email_id,
                        "start": segment.start,
                        "sentences": segment.texts,
                        "labels": [int(r.gold_label) for r in segment.records],
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    return path


def load_training_segments(
    path: str | Path, tokenizer: Tokenizer | None = None
) -> list[Segment]:
    """Read the training-segment format back; token counts re-estimated."""
    tokenizer = tokenizer or default_tokenizer()
    segments: list[Segment] = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            sentences = [str(s) for s in obj["sentences"]]
            labels = [bool(x) for x in obj["labels"]]
            if len(sentences) != len(labels):
                raise ValueError(
                    f"{len(sentences)} sentences but {len(labels)} labels "
                    f"at {obj.get('email_id')}:{obj.get('start')}"
                )
            start = int(obj["start"])
            records = tuple(
                SentenceRecord(
                    email_id=str(obj["email_id"]),
                    index=start + i,
                    text=text,
                    token_count=tokenizer.count(text),
                    gold_label=label,
                )
                for i, (text, label) in enumerate(zip(sentences, labels))
            )
            segments.append(
                Segment(
                    email_id=str(obj["email_id"]),
                    start=start,
                    records=records,
                    total_tokens=sum(r.token_count for r in records),
                )
            )
    return segments
