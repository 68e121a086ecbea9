"""Monthly topic volumes, mean-centered per outcome group."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .lda import GibbsLda
from .preprocess import Corpus

DEFAULT_HORIZON = 24
CENTERING_TOL = 1e-9


@dataclass(frozen=True)
class TopicVolumeSeries:
    """Raw and centered token volumes for one (group, topic)."""

    group: str
    topic_id: int
    months: tuple[int, ...]
    raw: tuple[int, ...]
    centered: tuple[float, ...]

    def __post_init__(self):
        if abs(sum(self.centered)) > CENTERING_TOL * max(1.0, max(map(abs, self.raw), default=1.0)):
            raise ValueError(
                f"centered series for ({self.group}, {self.topic_id}) does not sum to 0"
            )


def topic_volumes(
    model: GibbsLda, corpus: Corpus, horizon: int = DEFAULT_HORIZON
) -> list[TopicVolumeSeries]:
    """Token volumes per (group, topic, month) for months < horizon.

    Each token goes to its maximum-posterior topic, argmax_k of
    doc_topic[d, k] * topic_word[k, token]; centering subtracts the
    per-(group, topic) mean over that group's observed months.
    """
    theta = model.doc_topic_
    phi = model.topic_word_
    n_topics = phi.shape[0]
    groups = sorted({m.group for m in corpus.meta})
    observed: dict[str, set[int]] = {g: set() for g in groups}
    counts: dict[str, np.ndarray] = {}

    for d, meta in enumerate(corpus.meta):
        month = meta.month_index
        if not 0 <= month < horizon:
            continue
        observed[meta.group].add(month)
        if meta.group not in counts:
            counts[meta.group] = np.zeros((n_topics, horizon), dtype=np.int64)
        scores = theta[d][:, None] * phi[:, corpus.doc_tokens[d]]
        assigned = np.argmax(scores, axis=0)
        np.add.at(counts[meta.group], (assigned, month), 1)

    series: list[TopicVolumeSeries] = []
    for group in groups:
        months = tuple(sorted(observed[group]))
        if not months:
            continue
        for topic in range(n_topics):
            raw = tuple(int(counts[group][topic, m]) for m in months)
            mean = float(np.mean(raw))
            centered = tuple(float(v) - mean for v in raw)
            # Kill accumulated float error so the series sums to exactly ~0.
            drift = sum(centered) / len(centered)
            if drift:
                centered = tuple(c - drift for c in centered)
            series.append(
                TopicVolumeSeries(
                    group=group, topic_id=topic, months=months, raw=raw, centered=centered
                )
            )
    return series


def volumes_frame(series: list[TopicVolumeSeries]) -> pd.DataFrame:
    records = []
    for s in series:
        for month, raw, centered in zip(s.months, s.raw, s.centered):
            records.append(
                {
                    "group": s.group,
                    "topic_id": s.topic_id,
                    "month_index": month,
                    "raw": raw,
                    "centered": centered,
                }
            )
    return pd.DataFrame.from_records(
        records, columns=["group", "topic_id", "month_index", "raw", "centered"]
    )


def write_volumes_csv(
    series: list[TopicVolumeSeries],
    path: str | Path,
    config_hash: str | None = None,
    seed: int | None = None,
) -> Path:
    path = Path(path)
    frame = volumes_frame(series)
    lines = ["group,topic_id,month_index,raw,centered"]
    for rec in frame.itertuples(index=False):
        lines.append(f"{rec.group},{rec.topic_id},{rec.month_index},{rec.raw},{rec.centered!r}")
    if config_hash is not None or seed is not None:
        lines.append(f"# config_hash={config_hash} seed={seed}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
