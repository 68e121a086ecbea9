"""Sliding-window segmentation and per-sentence label aggregation."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from ..ingest.records import Email
from .tokenizer import Tokenizer, default_tokenizer

DEFAULT_TOKEN_BUDGET = 256


@dataclass
class SentenceRecord:
    email_id: str
    index: int
    text: str
    token_count: int
    gold_label: bool | None = None
    predicted_label: bool | None = None

    def __post_init__(self):
        if self.text and self.token_count < 1:
            raise ValueError("token_count must be >= 1 for nonempty text")


@dataclass
class Segment:
    """A contiguous sentence window from one email."""

    email_id: str
    start: int
    records: tuple[SentenceRecord, ...]
    total_tokens: int
    predictions: list[bool] | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def end(self) -> int:
        """Index of the last sentence (inclusive)."""
        return self.start + len(self.records) - 1

    @property
    def indices(self) -> range:
        return range(self.start, self.start + len(self.records))

    @property
    def texts(self) -> list[str]:
        return [r.text for r in self.records]

    @property
    def labels(self) -> tuple[bool | None, ...]:
        return tuple(r.gold_label for r in self.records)

    @property
    def has_positive(self) -> bool:
        return any(r.gold_label for r in self.records)


def sentence_records(
    email: Email, tokenizer: Tokenizer | None = None
) -> list[SentenceRecord]:
    """Turn an email's sentence spans into token-counted records."""
    tokenizer = tokenizer or default_tokenizer()
    return [
        SentenceRecord(
            email_id=email.message_id,
            index=span.index,
            text=span.text,
            token_count=tokenizer.count(span.text),
        )
        for span in email.sentences
    ]


def segment_email(
    sentences: list[SentenceRecord], token_budget: int = DEFAULT_TOKEN_BUDGET
) -> list[Segment]:
    """Sliding windows of up to ``token_budget`` tokens, advancing 1 sentence.

    Each window is the maximal run starting at its first sentence; a single
    sentence over the budget forms its own window.  Trailing windows fully
    contained in an earlier one are dropped, so window starts stay consecutive
    and every sentence stays covered.
    """
    if token_budget < 1:
        raise ValueError("token_budget must be positive")
    n = len(sentences)
    if n == 0:
        return []
    ends = []
    j, total = 0, 0
    for i in range(n):
        if j < i:
            j, total = i, 0
        if j == i and sentences[i].token_count > token_budget:
            ends.append(i)
            j, total = i + 1, 0
            continue
        while j < n and total + sentences[j].token_count <= token_budget:
            total += sentences[j].token_count
            j += 1
        ends.append(j - 1)
        total -= sentences[i].token_count

    # ends is nondecreasing; keep the prefix through the last strict increase.
    last = 0
    for i in range(1, n):
        if ends[i] > ends[i - 1]:
            last = i
    segments = []
    for i in range(last + 1):
        records = tuple(sentences[i : ends[i] + 1])
        segments.append(
            Segment(
                email_id=sentences[i].email_id,
                start=sentences[i].index,
                records=records,
                total_tokens=sum(r.token_count for r in records),
            )
        )
    return segments


def aggregate_predictions(
    segments: list[Segment],
    n_sentences: Mapping[str, int] | None = None,
) -> dict[tuple[str, int], bool]:
    """OR per-segment predictions down to sentence level.

    A sentence is positive iff it is predicted positive in at least one
    segment containing it.  With ``n_sentences`` (email_id -> sentence count)
    the full universe is checked; any uncovered sentence or segment without
    predictions is a consistency error.
    """
    labels: dict[tuple[str, int], bool] = {}
    for segment in segments:
        if segment.predictions is None:
            raise ValueError(f"segment at {segment.email_id}:{segment.start} has no predictions")
        if len(segment.predictions) != len(segment.records):
            raise ValueError(
                f"prediction length {len(segment.predictions)} != "
                f"{len(segment.records)} sentences at {segment.email_id}:{segment.start}"
            )
        for record, predicted in zip(segment.records, segment.predictions):
            key = (segment.email_id, record.index)
            labels[key] = labels.get(key, False) or bool(predicted)
    if n_sentences is not None:
        for email_id, count in n_sentences.items():
            for index in range(count):
                if (email_id, index) not in labels:
                    raise ValueError(f"sentence {email_id}:{index} not covered by any segment")
    return labels
