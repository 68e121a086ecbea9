"""Policy documents as additional all-positive training segments.

Input is a plain-text file of one policy per blank-line-separated block.
Every policy sentence is gold-positive; each block is segmented under the
same token budget as emails (short policies yield exactly one segment).
"""
from __future__ import annotations

from pathlib import Path

from ..ingest.sentences import split_sentences
from .segment import DEFAULT_TOKEN_BUDGET, Segment, SentenceRecord, segment_email
from .tokenizer import Tokenizer, default_tokenizer


def load_policy_segments(
    path: str | Path,
    tokenizer: Tokenizer | None = None,
    token_budget: int = DEFAULT_TOKEN_BUDGET,
) -> list[Segment]:
    tokenizer = tokenizer or default_tokenizer()
    text = Path(path).read_text(encoding="utf-8")
    blocks = [b.strip() for b in text.split("\n\n") if b.strip()]
    segments: list[Segment] = []
    for i, block in enumerate(blocks):
        records = [
            SentenceRecord(
                email_id=f"policy-{i}",
                index=span.index,
                text=span.text,
                token_count=tokenizer.count(span.text),
                gold_label=True,
            )
            for span in split_sentences(block)
        ]
        segments.extend(segment_email(records, token_budget))
    return segments
