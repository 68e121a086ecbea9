"""Per-sentence features for the baseline classifier.

Each sentence is featurized inside its segment: its own token n-grams, the
unigrams of the 1-sentence left/right context, deontic lexicon hits, modal
verb counts, and a length term.
"""
from __future__ import annotations

import math
import re

DEONTIC_LEXICON = ("must", "shall", "vote", "require", "policy", "license")
MODAL_VERBS = frozenset(
    ("can", "could", "may", "might", "must", "shall", "should", "will", "would", "ought")
)

_WORD = re.compile(r"[a-z0-9']+")


def words(text: str) -> list[str]:
    return _WORD.findall(text.lower())


def sentence_features(
    texts: list[str], position: int, ngram_max: int = 2
) -> dict[str, float]:
    """Feature dict for sentence ``position`` within its segment texts."""
    tokens = words(texts[position])
    feats: dict[str, float] = {}
    for n in range(1, ngram_max + 1):
        for i in range(len(tokens) - n + 1):
            feats[f"s:{' '.join(tokens[i : i + n])}"] = 1.0
    if position > 0:
        for tok in set(words(texts[position - 1])):
            feats[f"l:{tok}"] = 1.0
    if position + 1 < len(texts):
        for tok in set(words(texts[position + 1])):
            feats[f"r:{tok}"] = 1.0
    for term in DEONTIC_LEXICON:
        hits = sum(1 for t in tokens if t == term or t.startswith(term))
        if hits:
            feats[f"lex:{term}"] = float(hits)
    modals = sum(1 for t in tokens if t in MODAL_VERBS)
    feats["modal_count"] = float(modals)
    feats["length"] = math.log1p(len(tokens))
    return feats


def segment_features(texts: list[str], ngram_max: int = 2) -> list[dict[str, float]]:
    return [sentence_features(texts, i, ngram_max) for i in range(len(texts))]
