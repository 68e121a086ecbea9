"""IS-sentence corpus preprocessing for topic modeling."""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

_WORD = re.compile(r"[a-z]+")
MIN_TOKEN_LEN = 3
MIN_TERM_COUNT = 5
MAX_DOC_FRACTION = 0.5


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        text = (
            resources.files("govnet.topics").joinpath("data/stopwords.txt").read_text()
        )
    else:
        text = Path(path).read_text()
    return frozenset(
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    global _STOPWORDS
    if _STOPWORDS is None:
        _STOPWORDS = load_stopwords()
    return _STOPWORDS


def tokenize_sentence(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercased alphabetic tokens, stopword-filtered, length >= 3."""
    stopwords = stopwords if stopwords is not None else default_stopwords()
    return [
        tok
        for tok in _WORD.findall(text.lower())
        if len(tok) >= MIN_TOKEN_LEN and tok not in stopwords
    ]


@dataclass(frozen=True)
class IsSentence:
    """An IS-positive sentence with its panel coordinates."""

    text: str
    project_id: str
    month_index: int
    group: str


@dataclass
class Corpus:
    """Preprocessed documents (one per IS sentence) over a fixed vocabulary."""

    vocabulary: list[str]
    doc_tokens: list[np.ndarray]
    meta: list[IsSentence] = field(default_factory=list)

    @property
    def n_docs(self) -> int:
        return len(self.doc_tokens)

    @property
    def n_terms(self) -> int:
        return len(self.vocabulary)

    @property
    def n_tokens(self) -> int:
        return sum(len(d) for d in self.doc_tokens)

    def doc_terms(self, d: int) -> list[str]:
        return [self.vocabulary[t] for t in self.doc_tokens[d]]


def preprocess_is_corpus(
    sentences: list[IsSentence],
    stopwords: frozenset[str] | None = None,
    min_term_count: int = MIN_TERM_COUNT,
    max_doc_fraction: float = MAX_DOC_FRACTION,
) -> Corpus:
    """One document per IS sentence over a thresholded vocabulary.

    Terms occurring fewer than ``min_term_count`` times corpus-wide or in more
    than ``max_doc_fraction`` of documents are dropped; documents left empty
    are dropped with their metadata.
    """
    if not sentences:
        raise ValueError("empty IS corpus")
    tokenized = [tokenize_sentence(s.text, stopwords) for s in sentences]
    n_docs = sum(1 for toks in tokenized if toks)
    if n_docs == 0:
        raise ValueError("no usable tokens in IS corpus")
    counts: Counter[str] = Counter()
    doc_freq: Counter[str] = Counter()
    for toks in tokenized:
        counts.update(toks)
        doc_freq.update(set(toks))
    vocabulary = sorted(
        term
        for term, count in counts.items()
        if count >= min_term_count and doc_freq[term] <= max_doc_fraction * n_docs
    )
    if not vocabulary:
        raise ValueError("vocabulary empty after thresholding")
    index = {term: i for i, term in enumerate(vocabulary)}
    doc_tokens: list[np.ndarray] = []
    meta: list[IsSentence] = []
    for sentence, toks in zip(sentences, tokenized):
        ids = [index[t] for t in toks if t in index]
        if not ids:
            continue
        doc_tokens.append(np.asarray(ids, dtype=np.int32))
        meta.append(sentence)
    if not doc_tokens:
        raise ValueError("all documents empty after thresholding")
    return Corpus(vocabulary=vocabulary, doc_tokens=doc_tokens, meta=meta)
