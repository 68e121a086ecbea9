"""Collapsed Gibbs sampling for LDA.

The sweep kernel exists twice: a numba-compiled version and a pure-Python
fallback with identical float64 arithmetic.  Per-sweep uniform draws come from
``numpy.random.default_rng`` outside the kernel, so both paths walk the exact
same chain for a given seed.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .preprocess import Corpus

DEFAULT_ITERATIONS = 1000
DEFAULT_BETA = 0.01


def _sweep_python(words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, uniforms):
    n_topics = n_k.shape[0]
    vbeta = n_kw.shape[1] * beta
    cum = np.empty(n_topics)
    for idx in range(words.shape[0]):
        d = doc_of[idx]
        w = words[idx]
        k = z[idx]
        n_dk[d, k] -= 1
        n_kw[k, w] -= 1
        n_k[k] -= 1
        total = 0.0
        for kk in range(n_topics):
            p = (n_dk[d, kk] + alpha) * (n_kw[kk, w] + beta) / (n_k[kk] + vbeta)
            total += p
            cum[kk] = total
        u = uniforms[idx] * total
        k = 0
        while k < n_topics - 1 and cum[k] <= u:
            k += 1
        z[idx] = k
        n_dk[d, k] += 1
        n_kw[k, w] += 1
        n_k[k] += 1


try:
    from numba import njit

    _sweep_numba = njit(nogil=True, cache=False)(_sweep_python)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _sweep_numba = None
    HAVE_NUMBA = False


def gibbs_sweep(words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, uniforms, use_numba=None):
    """One full sweep over all tokens, in place."""
    use_numba = HAVE_NUMBA if use_numba is None else use_numba
    kernel = _sweep_numba if (use_numba and HAVE_NUMBA) else _sweep_python
    kernel(words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, uniforms)


def _as_doc_arrays(docs) -> tuple[list[np.ndarray], int | None]:
    if isinstance(docs, Corpus):
        return docs.doc_tokens, docs.n_terms
    return [np.asarray(d, dtype=np.int32) for d in docs], None


class GibbsLda(BaseEstimator):
    """LDA fitted by collapsed Gibbs sampling; deterministic given seed.

    Point estimates come from the final sample's counts with Dirichlet
    smoothing.  ``alpha`` defaults to 50/K and ``beta`` to 0.01.
    """

    def __init__(
        self,
        n_topics: int = 12,
        alpha: float | None = None,
        beta: float = DEFAULT_BETA,
        iterations: int = DEFAULT_ITERATIONS,
        random_state: int = 0,
        use_numba: bool | None = None,
    ):
        self.n_topics = n_topics
        self.alpha = alpha
        self.beta = beta
        self.iterations = iterations
        self.random_state = random_state
        self.use_numba = use_numba

    def fit(self, docs, n_terms: int | None = None) -> "GibbsLda":
        doc_arrays, corpus_terms = _as_doc_arrays(docs)
        n_terms = n_terms if n_terms is not None else corpus_terms
        if self.n_topics < 2:
            raise ValueError("n_topics must be >= 2")
        if self.n_topics > len(doc_arrays):
            raise ValueError(
                f"n_topics={self.n_topics} exceeds {len(doc_arrays)} documents"
            )
        if n_terms is None:
            n_terms = int(max((int(d.max()) for d in doc_arrays if len(d)), default=-1)) + 1
        if n_terms < 1:
            raise ValueError("empty vocabulary")

        words = np.concatenate([d for d in doc_arrays]).astype(np.int32)
        doc_of = np.concatenate(
            [np.full(len(d), i, dtype=np.int32) for i, d in enumerate(doc_arrays)]
        )
        n_tokens = words.shape[0]
        if n_tokens == 0:
            raise ValueError("corpus has no tokens")

        n_topics = self.n_topics
        alpha = 50.0 / n_topics if self.alpha is None else float(self.alpha)
        beta = float(self.beta)
        rng = np.random.default_rng(self.random_state)
        z = rng.integers(0, n_topics, size=n_tokens, dtype=np.int64)

        n_dk = np.zeros((len(doc_arrays), n_topics), dtype=np.int64)
        n_kw = np.zeros((n_topics, n_terms), dtype=np.int64)
        n_k = np.zeros(n_topics, dtype=np.int64)
        np.add.at(n_dk, (doc_of, z), 1)
        np.add.at(n_kw, (z, words), 1)
        np.add.at(n_k, z, 1)

        for _ in range(self.iterations):
            uniforms = rng.random(n_tokens)
            gibbs_sweep(
                words, doc_of, z, n_dk, n_kw, n_k, alpha, beta, uniforms,
                use_numba=self.use_numba,
            )

        doc_len = n_dk.sum(axis=1)
        self.topic_word_ = (n_kw + beta) / (n_k + n_terms * beta)[:, None]
        self.doc_topic_ = (n_dk + alpha) / (doc_len + n_topics * alpha)[:, None]
        self.assignments_ = z
        self.topic_counts_ = n_kw
        self.alpha_ = alpha
        self.beta_ = beta
        self.n_terms_ = n_terms
        return self

    def top_word_ids(self, topic: int, n: int = 10) -> np.ndarray:
        """Top-n term ids of a topic, probability-descending, ties by id."""
        check_is_fitted(self, "topic_word_")
        order = np.argsort(-self.topic_word_[topic], kind="stable")
        return order[: min(n, self.n_terms_)]


def fit_lda(
    documents,
    n_topics: int,
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> GibbsLda:
    """Fit one LDA model; ``documents`` is a Corpus or list of id arrays."""
    model = GibbsLda(
        n_topics=n_topics,
        alpha=alpha,
        beta=beta,
        iterations=iterations,
        random_state=seed,
    ).fit(documents)
    if isinstance(documents, Corpus):
        model.vocabulary_ = list(documents.vocabulary)
    return model
