"""UMass topic coherence and coherence-based model selection."""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .lda import DEFAULT_BETA, DEFAULT_ITERATIONS, GibbsLda
from .preprocess import Corpus

log = logging.getLogger(__name__)

TIE_EPS = 1e-12


def _doc_sets(docs) -> list[set[int]]:
    if isinstance(docs, Corpus):
        docs = docs.doc_tokens
    return [set(int(t) for t in d) for d in docs]


def coherence_umass(model: GibbsLda, documents, top_n: int = 10) -> float:
    """Mean over topics of the mean pairwise UMass score.

    For top words ranked w1..wn, each ordered pair (wi, wj) with i < j
    contributes log((D(wi, wj) + 1) / D(wj)), where D counts documents.
    """
    doc_sets = _doc_sets(documents)
    word_docs: dict[int, set[int]] = {}

    def docs_with(word: int) -> set[int]:
        if word not in word_docs:
            word_docs[word] = {i for i, s in enumerate(doc_sets) if word in s}
        return word_docs[word]

    topic_scores = []
    for topic in range(model.topic_word_.shape[0]):
        tops = [int(w) for w in model.top_word_ids(topic, top_n)]
        terms = []
        for i in range(len(tops)):
            for j in range(i + 1, len(tops)):
                d_j = len(docs_with(tops[j]))
                if d_j == 0:
                    continue
                d_ij = len(docs_with(tops[i]) & docs_with(tops[j]))
                terms.append(math.log((d_ij + 1.0) / d_j))
        topic_scores.append(sum(terms) / len(terms) if terms else 0.0)
    return float(np.mean(topic_scores)) if topic_scores else 0.0


def select_k(
    documents,
    k_grid=range(2, 21),
    seeds=(0, 1, 2),
    alpha: float | None = None,
    beta: float = DEFAULT_BETA,
    iterations: int = DEFAULT_ITERATIONS,
    top_n: int = 10,
    jobs: int = 1,
) -> tuple[int, dict[int, float]]:
    """Pick K maximizing mean UMass coherence over seeds.

    Ties within 1e-12 of the best score break to the smaller K.  Returns
    (K*, {K: mean coherence}).
    """
    grid = sorted(set(int(k) for k in k_grid))
    if not grid:
        raise ValueError("empty K grid")

    def one_fit(args: tuple[int, int]) -> tuple[int, float]:
        k, seed = args
        model = GibbsLda(
            n_topics=k, alpha=alpha, beta=beta, iterations=iterations, random_state=seed
        ).fit(documents)
        return k, coherence_umass(model, documents, top_n)

    tasks = [(k, seed) for k in grid for seed in seeds]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one_fit, tasks))
    else:
        results = [one_fit(t) for t in tasks]

    per_k: dict[int, list[float]] = {k: [] for k in grid}
    for k, score in results:
        per_k[k].append(score)
    scores = {k: float(np.mean(v)) for k, v in per_k.items()}
    best = max(scores.values())
    k_star = min(k for k in grid if best - scores[k] <= TIE_EPS)
    log.info("select_k: K*=%d over grid %s", k_star, grid)
    return k_star, scores
