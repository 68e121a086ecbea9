"""Topic modeling over IS sentences: LDA, coherence, monthly volumes."""
from .preprocess import (
    Corpus,
    IsSentence,
    default_stopwords,
    load_stopwords,
    preprocess_is_corpus,
    tokenize_sentence,
)
from .lda import (
    DEFAULT_BETA,
    DEFAULT_ITERATIONS,
    GibbsLda,
    HAVE_NUMBA,
    fit_lda,
    gibbs_sweep,
)
from .coherence import coherence_umass, select_k
from .volumes import (
    DEFAULT_HORIZON,
    TopicVolumeSeries,
    topic_volumes,
    volumes_frame,
    write_volumes_csv,
)

__all__ = [
    "Corpus",
    "DEFAULT_BETA",
    "DEFAULT_HORIZON",
    "DEFAULT_ITERATIONS",
    "GibbsLda",
    "HAVE_NUMBA",
    "IsSentence",
    "TopicVolumeSeries",
    "coherence_umass",
    "default_stopwords",
    "fit_lda",
    "gibbs_sweep",
    "load_stopwords",
    "preprocess_is_corpus",
    "select_k",
    "tokenize_sentence",
    "topic_volumes",
    "volumes_frame",
    "write_volumes_csv",
]
