"""Institutional-statement detection: segmentation, classifiers, counts."""
from .tokenizer import RegexTokenizer, Tokenizer, default_tokenizer
from .segment import (
    DEFAULT_TOKEN_BUDGET,
    Segment,
    SentenceRecord,
    aggregate_predictions,
    segment_email,
    sentence_records,
)
from .sampling import oversample_training
from .features import DEONTIC_LEXICON, MODAL_VERBS, segment_features, sentence_features
from .baseline import (
    BaselineClassifier,
    ClassifierHandle,
    ClassifierKind,
    classify,
    train_baseline,
)
from .external import (
    ExternalClient,
    MAX_SENTENCES_PER_REQUEST,
    ProtocolError,
    TransportError,
)
from .evaluate import EvalReport, evaluate
from .counts import ROLE_KEYS, count_is_by_role
from .splits import thread_roots, thread_split
from .policy import load_policy_segments
from .io import (
    load_gold,
    load_predictions,
    load_training_segments,
    write_gold,
    write_predictions,
    write_training_segments,
)

__all__ = [
    "BaselineClassifier",
    "ClassifierHandle",
    "ClassifierKind",
    "DEFAULT_TOKEN_BUDGET",
    "DEONTIC_LEXICON",
    "EvalReport",
    "ExternalClient",
    "MAX_SENTENCES_PER_REQUEST",
    "MODAL_VERBS",
    "ProtocolError",
    "ROLE_KEYS",
    "RegexTokenizer",
    "Segment",
    "SentenceRecord",
    "Tokenizer",
    "TransportError",
    "aggregate_predictions",
    "classify",
    "count_is_by_role",
    "default_tokenizer",
    "evaluate",
    "load_gold",
    "load_policy_segments",
    "load_predictions",
    "load_training_segments",
    "oversample_training",
    "segment_email",
    "segment_features",
    "sentence_features",
    "sentence_records",
    "thread_roots",
    "thread_split",
    "train_baseline",
    "write_gold",
    "write_predictions",
    "write_training_segments",
]
