"""Built-in linear baseline classifier over segment sentence features."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator
from sklearn.feature_extraction import DictVectorizer
from sklearn.utils.validation import check_is_fitted

from .features import segment_features
from .segment import Segment

if TYPE_CHECKING:
    from .external import ExternalClient


class BaselineClassifier(BaseEstimator):
    """L2-regularized logistic regression trained by full-batch gradient descent.

    The learning rate is the inverse of the loss gradient's Lipschitz bound,
    which makes the per-epoch loss non-increasing; training stops when the
    relative loss change drops below ``tol`` or after ``max_epochs``.
    """

    def __init__(
        self,
        ngram_max: int = 2,
        l2: float = 1e-3,
        max_epochs: int = 200,
        tol: float = 1e-6,
        threshold: float = 0.5,
        random_state: int = 0,
    ):
        self.ngram_max = ngram_max
        self.l2 = l2
        self.max_epochs = max_epochs
        self.tol = tol
        self.threshold = threshold
        self.random_state = random_state

    def _features(self, segments: list[Segment]) -> list[dict[str, float]]:
        feats = []
        for segment in segments:
            feats.extend(segment_features(segment.texts, self.ngram_max))
        return feats

    def fit(self, segments: list[Segment], y=None) -> "BaselineClassifier":
        """Fit on gold-labeled segments; ``y`` is ignored (labels ride along)."""
        if not segments:
            raise ValueError("cannot train on zero segments")
        labels: list[float] = []
        for segment in segments:
            for record in segment.records:
                if record.gold_label is None:
                    raise ValueError(
                        f"sentence {segment.email_id}:{record.index} lacks a gold label"
                    )
                labels.append(1.0 if record.gold_label else 0.0)
        self.vectorizer_ = DictVectorizer(sparse=True)
        X = self.vectorizer_.fit_transform(self._features(segments))
        target = np.asarray(labels)
        n = X.shape[0]

        row_spread = (X.max(axis=0) - X.min(axis=0)) if n > 1 else None
        if n > 1 and row_spread.nnz == 0 and len(set(labels)) > 1:
            raise ValueError("degenerate feature matrix: all sentences identical")

        # Gradient Lipschitz bound: ||X_aug||_F^2 / (4n) + l2, with the
        # intercept column contributing n to the squared norm.
        frob_sq = float(X.multiply(X).sum()) + n
        lipschitz = frob_sq / (4.0 * n) + self.l2
        lr = 1.0 / lipschitz

        weights = np.zeros(X.shape[1])
        bias = 0.0
        history: list[float] = []
        sign = 2.0 * target - 1.0
        for _ in range(self.max_epochs):
            z = X @ weights + bias
            loss = float(
                np.mean(np.logaddexp(0.0, -sign * z))
                + 0.5 * self.l2 * float(weights @ weights)
            )
            history.append(loss)
            if len(history) >= 2:
                prev = history[-2]
                if abs(prev - loss) <= self.tol * max(abs(prev), 1e-12):
                    break
            residual = expit(z) - target
            grad_w = (X.T @ residual) / n + self.l2 * weights
            grad_b = float(residual.mean())
            weights -= lr * grad_w
            bias -= lr * grad_b
        self.coef_ = weights
        self.intercept_ = bias
        self.loss_history_ = history
        self.n_features_in_ = X.shape[1]
        return self

    def predict_proba_segments(self, segments: list[Segment]) -> list[list[float]]:
        check_is_fitted(self, "coef_")
        out: list[list[float]] = []
        for segment in segments:
            X = self.vectorizer_.transform(segment_features(segment.texts, self.ngram_max))
            probs = expit(X @ self.coef_ + self.intercept_)
            out.append([float(p) for p in probs])
        return out

    def predict_segments(self, segments: list[Segment]) -> list[list[bool]]:
        return [
            [p >= self.threshold for p in probs]
            for probs in self.predict_proba_segments(segments)
        ]


class ClassifierKind(enum.Enum):
    BASELINE = "baseline"
    EXTERNAL = "external"


@dataclass
class ClassifierHandle:
    """Exactly one active classifier per run: built-in or external service."""

    kind: ClassifierKind
    model: BaselineClassifier | None = None
    client: "ExternalClient | None" = None

    def __post_init__(self):
        if self.kind is ClassifierKind.BASELINE and self.model is None:
            raise ValueError("baseline handle needs a fitted model")
        if self.kind is ClassifierKind.EXTERNAL and self.client is None:
            raise ValueError("external handle needs a client")


def train_baseline(segments: list[Segment], seed: int = 0, **params) -> ClassifierHandle:
    """Train the built-in baseline on oversampled gold segments."""
    model = BaselineClassifier(random_state=seed, **params).fit(segments)
    return ClassifierHandle(kind=ClassifierKind.BASELINE, model=model)


def classify(handle: ClassifierHandle, segments: list[Segment]) -> list[list[bool]]:
    """Per-segment per-sentence boolean predictions, stored on the segments."""
    if handle.kind is ClassifierKind.BASELINE:
        predictions = handle.model.predict_segments(segments)
    else:
        predictions = handle.client.classify_segments(segments)
    for segment, preds in zip(segments, predictions):
        if len(preds) != len(segment.records):
            raise ValueError(
                f"classifier returned {len(preds)} labels for "
                f"{len(segment.records)} sentences at {segment.email_id}:{segment.start}"
            )
        segment.predictions = [bool(p) for p in preds]
    return [list(s.predictions) for s in segments]
