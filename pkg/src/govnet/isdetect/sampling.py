"""Training-set balancing."""
from __future__ import annotations

import numpy as np

from .segment import Segment


def oversample_training(segments: list[Segment], seed: int = 0) -> list[Segment]:
    """Duplicate positive-containing segments to a 1:1 ratio with negatives.

    Negatives are kept untouched; extra positives are drawn uniformly with
    replacement from the existing positives (seeded).  Positives already
    outnumbering negatives are left alone; zero positives is untrainable.
    """
    positives = [s for s in segments if s.has_positive]
    negatives = [s for s in segments if not s.has_positive]
    if not positives:
        raise ValueError("no positive-containing segments to oversample")
    deficit = len(negatives) - len(positives)
    if deficit <= 0:
        return list(segments)
    rng = np.random.default_rng(seed)
    extra = [positives[i] for i in rng.integers(0, len(positives), size=deficit)]
    return list(segments) + extra
