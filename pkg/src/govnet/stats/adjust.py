"""Benjamini-Hochberg false-discovery-rate adjustment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGNIFICANCE_LEVEL = 0.01


@dataclass(frozen=True)
class AdjustedTest:
    raw_p: float
    adjusted_p: float
    significant: bool


def bh_adjust(p_values, alpha: float = SIGNIFICANCE_LEVEL) -> list[AdjustedTest]:
    """Step-up BH adjustment preserving input order.

    adjusted_(i) = min over j >= rank(i) of p_(j) * m / j, capped at 1;
    significance is adjusted_p < alpha.
    """
    p = np.asarray(p_values, dtype=float)
    if p.ndim != 1 or len(p) == 0:
        raise ValueError("p_values must be a non-empty vector")
    if np.any(~np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
        raise ValueError("p-values must lie in [0, 1]")
    m = len(p)
    order = np.argsort(p, kind="stable")
    scaled = p[order] * m / np.arange(1, m + 1)
    adjusted_sorted = np.minimum(1.0, np.minimum.accumulate(scaled[::-1])[::-1])
    adjusted = np.empty(m)
    adjusted[order] = adjusted_sorted
    return [
        AdjustedTest(raw_p=float(raw), adjusted_p=float(adj), significant=bool(adj < alpha))
        for raw, adj in zip(p, adjusted)
    ]
