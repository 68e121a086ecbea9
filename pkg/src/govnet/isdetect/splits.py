"""Thread-level train/test splitting."""
from __future__ import annotations

import numpy as np

from ..ingest.records import Email
from ..ingest.threads import resolve_parents


def thread_roots(emails: list[Email]) -> dict[str, str]:
    """Map each message_id to its thread root's message_id."""
    parents = resolve_parents(emails)
    roots: dict[str, str] = {}

    def root_of(mid: str) -> str:
        seen = []
        current = mid
        while current in parents and current not in roots:
            if current in seen:
                break
            seen.append(current)
            current = parents[current]
        anchor = roots.get(current, current)
        for node in seen:
            roots[node] = anchor
        roots.setdefault(mid, anchor)
        return roots[mid]

    for email in emails:
        root_of(email.message_id)
    return roots


def thread_split(
    emails: list[Email], holdout_fraction: float = 0.125, seed: int = 0
) -> tuple[list[Email], list[Email]]:
    """Split emails into (train, test) by whole threads, seeded.

    Roughly ``holdout_fraction`` of the threads (rounded to the nearest count,
    at least 1 when there are >= 2 threads) go to the test side; an email
    never straddles the split because the unit is its thread root.
    """
    if not 0.0 < holdout_fraction < 1.0:
        raise ValueError("holdout_fraction must be in (0, 1)")
    roots = thread_roots(emails)
    ordered_roots = sorted({roots[e.message_id] for e in emails})
    if len(ordered_roots) < 2:
        return list(emails), []
    n_test = int(round(holdout_fraction * len(ordered_roots)))
    n_test = min(max(n_test, 1), len(ordered_roots) - 1)
    rng = np.random.default_rng(seed)
    shuffled = list(rng.permutation(ordered_roots))
    test_roots = set(shuffled[:n_test])
    train = [e for e in emails if roots[e.message_id] not in test_roots]
    test = [e for e in emails if roots[e.message_id] in test_roots]
    return train, test
