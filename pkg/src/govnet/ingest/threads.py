"""Reply-thread reconstruction.

Parent resolution order: In-Reply-To, then the last References entry, then an
exact-subject match (reply prefixes stripped) against the nearest earlier
message within 30 days.  The subject fallback only fires for messages whose
subject carried a reply prefix, so repeated fresh posts with identical
subjects never get linked.
"""
from __future__ import annotations

import bisect
import datetime as dt
import re
from collections import defaultdict

from .records import Email

_REPLY_PREFIX = re.compile(r"^\s*(?:re|aw|fw|fwd)\s*(?:\[\d+\])?\s*:\s*", re.IGNORECASE)
_SUBJECT_WINDOW = dt.timedelta(days=30)


def normalize_subject(subject: str) -> tuple[str, bool]:
    """Return (normalized subject, had reply prefix)."""
    text = subject
    stripped = False
    while True:
        new = _REPLY_PREFIX.sub("", text, count=1)
        if new == text:
            break
        text = new
        stripped = True
    return " ".join(text.lower().split()), stripped


def resolve_parents(emails: list[Email]) -> dict[str, str]:
    """Map message_id -> parent message_id for every resolvable reply."""
    ordered = sorted(emails, key=lambda e: (e.sent_at, e.message_id))
    by_id = {e.message_id: e for e in ordered}
    # Per normalized subject: parallel (sent_at, message_id) lists kept sorted.
    subj_times: dict[str, list[dt.datetime]] = defaultdict(list)
    subj_ids: dict[str, list[str]] = defaultdict(list)

    parents: dict[str, str] = {}
    for email in ordered:
        subject, is_reply = normalize_subject(email.subject)
        parent = None
        candidates = []
        if email.in_reply_to:
            candidates.append(email.in_reply_to)
        if email.references:
            candidates.append(email.references[-1])
        for cand in candidates:
            if cand in by_id and cand != email.message_id:
                parent = cand
                break
        if parent is None and is_reply and subject:
            times = subj_times[subject]
            pos = bisect.bisect_left(times, email.sent_at)
            if pos > 0 and email.sent_at - times[pos - 1] <= _SUBJECT_WINDOW:
                parent = subj_ids[subject][pos - 1]
        if parent is not None:
            parents[email.message_id] = parent
        subj_times[subject].append(email.sent_at)
        subj_ids[subject].append(email.message_id)
    return parents
