"""Monthly IS counts attributed to the sender's role."""
from __future__ import annotations

from collections.abc import Mapping

from ..ingest.identity import IdentityMap
from ..ingest.records import Email, ProjectManifest, month_index

ROLE_KEYS = ("mentor", "committer", "contributor")


def count_is_by_role(
    emails: list[Email],
    sentence_labels: Mapping[tuple[str, int], bool],
    idmap: IdentityMap,
    manifests: Mapping[str, ProjectManifest],
) -> dict[tuple[str, int], dict[str, int]]:
    """Sum positive sentences per (project, month) into per-role counts.

    Each sentence counts toward exactly one role: its sender's role in the
    sentence's month.  Bot and out-of-range emails contribute nothing.
    """
    counts: dict[tuple[str, int], dict[str, int]] = {}
    for email in emails:
        if email.is_bot:
            continue
        manifest = manifests.get(email.project_id)
        if manifest is None:
            continue
        month = month_index(email.sent_at, manifest.incubation_start)
        if not 0 <= month <= manifest.end_month_index:
            continue
        positives = sum(
            1
            for span in email.sentences
            if sentence_labels.get((email.message_id, span.index))
        )
        if not positives:
            continue
        role = idmap.role_of(email.project_id, email.sender, month)
        key = (email.project_id, month)
        bucket = counts.setdefault(key, {k: 0 for k in ROLE_KEYS})
        bucket[role.value.lower()] += positives
    return counts
