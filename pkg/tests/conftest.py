"""Shared builders for tests."""
from __future__ import annotations

import datetime as dt
from pathlib import Path

import pytest

from govnet.ingest import Email, Outcome, ProjectManifest, split_sentences

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "miniasf"

UTC = dt.timezone.utc


def ts(year=2015, month=1, day=15, hour=12, minute=0) -> dt.datetime:
    return dt.datetime(year, month, day, hour, minute, tzinfo=UTC)


def make_email(
    message_id: str,
    sender: str = "alice@example.org",
    sent_at: dt.datetime | None = None,
    subject: str = "Plan",
    body: str = "We should cut a release.",
    recipients: list[str] | None = None,
    in_reply_to: str | None = None,
    references: list[str] | None = None,
    project_id: str = "proj",
    list_name: str = "dev",
    is_bot: bool = False,
) -> Email:
    return Email(
        message_id=message_id,
        project_id=project_id,
        list_name=list_name,
        sent_at=sent_at or ts(),
        sender=sender,
        sender_raw=sender,
        recipients=recipients or [],
        in_reply_to=in_reply_to,
        references=references or [],
        subject=subject,
        body=body,
        is_bot=is_bot,
        sentences=split_sentences(body),
    )


def make_manifest(
    project_id: str = "proj",
    outcome: Outcome = Outcome.GRADUATED,
    start: dt.date = dt.date(2015, 1, 1),
    end: dt.date = dt.date(2016, 12, 31),
) -> ProjectManifest:
    return ProjectManifest(
        project_id=project_id,
        outcome=outcome,
        incubation_start=start,
        incubation_end=end,
    )


@pytest.fixture(scope="session")
def fixture_corpus() -> Path:
    assert FIXTURE_DIR.is_dir(), "bundled fixture corpus missing"
    return FIXTURE_DIR
