"""Normalized record types produced by corpus ingestion."""
from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field, asdict
from enum import Enum


class Outcome(str, Enum):
    GRADUATED = "Graduated"
    RETIRED = "Retired"


class Role(str, Enum):
    MENTOR = "Mentor"
    COMMITTER = "Committer"
    CONTRIBUTOR = "Contributor"


@dataclass(frozen=True)
class SentenceSpan:
    """One sentence of an email body.

    ``start``/``end`` are character offsets into the normalized body; spans of
    consecutive sentences tile the body (no gaps, no overlap). ``text`` is the
    stripped slice used for classification.
    """

    index: int
    text: str
    start: int
    end: int

    def to_dict(self) -> dict:
        return {"index": self.index, "text": self.text, "start": self.start, "end": self.end}


@dataclass
class Email:
    message_id: str
    project_id: str
    list_name: str
    sent_at: dt.datetime
    sender: str
    sender_raw: str
    recipients: list[str] = field(default_factory=list)
    in_reply_to: str | None = None
    references: list[str] = field(default_factory=list)
    subject: str = ""
    body: str = ""
    is_bot: bool = False
    sentences: list[SentenceSpan] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["sent_at"] = self.sent_at.isoformat()
        d["sentences"] = [s.to_dict() for s in self.sentences]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Email":
        d = dict(d)
        d["sent_at"] = dt.datetime.fromisoformat(d["sent_at"])
        d["sentences"] = [SentenceSpan(**s) for s in d["sentences"]]
        return cls(**d)


@dataclass
class Commit:
    commit_id: str
    project_id: str
    authored_at: dt.datetime
    author: str
    files: list[str] = field(default_factory=list)
    is_bot: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["authored_at"] = self.authored_at.isoformat()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Commit":
        d = dict(d)
        d["authored_at"] = dt.datetime.fromisoformat(d["authored_at"])
        return cls(**d)


def month_index(when: dt.datetime, start: dt.date) -> int:
    """Calendar-month offset of ``when`` (UTC) from the month containing ``start``.

    Month 0 is the start month; earlier timestamps yield negative indices.
    """
    w = when.astimezone(dt.timezone.utc)
    return (w.year - start.year) * 12 + (w.month - start.month)


@dataclass
class ProjectManifest:
    project_id: str
    outcome: Outcome
    incubation_start: dt.date
    incubation_end: dt.date

    def __post_init__(self) -> None:
        if isinstance(self.outcome, str):
            self.outcome = Outcome(self.outcome)
        if self.incubation_start >= self.incubation_end:
            raise ValueError(
                f"{self.project_id}: incubation_start must precede incubation_end"
            )

    @property
    def end_month_index(self) -> int:
        return (self.incubation_end.year - self.incubation_start.year) * 12 + (
            self.incubation_end.month - self.incubation_start.month
        )

    def in_window(self, when: dt.datetime) -> bool:
        """True if ``when`` falls in [start - 1 month, end + 1 month]."""
        m = month_index(when, self.incubation_start)
        return -1 <= m <= self.end_month_index + 1
