"""Counters accumulated during corpus ingestion."""
from __future__ import annotations

from dataclasses import dataclass, field, asdict


@dataclass
class IngestStats:
    emails_parsed: int = 0
    emails_skipped: int = 0
    emails_bot: int = 0
    emails_out_of_window: int = 0
    emails_unknown_sender: int = 0
    commits_parsed: int = 0
    commits_skipped: int = 0
    commits_bot: int = 0
    commits_out_of_window: int = 0
    per_project: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def bot_email_ratio(self) -> float:
        total = self.emails_parsed
        return self.emails_bot / total if total else 0.0

    @property
    def bot_commit_ratio(self) -> float:
        total = self.commits_parsed
        return self.commits_bot / total if total else 0.0

    def merge(self, other: "IngestStats") -> None:
        for name in (
            "emails_parsed",
            "emails_skipped",
            "emails_bot",
            "emails_out_of_window",
            "emails_unknown_sender",
            "commits_parsed",
            "commits_skipped",
            "commits_bot",
            "commits_out_of_window",
        ):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        for pid, counts in other.per_project.items():
            mine = self.per_project.setdefault(pid, {})
            for key, val in counts.items():
                mine[key] = mine.get(key, 0) + val

    def bump(self, project_id: str, key: str, by: int = 1) -> None:
        self.per_project.setdefault(project_id, {})
        self.per_project[project_id][key] = self.per_project[project_id].get(key, 0) + by
