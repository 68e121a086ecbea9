"""On-disk corpus layout: emails.jsonl, commits.jsonl, ingest_stats.json."""
from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

from .records import Email, Commit
from .stats import IngestStats

EMAILS_FILE = "emails.jsonl"
COMMITS_FILE = "commits.jsonl"
STATS_FILE = "ingest_stats.json"


def write_emails(emails: list[Email], directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / EMAILS_FILE
    with open(out, "w", encoding="utf-8") as fh:
        for email in emails:
            fh.write(json.dumps(email.to_dict(), sort_keys=True) + "\n")
    return out


def read_emails(directory: str | Path) -> list[Email]:
    path = Path(directory) / EMAILS_FILE
    with open(path, encoding="utf-8") as fh:
        return [Email.from_dict(json.loads(line)) for line in fh if line.strip()]


def write_commits(commits: list[Commit], directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / COMMITS_FILE
    with open(out, "w", encoding="utf-8") as fh:
        for commit in commits:
            fh.write(json.dumps(commit.to_dict(), sort_keys=True) + "\n")
    return out


def read_commits(directory: str | Path) -> list[Commit]:
    path = Path(directory) / COMMITS_FILE
    with open(path, encoding="utf-8") as fh:
        return [Commit.from_dict(json.loads(line)) for line in fh if line.strip()]


def write_stats(stats: IngestStats, directory: str | Path) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / STATS_FILE
    payload = asdict(stats)
    payload["bot_email_ratio"] = stats.bot_email_ratio
    payload["bot_commit_ratio"] = stats.bot_commit_ratio
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out
