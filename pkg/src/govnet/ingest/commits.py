"""Commit-log ingestion.

Primary input is JSON-lines, one object per commit:
``{"id", "author", "email", "date" (ISO-8601), "files": [paths]}``.
``convert_gitlog`` turns ``git log --name-only --date=iso-strict`` output into
that format.
"""
from __future__ import annotations

import datetime as dt
import json
import logging
import re
from importlib import resources
from pathlib import Path

from .bots import BotRules, detect_bot
from .mbox import IngestError
from .records import Commit
from .stats import IngestStats

log = logging.getLogger(__name__)

_SVN_PREFIX = re.compile(r"^(?:trunk|branches/[^/]+|tags/[^/]+)/")


def normalize_path(path: str) -> str:
    """Strip SVN layout prefixes (trunk/, branches/<x>/, tags/<x>/)."""
    path = path.strip().lstrip("/")
    return _SVN_PREFIX.sub("", path)


class ExtensionWhitelist:
    """Source/markup extension set; files outside it are dropped."""

    def __init__(self, extensions: set[str]):
        self.extensions = {e.lower().lstrip(".") for e in extensions}

    def __len__(self) -> int:
        return len(self.extensions)

    def __contains__(self, path: str) -> bool:
        name = path.rsplit("/", 1)[-1].lower()
        # Extensionless build files named after their tool (Makefile, Dockerfile).
        if name in ("makefile", "dockerfile", "rakefile", "cmakelists.txt"):
            return True
        if "." not in name:
            return False
        return name.rsplit(".", 1)[-1] in self.extensions

    def filter(self, paths: list[str]) -> list[str]:
        return [p for p in paths if p in self]

    @classmethod
    def load(cls, path: str | Path | None = None) -> "ExtensionWhitelist":
        if path is None:
            text = (
                resources.files("govnet.ingest")
                .joinpath("data/source_extensions.txt")
                .read_text()
            )
        else:
            text = Path(path).read_text()
        exts = {
            line.strip()
            for line in text.splitlines()
            if line.strip() and not line.startswith("#")
        }
        return cls(exts)


_DEFAULT_WHITELIST: ExtensionWhitelist | None = None


def default_whitelist() -> ExtensionWhitelist:
    global _DEFAULT_WHITELIST
    if _DEFAULT_WHITELIST is None:
        _DEFAULT_WHITELIST = ExtensionWhitelist.load()
    return _DEFAULT_WHITELIST


def parse_commits(
    path: str | Path,
    project_id: str,
    whitelist: ExtensionWhitelist | None = None,
    bot_rules: BotRules | None = None,
    stats: IngestStats | None = None,
) -> list[Commit]:
    """Parse a JSON-lines commit log into Commit records, in file order.

    File lists are SVN-prefix-normalized and whitelist-filtered; commits whose
    filtered list is empty are kept with no files (they add no tech edges).
    Malformed lines are skipped and counted.
    """
    path = Path(path)
    stats = stats if stats is not None else IngestStats()
    whitelist = whitelist or default_whitelist()
    if not path.is_file():
        raise IngestError(f"commit log not readable: {path}")
    commits: list[Commit] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                commit_id = str(obj["id"])
                author_email = str(obj.get("email") or obj.get("author") or "").strip().lower()
                authored_at = dt.datetime.fromisoformat(str(obj["date"]))
                files = [normalize_path(f) for f in obj.get("files", [])]
            except (KeyError, ValueError, TypeError) as exc:
                log.warning("%s:%d: skipping malformed commit line: %s", path, lineno, exc)
                stats.commits_skipped += 1
                stats.bump(project_id, "commits_skipped")
                continue
            if authored_at.tzinfo is None:
                authored_at = authored_at.replace(tzinfo=dt.timezone.utc)
            authored_at = authored_at.astimezone(dt.timezone.utc)
            is_bot = detect_bot(
                f"{obj.get('author', '')} <{author_email}>", "", "", rules=bot_rules
            )
            stats.commits_parsed += 1
            stats.bump(project_id, "commits_parsed")
            if is_bot:
                stats.commits_bot += 1
                stats.bump(project_id, "commits_bot")
            commits.append(
                Commit(
                    commit_id=commit_id,
                    project_id=project_id,
                    authored_at=authored_at,
                    author=author_email,
                    files=sorted(set(whitelist.filter(files))),
                    is_bot=is_bot,
                )
            )
    return commits


_GITLOG_COMMIT = re.compile(r"^commit ([0-9a-f]{7,40})\b")
_GITLOG_AUTHOR = re.compile(r"^Author:\s*(.*?)\s*<([^>]*)>")
_GITLOG_DATE = re.compile(r"^Date:\s*(\S.*)$")


def convert_gitlog(source: str | Path, dest: str | Path) -> int:
    """Convert ``git log --name-only --date=iso-strict`` output to JSON-lines.

    Returns the number of commits written.
    """
    entries: list[dict] = []
    current: dict | None = None
    in_message = False
    with open(source, encoding="utf-8", errors="replace") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            m = _GITLOG_COMMIT.match(line)
            if m:
                if current:
                    entries.append(current)
                current = {"id": m.group(1), "author": "", "email": "", "date": "", "files": []}
                in_message = False
                continue
            if current is None:
                continue
            m = _GITLOG_AUTHOR.match(line)
            if m:
                current["author"], current["email"] = m.group(1), m.group(2).lower()
                continue
            m = _GITLOG_DATE.match(line)
            if m:
                current["date"] = m.group(1).strip()
                continue
            if line.startswith("    "):
                in_message = True
                continue
            if not line.strip():
                in_message = False
                continue
            if not in_message and not line.startswith(("Merge:", "Commit:", "CommitDate:")):
                current["files"].append(line.strip())
    if current:
        entries.append(current)
    with open(dest, "w", encoding="utf-8") as out:
        for entry in entries:
            out.write(json.dumps(entry, sort_keys=True) + "\n")
    return len(entries)
