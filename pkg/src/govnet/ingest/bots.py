"""Bot traffic detection via configurable regex rules.

Rules live in a plain-text file, one per line, ``field:pattern`` where field
is ``sender`` or ``subject``; ``#`` starts a comment. The bundled default set
covers CI/build bots, issue trackers, and repository notification accounts.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

_FIELDS = ("sender", "subject")


@dataclass(frozen=True)
class BotRule:
    field: str
    pattern: re.Pattern

    def matches(self, sender: str, subject: str) -> bool:
        target = sender if self.field == "sender" else subject
        return bool(self.pattern.search(target))


class BotRules:
    def __init__(self, rules: list[BotRule]):
        self.rules = rules

    def __len__(self) -> int:
        return len(self.rules)

    @classmethod
    def parse(cls, text: str) -> "BotRules":
        rules = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            field, _, pattern = line.partition(":")
            field = field.strip().lower()
            if field not in _FIELDS or not pattern:
                raise ValueError(f"bad bot rule on line {lineno}: {line!r}")
            rules.append(BotRule(field, re.compile(pattern.strip(), re.IGNORECASE)))
        return cls(rules)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "BotRules":
        if path is None:
            text = resources.files("govnet.ingest").joinpath("data/bot_rules.txt").read_text()
        else:
            text = Path(path).read_text()
        return cls.parse(text)


_DEFAULT: BotRules | None = None


def default_rules() -> BotRules:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = BotRules.load()
    return _DEFAULT


def detect_bot(sender: str, subject: str = "", body: str = "", rules: BotRules | None = None) -> bool:
    """True iff the sender/subject matches any configured bot rule."""
    rules = rules or default_rules()
    return any(r.matches(sender or "", subject or "") for r in rules.rules)
