"""Token counting for segment budgets.

The default tokenizer estimates subword counts from regex word/punctuation
tokens scaled by 1.3 (rounded up).  An external classifier service may report
exact counts; those override the estimate when present.
"""
from __future__ import annotations

import math
import re
from typing import Protocol

_TOKEN = re.compile(r"\w+|[^\w\s]")
_SUBWORD_FACTOR = 1.3


class Tokenizer(Protocol):
    def count(self, text: str) -> int: ...


class RegexTokenizer:
    """Word/punctuation tokens scaled to an estimated subword count."""

    def __init__(self, factor: float = _SUBWORD_FACTOR):
        self.factor = factor

    def tokens(self, text: str) -> list[str]:
        return _TOKEN.findall(text)

    def count(self, text: str) -> int:
        n = len(self.tokens(text))
        return max(1, math.ceil(self.factor * n))


_DEFAULT: RegexTokenizer | None = None


def default_tokenizer() -> RegexTokenizer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = RegexTokenizer()
    return _DEFAULT
