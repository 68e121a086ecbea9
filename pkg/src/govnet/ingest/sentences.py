"""Rule-based sentence splitting.

Deterministic, dependency-free approximation of a sentence tokenizer: split on
terminal punctuation (``. ! ?``) unless the candidate is guarded (known
abbreviation, single-letter initial, decimal or version number, or an
ellipsis run followed by a lowercase continuation). Blank lines also
terminate sentences, which suits email prose.
"""
from __future__ import annotations

import re

from .records import SentenceSpan

# Lowercased abbreviation stems that do not end a sentence when followed by
# a period. Multi-dot forms (e.g., i.e.) are matched against their last dot.
_ABBREVIATIONS = frozenset(
    """
    e.g i.e etc vs cf al approx dept est fig figs eq eqs sec chap
    mr mrs ms dr prof rev gen sen rep st jr sr no nos vol vols p pp
    inc ltd co corp dist univ assn bros ver resp misc
    jan feb mar apr jun jul aug sep sept oct nov dec
    a.m p.m u.s u.k
    """.split()
)

_TERMINALS = ".!?"


def _is_abbreviation(text: str, dot: int) -> bool:
    """True if the period at ``dot`` ends an abbreviation rather than a sentence."""
    j = dot - 1
    while j >= 0 and (text[j].isalnum() or text[j] == "."):
        j -= 1
    word = text[j + 1 : dot].lower()
    if not word:
        return False
    if word in _ABBREVIATIONS or word.rstrip(".") in _ABBREVIATIONS:
        return True
    # Single-letter initials: "J. Smith"
    if len(word) == 1 and word.isalpha():
        return True
    return False


def _splits_number(text: str, i: int) -> bool:
    """True for dots embedded in decimals or dotted versions like 1.2.3."""
    return (
        text[i] == "."
        and i > 0
        and i + 1 < len(text)
        and text[i - 1].isdigit()
        and text[i + 1].isdigit()
    )


def _boundary_positions(text: str) -> list[int]:
    """End offsets (exclusive) of sentence boundaries inside ``text``."""
    bounds: list[int] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in _TERMINALS:
            # Swallow a run of terminals/quotes/brackets: "?!", '."', ').'
            j = i + 1
            while j < n and text[j] in ".!?\"')]}":
                j += 1
            guarded = False
            if ch == ".":
                if _splits_number(text, i):
                    guarded = True
                elif _is_abbreviation(text, i):
                    guarded = True
                elif j < n:
                    # Ellipsis or terminal followed by a lowercase continuation
                    # binds to the same sentence ("wait... maybe").
                    k = j
                    while k < n and text[k] in " \t":
                        k += 1
                    if k < n and text[k].islower():
                        guarded = True
            if not guarded and (j >= n or text[j].isspace()):
                bounds.append(j)
            i = j
            continue
        if ch == "\n":
            # A blank line (or more) always terminates the current sentence.
            j = i
            while j < n and text[j] in "\n\r \t":
                j += 1
            if "\n" in text[i:j] and text[i:j].count("\n") >= 2:
                bounds.append(i)
            i = max(j, i + 1)
            continue
        i += 1
    return bounds


def split_sentences(body: str) -> list[SentenceSpan]:
    """Split ``body`` into sentence records whose spans tile the text.

    Spans partition ``[0, len(body))`` in order: each sentence extends from the
    end of the previous one through its terminal punctuation plus trailing
    whitespace. Whitespace-only fragments merge into their neighbor. Empty
    body yields an empty list.
    """
    if not body or not body.strip():
        return []
    cuts = [c for c in _boundary_positions(body) if 0 < c < len(body)]
    edges = [0] + sorted(set(cuts)) + [len(body)]
    spans: list[tuple[int, int]] = []
    for a, b in zip(edges, edges[1:]):
        if body[a:b].strip():
            spans.append((a, b))
        elif spans:
            spans[-1] = (spans[-1][0], b)
        # else: leading whitespace folds into the first real sentence below
    if not spans:
        return []
    spans[0] = (0, spans[0][1])
    spans[-1] = (spans[-1][0], len(body))
    # Re-tile: each span starts where the previous ended.
    tiled: list[tuple[int, int]] = []
    prev_end = 0
    for _, b in spans:
        tiled.append((prev_end, b))
        prev_end = b
    return [
        SentenceSpan(index=i, text=body[a:b].strip(), start=a, end=b)
        for i, (a, b) in enumerate(tiled)
    ]
