"""Deterministic wordpiece tokenizer built from the training corpus.

No pretrained vocabulary is assumed: `build` collects words and characters
from the training sentences, and unseen words decompose into greedy
longest-match subword pieces (continuations prefixed with ``##``).  A word
containing a character never seen at build time becomes a single ``[UNK]``.
Token counts reported by the service are exactly ``len(self.pieces(text))``.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from pathlib import Path

PAD, UNK, CLS, SEP = "[PAD]", "[UNK]", "[CLS]", "[SEP]"
SPECIALS = (PAD, UNK, CLS, SEP)

WORD_RE = re.compile(r"[a-z0-9]+|[^a-z0-9\s]")


def words(text: str) -> list[str]:
    return WORD_RE.findall(text.lower())


class WordpieceTokenizer:
    def __init__(self, vocab: list[str]):
        if list(vocab[: len(SPECIALS)]) != list(SPECIALS):
            raise ValueError("vocabulary must start with the special tokens")
        if len(set(vocab)) != len(vocab):
            raise ValueError("vocabulary contains duplicates")
        self.vocab = list(vocab)
        self.piece_ids = {piece: i for i, piece in enumerate(vocab)}
        self.pad_id = self.piece_ids[PAD]
        self.unk_id = self.piece_ids[UNK]
        self.cls_id = self.piece_ids[CLS]
        self.sep_id = self.piece_ids[SEP]
        self._max_piece = max((len(p) for p in vocab), default=1)

    def __len__(self) -> int:
        return len(self.vocab)

    @classmethod
    def build(cls, texts, min_word_freq: int = 1, max_vocab: int = 30000):
        """Vocabulary: specials, then characters, then frequent whole words."""
        word_freq = Counter(w for text in texts for w in words(text))
        chars = sorted({c for w in word_freq for c in w})
        char_pieces = chars + [f"##{c}" for c in chars]
        frequent = [w for w, n in word_freq.items() if n >= min_word_freq and len(w) > 1]
        frequent.sort(key=lambda w: (-word_freq[w], w))
        room = max(0, max_vocab - len(SPECIALS) - len(char_pieces))
        keep = set(frequent[:room])
        vocab = list(SPECIALS) + char_pieces + sorted(keep)
        return cls(vocab)

    def _word_pieces(self, word: str) -> list[str]:
        if word in self.piece_ids:
            return [word]
        pieces = []
        start = 0
        while start < len(word):
            prefix = "##" if start else ""
            end = min(len(word), start + self._max_piece)
            while end > start:
                candidate = prefix + word[start:end]
                if candidate in self.piece_ids:
                    pieces.append(candidate)
                    break
                end -= 1
            else:
                return [UNK]
            start = end
        return pieces

    def pieces(self, text: str) -> list[str]:
        out: list[str] = []
        for word in words(text):
            out.extend(self._word_pieces(word))
        return out

    def encode(self, text: str) -> list[int]:
        return [self.piece_ids[p] for p in self.pieces(text)]

    def count(self, text: str) -> int:
        """Subword count of one sentence; the service's token_counts oracle."""
        return len(self.pieces(text))

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(
            json.dumps({"vocab": self.vocab}, ensure_ascii=False, indent=0) + "\n",
            encoding="utf-8",
        )
        return path

    @classmethod
    def load(cls, path: str | Path):
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(payload["vocab"])
