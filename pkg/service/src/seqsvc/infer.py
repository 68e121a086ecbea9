"""Load a trained model directory and answer batched classification calls."""
from __future__ import annotations

import json
import threading
from pathlib import Path

import torch

from .model import ModelConfig, SepEncoder, batch_tensors, encode_segment
from .tokenizer import WordpieceTokenizer
from .train import model_hash


class ModelBundle:
    """Tokenizer + model + metadata; thread-safe inference."""

    def __init__(self, tokenizer: WordpieceTokenizer, model: SepEncoder, meta: dict):
        self.tokenizer = tokenizer
        self.model = model
        self.meta = meta
        self._lock = threading.Lock()

    @classmethod
    def load(cls, model_dir: str | Path) -> "ModelBundle":
        model_dir = Path(model_dir)
        for name in ("config.json", "vocab.json", "weights.pt", "manifest.json"):
            if not (model_dir / name).is_file():
                raise FileNotFoundError(f"model artifact missing: {model_dir / name}")
        payload = json.loads((model_dir / "config.json").read_text(encoding="utf-8"))
        tokenizer = WordpieceTokenizer.load(model_dir / "vocab.json")
        model = SepEncoder(ModelConfig(**payload["model"]))
        model.load_state_dict(
            torch.load(model_dir / "weights.pt", weights_only=True)
        )
        model.eval()
        meta = json.loads((model_dir / "manifest.json").read_text(encoding="utf-8"))
        meta["model_hash"] = model_hash(model_dir)
        return cls(tokenizer, model, meta)

    @property
    def max_sentences(self) -> int:
        return 64

    def health(self) -> dict:
        return {
            "status": "ok",
            "model_hash": self.meta["model_hash"],
            "base_checkpoint": self.meta["base_checkpoint"],
        }

    def classify(self, batches: list[list[str]]) -> list[tuple[list[bool], list[int]]]:
        """(labels, token_counts) per sentence batch; one padded forward pass.

        Token counts are the tokenizer's full subword counts even when the
        model input had to be truncated to fit the position budget.
        """
        if not batches:
            return []
        max_len = self.model.config.max_len
        encoded = [
            encode_segment(self.tokenizer, sentences, max_len)
            for sentences in batches
        ]
        ids, sentence_ids, pad_mask, sep_positions = batch_tensors(
            encoded, self.tokenizer.pad_id
        )
        with self._lock, torch.no_grad():
            flat, _ = self.model.sentence_logits(ids, sentence_ids, pad_mask, sep_positions)
        results = []
        offset = 0
        for sentences in batches:
            row_logits = flat[offset : offset + len(sentences)]
            offset += len(sentences)
            labels = [bool(v > 0.0) for v in row_logits.tolist()]
            counts = [self.tokenizer.count(s) for s in sentences]
            results.append((labels, counts))
        return results
