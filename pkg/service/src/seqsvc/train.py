"""Fine-tune the separator-token classifier on labeled segments.

Writes a self-contained model directory: vocabulary, weights, configuration
(with a content hash), the per-epoch training log, and a manifest recording
the base checkpoint.  With no pretrained checkpoint available the model
trains from scratch and the manifest says so; pass ``base`` to continue from
an existing model directory instead.
"""
from __future__ import annotations

import hashlib
import json
import logging
import random
from pathlib import Path

import torch
from torch import nn

from .data import TrainingSegment
from .model import ModelConfig, SepEncoder, batch_tensors, encode_segment
from .tokenizer import WordpieceTokenizer

log = logging.getLogger(__name__)

SCRATCH = "scratch (no pretrained checkpoint; vocabulary and weights initialized from the training data)"


class TrainingError(RuntimeError):
    """Training could not run or did not produce a usable model."""


def _canonical_hash(payload: dict) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode("utf-8")
    ).hexdigest()[:16]


def model_hash(model_dir: str | Path) -> str:
    """Content hash over the artifact files; served by the health endpoint."""
    digest = hashlib.sha256()
    model_dir = Path(model_dir)
    for name in ("config.json", "vocab.json", "weights.pt"):
        digest.update(name.encode("utf-8"))
        digest.update((model_dir / name).read_bytes())
    return digest.hexdigest()[:16]


def finetune(
    segments: list[TrainingSegment],
    out_dir: str | Path,
    epochs: int = 6,
    batch: int = 16,
    lr: float = 2e-5,
    seed: int = 0,
    base: str | Path | None = None,
    weight_decay: float = 0.01,
    word_dropout: float = 0.15,
    sentence_dropout: float = 0.5,
    d_model: int = 64,
    heads: int = 4,
    layers: int = 2,
    feedforward: int = 128,
    dropout: float = 0.1,
    max_len: int = 384,
) -> Path:
    if not segments:
        raise TrainingError("empty training set")
    if epochs < 1:
        raise TrainingError(f"epochs must be >= 1, got {epochs}")
    if batch < 1:
        raise TrainingError(f"batch must be >= 1, got {batch}")
    if lr <= 0:
        raise TrainingError(f"lr must be positive, got {lr}")
    if not 0.0 <= word_dropout < 1.0:
        raise TrainingError(f"word_dropout must be in [0, 1), got {word_dropout}")
    if not 0.0 <= sentence_dropout < 1.0:
        raise TrainingError(
            f"sentence_dropout must be in [0, 1), got {sentence_dropout}"
        )

    torch.manual_seed(seed)
    torch.set_num_threads(1)

    if base is not None:
        tokenizer = WordpieceTokenizer.load(Path(base) / "vocab.json")
        base_config = json.loads((Path(base) / "config.json").read_text())
        config = ModelConfig(**base_config["model"])
        model = SepEncoder(config)
        model.load_state_dict(torch.load(Path(base) / "weights.pt", weights_only=True))
        base_checkpoint = str(base)
    else:
        tokenizer = WordpieceTokenizer.build(
            s for segment in segments for s in segment.sentences
        )
        config = ModelConfig(
            vocab_size=len(tokenizer),
            max_len=max_len,
            d_model=d_model,
            heads=heads,
            layers=layers,
            feedforward=feedforward,
            dropout=dropout,
        )
        model = SepEncoder(config)
        base_checkpoint = SCRATCH

    encoded = [
        encode_segment(tokenizer, list(segment.sentences), config.max_len)
        for segment in segments
    ]
    targets = [
        torch.tensor(segment.labels, dtype=torch.float32) for segment in segments
    ]

    optimizer = torch.optim.AdamW(model.parameters(), lr=lr, weight_decay=weight_decay)
    n_positive = sum(sum(segment.labels) for segment in segments)
    n_negative = sum(len(segment.labels) for segment in segments) - n_positive
    # Segment-level balancing still leaves individual sentences skewed
    # toward the negative class; weight positives up so recall is not
    # sacrificed for easy negatives.
    pos_weight = torch.tensor(n_negative / n_positive if n_positive else 1.0)
    loss_fn = nn.BCEWithLogitsLoss(reduction="sum", pos_weight=pos_weight)
    order = list(range(len(segments)))
    shuffler = random.Random(seed)
    noise = torch.Generator().manual_seed(seed)
    special_ids = torch.tensor([tokenizer.pad_id, tokenizer.cls_id, tokenizer.sep_id])
    epoch_losses: list[float] = []
    model.train()
    try:
        for epoch in range(epochs):
            shuffler.shuffle(order)
            total_loss = 0.0
            total_sentences = 0
            for off in range(0, len(order), batch):
                rows = order[off : off + batch]
                ids, sentence_ids, pad_mask, sep_positions = batch_tensors(
                    [encoded[i] for i in rows], tokenizer.pad_id
                )
                drop = torch.rand(ids.shape, generator=noise) < word_dropout
                keep = torch.ones(
                    sum(len(seps) for seps in sep_positions), dtype=torch.bool
                )
                if sentence_dropout > 0.0:
                    # Blank whole sentences so the exact combination of
                    # neighbours is never a reliable feature; every visible
                    # sentence must survive a randomly thinned context.
                    # Blanked sentences leave the loss because the model
                    # cannot see their content.
                    k = model.config.max_sentences + 1
                    blanked = (
                        torch.rand((ids.shape[0], k), generator=noise)
                        < sentence_dropout
                    )
                    blanked[:, 0] = False
                    drop |= blanked.gather(1, sentence_ids)
                    keep = torch.cat(
                        [
                            ~blanked[row, 1 : len(seps) + 1]
                            for row, seps in enumerate(sep_positions)
                        ]
                    )
                # Token-level masking to [UNK] makes duplicated segments
                # never repeat verbatim; the model has to rely on each
                # sentence's remaining words instead of memorizing inputs.
                drop &= ~torch.isin(ids, special_ids)
                ids = torch.where(drop, torch.full_like(ids, tokenizer.unk_id), ids)
                logits, lexical = model.sentence_logits(
                    ids, sentence_ids, pad_mask, sep_positions
                )
                labels = torch.cat([targets[i] for i in rows])
                # The auxiliary term makes the lexical path separate the
                # classes on its own, so combined-logit training cannot
                # satisfy the loss through contextual memorization alone.
                loss = loss_fn(logits[keep], labels[keep]) + loss_fn(
                    lexical[keep], labels[keep]
                )
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                total_loss += float(loss.detach())
                total_sentences += int(keep.sum())
            epoch_losses.append(total_loss / max(total_sentences, 1))
            log.info("epoch %d/%d: loss %.6f", epoch + 1, epochs, epoch_losses[-1])
    except RuntimeError as exc:
        if "out of memory" in str(exc).lower():
            raise TrainingError(f"out of memory during training: {exc}") from exc
        raise

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    training = {
        "epochs": epochs,
        "batch": batch,
        "lr": lr,
        "seed": seed,
        "weight_decay": weight_decay,
        "word_dropout": word_dropout,
        "sentence_dropout": sentence_dropout,
    }
    payload = {
        "model": config.to_dict(),
        "training": training,
        "config_hash": _canonical_hash({"model": config.to_dict(), "training": training}),
    }
    (out_dir / "config.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    tokenizer.save(out_dir / "vocab.json")
    model.eval()
    torch.save(model.state_dict(), out_dir / "weights.pt")
    (out_dir / "training_log.json").write_text(
        json.dumps(
            {
                "epoch_losses": epoch_losses,
                "n_segments": len(segments),
                "n_sentences": int(sum(len(s.labels) for s in segments)),
                "n_positive_sentences": int(
                    sum(sum(s.labels) for s in segments)
                ),
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    (out_dir / "manifest.json").write_text(
        json.dumps(
            {
                "base_checkpoint": base_checkpoint,
                "config_hash": payload["config_hash"],
                "model_hash": model_hash(out_dir),
                "vocab_size": len(tokenizer),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
        encoding="utf-8",
    )
    return out_dir
