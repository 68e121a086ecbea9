"""Separator-token transformer encoder for sequential sentence classification.

A segment is encoded as ``[CLS] s1 [SEP] s2 [SEP] ... sk [SEP]`` and each
sentence is classified from the contextual embedding of its trailing ``[SEP]``
token, so every sentence sees its neighbours through self-attention.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
from torch import nn

from .tokenizer import WordpieceTokenizer


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int
    max_len: int = 384
    max_sentences: int = 64
    d_model: int = 64
    heads: int = 4
    layers: int = 2
    feedforward: int = 128
    dropout: float = 0.1

    def to_dict(self) -> dict:
        return asdict(self)


class SepEncoder(nn.Module):
    def __init__(self, config: ModelConfig):
        super().__init__()
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.d_model)
        self.position_embedding = nn.Embedding(config.max_len, config.d_model)
        # Sentence-id embeddings generalize BERT's A/B segment embeddings so
        # each [SEP] can tell its own sentence's tokens from the neighbours.
        # Id 0 is [CLS]/padding; sentences use 1..max_sentences.
        self.sentence_embedding = nn.Embedding(config.max_sentences + 1, config.d_model)
        layer = nn.TransformerEncoderLayer(
            d_model=config.d_model,
            nhead=config.heads,
            dim_feedforward=config.feedforward,
            dropout=config.dropout,
            activation="gelu",
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(layer, num_layers=config.layers)
        # Each sentence is classified from two summed paths.  The contextual
        # head reads the sentence's [SEP] state and the mean contextual state
        # of its own tokens; the lexical head reads the mean of its raw token
        # embeddings, a context-independent view.  Without a pretrained base
        # the attention cannot be relied on to learn separator-to-own-sentence
        # routing from small corpora, so localization is structural.  The
        # lexical path is trained with its own loss term so the contextual
        # path cannot overfit it away, and the contextual logit is squashed
        # through tanh: context acts as a bounded correction on top of the
        # sentence's own content instead of being able to overrule it with a
        # memorized response to a familiar neighbourhood.
        self.context_head = nn.Linear(2 * config.d_model, 1)
        self.lexical_head = nn.Linear(config.d_model, 1)

    @staticmethod
    def _pool(states, sentence_ids, valid, k):
        sums = states.new_zeros(states.shape[0], k, states.shape[-1])
        sums.scatter_add_(1, sentence_ids.unsqueeze(-1).expand_as(states), states * valid)
        counts = states.new_zeros(states.shape[0], k)
        counts.scatter_add_(1, sentence_ids, valid.squeeze(-1))
        return sums / counts.clamp(min=1.0).unsqueeze(-1)

    def forward(
        self, ids: torch.Tensor, sentence_ids: torch.Tensor, pad_mask: torch.Tensor
    ) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        """Contextual states (B, L, D), contextual and raw per-sentence means
        (B, K, D) with sentence number as the second index."""
        length = ids.shape[1]
        positions = torch.arange(length, device=ids.device)
        embedded = self.token_embedding(ids)
        hidden = (
            embedded
            + self.position_embedding(positions)
            + self.sentence_embedding(sentence_ids)
        )
        hidden = self.encoder(hidden, src_key_padding_mask=pad_mask)
        valid = (~pad_mask).to(hidden.dtype).unsqueeze(-1)
        k = self.config.max_sentences + 1
        context_means = self._pool(hidden, sentence_ids, valid, k)
        raw_means = self._pool(embedded, sentence_ids, valid, k)
        return hidden, context_means, raw_means

    def sentence_logits(
        self,
        ids: torch.Tensor,
        sentence_ids: torch.Tensor,
        pad_mask: torch.Tensor,
        sep_positions: list[list[int]],
    ) -> tuple[torch.Tensor, torch.Tensor]:
        """Flat logits for every sentence in the batch, row-major order.

        Returns the combined logits used for prediction and the lexical-only
        logits used as an auxiliary training target.
        """
        hidden, context_means, raw_means = self(ids, sentence_ids, pad_mask)
        rows = [r for r, seps in enumerate(sep_positions) for _ in seps]
        seps = [p for positions in sep_positions for p in positions]
        sentence_no = [
            n for positions in sep_positions for n in range(1, len(positions) + 1)
        ]
        context_features = torch.cat(
            [hidden[rows, seps], context_means[rows, sentence_no]], dim=-1
        )
        lexical = self.lexical_head(raw_means[rows, sentence_no]).squeeze(-1)
        context = torch.tanh(self.context_head(context_features).squeeze(-1))
        return lexical + context, lexical


def encode_segment(
    tokenizer: WordpieceTokenizer, sentences: list[str], max_len: int
) -> tuple[list[int], list[int], list[int]]:
    """Token ids, per-token sentence ids, and each sentence's [SEP] position.

    Long inputs are truncated deterministically: the currently longest
    sentence loses tail pieces first, never a [SEP], so every sentence keeps
    a classification position.
    """
    piece_ids = [tokenizer.encode(s) for s in sentences]
    budget = max_len - 1 - len(sentences)
    if budget < 0:
        raise ValueError(f"{len(sentences)} sentences cannot fit max_len {max_len}")
    overflow = sum(len(p) for p in piece_ids) - budget
    while overflow > 0:
        longest = max(range(len(piece_ids)), key=lambda i: len(piece_ids[i]))
        cut = min(overflow, max(1, len(piece_ids[longest]) // 2))
        piece_ids[longest] = piece_ids[longest][: len(piece_ids[longest]) - cut]
        overflow -= cut
    ids = [tokenizer.cls_id]
    sentence_ids = [0]
    sep_positions = []
    for sentence_no, pieces in enumerate(piece_ids, start=1):
        ids.extend(pieces)
        ids.append(tokenizer.sep_id)
        sentence_ids.extend([sentence_no] * (len(pieces) + 1))
        sep_positions.append(len(ids) - 1)
    return ids, sentence_ids, sep_positions


def batch_tensors(
    encoded: list[tuple[list[int], list[int], list[int]]], pad_id: int
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, list[list[int]]]:
    """Pad encoded segments into (ids, sentence_ids, pad_mask, sep_positions)."""
    width = max(len(ids) for ids, _, _ in encoded)
    ids = torch.full((len(encoded), width), pad_id, dtype=torch.long)
    sentence_ids = torch.zeros((len(encoded), width), dtype=torch.long)
    pad_mask = torch.ones((len(encoded), width), dtype=torch.bool)
    sep_positions = []
    for row, (seq, sent_ids, seps) in enumerate(encoded):
        ids[row, : len(seq)] = torch.tensor(seq, dtype=torch.long)
        sentence_ids[row, : len(seq)] = torch.tensor(sent_ids, dtype=torch.long)
        pad_mask[row, : len(seq)] = False
        sep_positions.append(seps)
    return ids, sentence_ids, pad_mask, sep_positions
