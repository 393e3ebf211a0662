"""Model registry: checkpoint configuration, lazy loading, pooling.

Each model_id maps to a checkpoint plus pooling/truncation settings.
Inference per model is serialized through a per-model lock; vectors are
deterministic for fixed weights (inference mode, no dropout).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

POOLINGS = ("mean", "first_token")

# encoder checkpoints for the default roster; encoder-decoder models are
# embedded through their encoder stack only
DEFAULT_CHECKPOINTS = {
    "codebert-base": "microsoft/codebert-base",
    "graphcodebert-base": "microsoft/graphcodebert-base",
    "unixcoder-base": "microsoft/unixcoder-base",
    "codet5-base": "Salesforce/codet5-base",
    "codet5-770m": "Salesforce/codet5p-770m",
}


class UnknownModelError(KeyError):
    pass


class BatchTooLargeError(ValueError):
    pass


@dataclass
class ModelRegistryEntry:
    model_id: str
    checkpoint: str
    pooling: str = "mean"
    max_tokens: int = 512
    revision: str | None = None

    def __post_init__(self):
        if self.pooling not in POOLINGS:
            raise ValueError(f"pooling must be one of {POOLINGS}")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be positive")


class HFEncoder:
    """transformers-backed encoder; loaded lazily on first request."""

    def __init__(self, entry: ModelRegistryEntry):
        self.entry = entry
        self._tokenizer = None
        self._model = None

    def _load(self):
        if self._model is not None:
            return
        import torch
        from transformers import AutoModel, AutoTokenizer

        self._tokenizer = AutoTokenizer.from_pretrained(
            self.entry.checkpoint, revision=self.entry.revision)
        model = AutoModel.from_pretrained(
            self.entry.checkpoint, revision=self.entry.revision)
        model = getattr(model, "encoder", model)  # encoder-decoder: encoder side
        model.eval()
        self._model = model
        self._torch = torch

    def encode(self, texts: list[str]) -> tuple[np.ndarray, list[bool]]:
        self._load()
        torch = self._torch
        batch = self._tokenizer(
            texts, padding=True, truncation=True,
            max_length=self.entry.max_tokens, return_tensors="pt",
            return_overflowing_tokens=False)
        truncated = [
            len(self._tokenizer(t, truncation=False)["input_ids"]) > self.entry.max_tokens
            for t in texts
        ]
        with torch.inference_mode():
            output = self._model(**batch)
        hidden = output.last_hidden_state  # batch x tokens x dim
        if self.entry.pooling == "first_token":
            pooled = hidden[:, 0, :]
        else:
            mask = batch["attention_mask"].unsqueeze(-1).to(hidden.dtype)
            pooled = (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1)
        return pooled.double().cpu().numpy(), truncated


class Registry:
    """model_id -> (entry, encoder, lock); inference serialized per model."""

    def __init__(self, entries=None, max_batch: int = 64,
                 encoder_factory=HFEncoder):
        self._entries: dict[str, ModelRegistryEntry] = {}
        self._encoders: dict[str, object] = {}
        self._locks: dict[str, threading.Lock] = {}
        self.max_batch = max_batch
        self._encoder_factory = encoder_factory
        for entry in entries if entries is not None else default_entries():
            self.add(entry)

    def add(self, entry: ModelRegistryEntry, encoder=None) -> None:
        self._entries[entry.model_id] = entry
        self._locks[entry.model_id] = threading.Lock()
        if encoder is not None:
            self._encoders[entry.model_id] = encoder

    @property
    def model_ids(self) -> list[str]:
        return sorted(self._entries)

    def entry(self, model_id: str) -> ModelRegistryEntry:
        got = self._entries.get(model_id)
        if got is None:
            raise UnknownModelError(model_id)
        return got

    def describe(self) -> list[dict]:
        return [
            {
                "model_id": e.model_id,
                "checkpoint": e.checkpoint,
                "pooling": e.pooling,
                "max_tokens": e.max_tokens,
                "revision": e.revision,
                "loaded": e.model_id in self._encoders,
            }
            for e in (self._entries[m] for m in self.model_ids)
        ]

    def embed(self, model_id: str, texts: list[str]) -> tuple[np.ndarray, list[bool]]:
        entry = self.entry(model_id)
        if not texts:
            raise ValueError("texts must be non-empty")
        if len(texts) > self.max_batch:
            raise BatchTooLargeError(
                f"batch of {len(texts)} exceeds limit {self.max_batch}")
        with self._locks[model_id]:
            encoder = self._encoders.get(model_id)
            if encoder is None:
                encoder = self._encoder_factory(entry)
                self._encoders[model_id] = encoder
            vectors, truncated = encoder.encode(list(texts))
        vectors = np.asarray(vectors, dtype=np.float64)
        if vectors.ndim != 2 or vectors.shape[0] != len(texts):
            raise RuntimeError("encoder returned a malformed batch")
        return vectors, list(truncated)


def default_entries() -> list[ModelRegistryEntry]:
    return [ModelRegistryEntry(model_id=mid, checkpoint=ckpt)
            for mid, ckpt in DEFAULT_CHECKPOINTS.items()]
