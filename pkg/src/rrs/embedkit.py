"""Embedding providers and the vector similarity/distance family.

Three providers share one interface: a JSONL file store of precomputed
vectors (what the test suite runs on), an HTTP client for the embedding
service, and a deterministic mock that derives unit vectors from a hash
of (model_id, source text) so fixtures need no model runtime.
"""

from __future__ import annotations

import hashlib
import json
import struct
import threading
import time
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    MissingVectorError,
    ProviderServiceError,
    UndefinedSimilarityError,
)


@dataclass
class EmbeddingVector:
    model_id: str
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.shape[0] < 1:
            raise ValueError("embedding must be a non-empty 1-d vector")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("embedding contains non-finite entries")

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


@dataclass
class ModelSimilarity:
    model_id: str
    cosine: float
    dot: float
    l1: float
    l2: float
    linf: float


def cosine(x: EmbeddingVector, y: EmbeddingVector) -> float:
    """Inner product over the product of Euclidean norms."""
    if x.dim != y.dim:
        raise DimensionMismatchError(f"dims {x.dim} != {y.dim}")
    nx = float(np.linalg.norm(x.values))
    ny = float(np.linalg.norm(y.values))
    if nx == 0.0 or ny == 0.0:
        raise UndefinedSimilarityError("cosine undefined for zero-norm vector")
    return float(np.dot(x.values, y.values)) / (nx * ny)


def distance_family(x: EmbeddingVector, y: EmbeddingVector) -> ModelSimilarity:
    """Cosine, dot, L1, L2, and Chebyshev in one pass."""
    if x.dim != y.dim:
        raise DimensionMismatchError(f"dims {x.dim} != {y.dim}")
    diff = x.values - y.values
    return ModelSimilarity(
        model_id=x.model_id,
        cosine=cosine(x, y),
        dot=float(np.dot(x.values, y.values)),
        l1=float(np.sum(np.abs(diff))),
        l2=float(np.linalg.norm(diff)),
        linf=float(np.max(np.abs(diff))) if diff.size else 0.0,
    )


# -- providers ----------------------------------------------------------------


class FileStoreProvider:
    """Precomputed vectors from a JSONL store.

    Records: {"pair_id": ..., "model_id": ..., "side": "vuln"|"benign",
    "vector": [decimal numbers]}.
    """

    kind = "file_store"

    def __init__(self, path):
        self.path = str(path)
        self._vectors: dict[tuple[str, str, str], np.ndarray] = {}
        models = set()
        with open(path, "r", encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                raw = line.strip()
                if not raw:
                    continue
                obj = json.loads(raw)
                key = (obj["pair_id"], obj["model_id"], obj["side"])
                self._vectors[key] = np.array(obj["vector"], dtype=np.float64)
                models.add(obj["model_id"])
        self.model_ids = sorted(models)

    def embed_pair(self, pair, model_id: str) -> tuple[np.ndarray, np.ndarray]:
        out = []
        for side in ("vuln", "benign"):
            key = (pair.pair_id, model_id, side)
            vec = self._vectors.get(key)
            if vec is None:
                raise MissingVectorError(f"no vector for {key}")
            out.append(vec)
        return out[0], out[1]


class MockProvider:
    """Seeded hash-to-vector generator; identical inputs give identical vectors."""

    kind = "mock"

    def __init__(self, model_ids=("model-a", "model-b", "model-c"), dim: int = 64,
                 seed: int = 0):
        self.model_ids = list(model_ids)
        self.dim = dim
        self.seed = seed

    def _vector(self, model_id: str, text: str) -> np.ndarray:
        values = np.empty(self.dim, dtype=np.float64)
        base = hashlib.sha256(
            f"{self.seed}\x00{model_id}\x00".encode() + text.encode()
        ).digest()
        produced = 0
        counter = 0
        while produced < self.dim:
            block = hashlib.sha256(base + counter.to_bytes(4, "big")).digest()
            for off in range(0, 32, 8):
                if produced == self.dim:
                    break
                (raw,) = struct.unpack_from(">Q", block, off)
                values[produced] = raw / float(1 << 64) * 2.0 - 1.0
                produced += 1
            counter += 1
        norm = float(np.linalg.norm(values))
        return values / norm

    def embed_pair(self, pair, model_id: str) -> tuple[np.ndarray, np.ndarray]:
        return (self._vector(model_id, pair.vuln_source),
                self._vector(model_id, pair.benign_source))


class HttpServiceProvider:
    """Client for the embedding service: POST /embed {model_id, texts}.

    In-flight requests are bounded and idempotent requests retry twice
    with backoff.
    """

    kind = "http_service"

    def __init__(self, base_url: str, model_ids, max_in_flight: int = 4,
                 timeout: float = 30.0, retries: int = 2, backoff: float = 0.2):
        self.base_url = base_url.rstrip("/")
        self.model_ids = list(model_ids)
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._gate = threading.Semaphore(max_in_flight)

    def _post_embed(self, model_id: str, texts: list[str]) -> list[np.ndarray]:
        body = json.dumps({"model_id": model_id, "texts": texts}).encode()
        request = urllib.request.Request(
            self.base_url + "/embed", data=body,
            headers={"Content-Type": "application/json"}, method="POST")
        last_error = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                with self._gate:
                    with urllib.request.urlopen(request, timeout=self.timeout) as resp:
                        if resp.status < 200 or resp.status >= 300:
                            raise ProviderServiceError(f"status {resp.status}")
                        payload = json.loads(resp.read().decode())
                vectors = [np.array(v, dtype=np.float64) for v in payload["vectors"]]
                if len(vectors) != len(texts):
                    raise ProviderServiceError("vector count does not match texts")
                return vectors
            except (urllib.error.URLError, OSError, json.JSONDecodeError, KeyError) as exc:
                last_error = exc
        raise ProviderServiceError(f"embedding service unreachable: {last_error}")

    def embed_pair(self, pair, model_id: str) -> tuple[np.ndarray, np.ndarray]:
        vectors = self._post_embed(model_id, [pair.vuln_source, pair.benign_source])
        return vectors[0], vectors[1]


def get_pair_embeddings(provider, pair, model_id: str) -> tuple[EmbeddingVector, EmbeddingVector]:
    """(vuln vector, benign vector) for one model; dims must agree."""
    if model_id not in provider.model_ids:
        raise MissingVectorError(f"model {model_id!r} not offered by provider")
    raw_v, raw_b = provider.embed_pair(pair, model_id)
    x = EmbeddingVector(model_id=model_id, values=raw_v)
    y = EmbeddingVector(model_id=model_id, values=raw_b)
    if x.dim != y.dim:
        raise DimensionMismatchError(
            f"pair {pair.pair_id}: sides disagree on dim ({x.dim} vs {y.dim})")
    return x, y


def write_store(path, records) -> None:
    """Persist (pair_id, model_id, side, vector) tuples as a JSONL store."""
    with open(path, "w", encoding="utf-8") as handle:
        for pair_id, model_id, side, vector in records:
            handle.write(json.dumps({
                "pair_id": pair_id,
                "model_id": model_id,
                "side": side,
                "vector": [float(v) for v in vector],
            }) + "\n")


def precompute_store(provider, pairs, model_ids, out_path) -> int:
    """Embed every pair under every model and write the JSONL store."""
    rows = []
    for pair in pairs:
        for model_id in model_ids:
            x, y = get_pair_embeddings(provider, pair, model_id)
            rows.append((pair.pair_id, model_id, "vuln", x.values))
            rows.append((pair.pair_id, model_id, "benign", y.values))
    write_store(out_path, rows)
    return len(rows)
