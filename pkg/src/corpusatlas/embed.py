"""Embedding providers: deterministic feature hashing (default) and a remote HTTP client."""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analysis import tokenize
from .errors import InvalidArgument, ProviderUnavailable
from .model import Document, SentenceChunk


def _stable_hash(key: str) -> int:
    """Platform-independent 64-bit hash."""
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "little")


def _reserved_empty(d: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.float64)
    v[0] = 1.0
    return v


def hash_embed(text: str, d: int) -> np.ndarray:
    """Signed feature-hash embedding: unigrams at weight 1, consecutive bigrams at 0.5,
    L2-normalized. Identical text yields an identical vector on every platform."""
    if d < 2:
        raise InvalidArgument("embedding dimension must be >= 2")
    tokens = tokenize(text)
    if not tokens:
        return _reserved_empty(d)
    vec = np.zeros(d, dtype=np.float64)

    def add(key: str, weight: float) -> None:
        h = _stable_hash(key)
        sign = 1.0 if (h >> 63) & 1 else -1.0
        vec[h % d] += sign * weight

    for t in tokens:
        add(t, 1.0)
    for a, b in zip(tokens, tokens[1:]):
        add(a + " " + b, 0.5)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:  # total cancellation, treat like the empty case
        return _reserved_empty(d)
    return vec / norm


class HashEmbedder:
    """Deterministic offline provider."""

    kind = "hash"

    def __init__(self, dimension: int):
        self.dimension = dimension

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        return [hash_embed(t, self.dimension) for t in texts]


class RemoteEmbedder:
    """Client for an HTTP embedding service.

    Protocol: POST {model, inputs: [str]} -> {vectors: [[float]]}. Responses are
    re-normalized client-side. Three attempts with exponential backoff.
    """

    kind = "remote"

    def __init__(self, endpoint: str, model: str, dimension: int,
                 batch_size: int = 64, retries: int = 3, backoff: float = 0.5):
        self.endpoint = endpoint
        self.model = model
        self.dimension = dimension
        self.batch_size = batch_size
        self.retries = retries
        self.backoff = backoff

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray]:
        import httpx

        out: list[np.ndarray] = []
        for i in range(0, len(texts), self.batch_size):
            chunk = list(texts[i:i + self.batch_size])
            last_err: Exception | None = None
            for attempt in range(self.retries):
                try:
                    resp = httpx.post(self.endpoint,
                                      json={"model": self.model, "inputs": chunk},
                                      timeout=30.0)
                    resp.raise_for_status()
                    vectors = resp.json()["vectors"]
                    break
                except Exception as exc:  # noqa: BLE001 - retried, then surfaced
                    last_err = exc
                    if attempt < self.retries - 1:
                        time.sleep(self.backoff * (2 ** attempt))
            else:
                raise ProviderUnavailable(f"embedding service failed: {last_err}")
            for v in vectors:
                arr = np.asarray(v, dtype=np.float64)
                if arr.shape != (self.dimension,):
                    raise ProviderUnavailable(
                        f"service returned dimension {arr.shape}, expected {self.dimension}")
                norm = float(np.linalg.norm(arr))
                out.append(arr / norm if norm > 0 else _reserved_empty(self.dimension))
        return out


def _embed_texts(texts: list[str], ids: list[str], provider) -> list[np.ndarray]:
    try:
        vecs = provider.embed_batch(texts)
    except ProviderUnavailable as exc:
        raise ProviderUnavailable(f"{exc} (ids: {', '.join(ids[:10])})") from exc
    return [np.asarray(v, dtype=np.float32) for v in vecs]


def embed_documents(docs: list[Document], provider) -> list[np.ndarray]:
    """One unit vector per document, order-aligned; input text is title + ' ' + body."""
    texts = [f"{d.title} {d.body}" if d.title else d.body for d in docs]
    return _embed_texts(texts, [d.doc_id for d in docs], provider)


def embed_sentences(chunks: list[SentenceChunk], provider) -> list[np.ndarray]:
    return _embed_texts([c.text for c in chunks], [c.chunk_id for c in chunks], provider)
