"""Exact cosine-similarity vector index over document or sentence embeddings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgument
from .model import SearchHit


@dataclass
class VectorIndex:
    ids: list[str]                      # unique entry ids, sorted order not required
    matrix: np.ndarray                  # (n, d) float32, rows unit norm
    doc_ids: list[str]                  # parent document per entry
    seqs: list[Optional[int]]           # sentence index for sentence entries, else None
    dimension: int

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[1] != self.dimension:
            raise InvalidArgument("matrix shape does not match dimension")
        if len(set(self.ids)) != len(self.ids):
            raise InvalidArgument("vector index ids must be unique")


def build_vector_index(
    entries: list[tuple[str, np.ndarray, str, Optional[int]]], dimension: int
) -> VectorIndex:
    """entries: (id, unit vector, payload doc_id, optional sentence seq)."""
    if entries:
        matrix = np.stack([np.asarray(v, dtype=np.float32) for _, v, _, _ in entries])
    else:
        matrix = np.zeros((0, dimension), dtype=np.float32)
    return VectorIndex(
        ids=[e[0] for e in entries],
        matrix=matrix,
        doc_ids=[e[2] for e in entries],
        seqs=[e[3] for e in entries],
        dimension=dimension,
    )


def vector_search_entries(
    ix: VectorIndex,
    q: np.ndarray,
    k: int,
    *,
    allowed: set[str] | None = None,
) -> list[tuple[int, float]]:
    """Exact top-k scan by cosine similarity; ties break by ascending entry id.

    Returns (entry index, score) pairs. `allowed` restricts candidates to
    entries whose payload doc_id is in the set.
    """
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    q = np.asarray(q, dtype=np.float32)
    if q.shape != (ix.dimension,):
        raise InvalidArgument(f"query dimension {q.shape} != index dimension {ix.dimension}")
    n = len(ix.ids)
    if n == 0:
        return []
    scores = ix.matrix @ q
    if allowed is not None:
        mask = np.fromiter((d in allowed for d in ix.doc_ids), dtype=bool, count=n)
        candidates = np.nonzero(mask)[0]
    else:
        candidates = np.arange(n)
    if candidates.size == 0:
        return []
    cand_scores = scores[candidates]
    if candidates.size > k:
        # keep everything tied with the k-th score so exact tie-breaking survives
        kth = np.partition(cand_scores, candidates.size - k)[candidates.size - k]
        keep = candidates[cand_scores >= kth]
    else:
        keep = candidates
    ranked = sorted(((float(scores[i]), ix.ids[i], int(i)) for i in keep),
                    key=lambda x: (-x[0], x[1]))[:k]
    return [(i, s) for s, _id, i in ranked]


def vector_search(
    ix: VectorIndex,
    q: np.ndarray,
    k: int,
    *,
    allowed: set[str] | None = None,
) -> list[SearchHit]:
    return [
        SearchHit(doc_id=ix.doc_ids[i], score=s, rank=r + 1)
        for r, (i, s) in enumerate(vector_search_entries(ix, q, k, allowed=allowed))
    ]
