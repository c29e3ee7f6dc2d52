"""Inverted index with BM25 scoring over body and title fields."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analysis import tokenize
from .errors import InvalidArgument
from .model import Document, SearchHit

FIELDS = ("body", "title")


@dataclass
class FieldIndex:
    postings: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    doc_lengths: dict[str, int] = field(default_factory=dict)

    @property
    def avg_doc_length(self) -> float:
        if not self.doc_lengths:
            return 0.0
        return sum(self.doc_lengths.values()) / len(self.doc_lengths)


@dataclass
class LexicalIndex:
    fields: dict[str, FieldIndex]
    n_docs: int


def build_lexical(docs: list[Document]) -> LexicalIndex:
    indexes = {f: FieldIndex() for f in FIELDS}
    for doc in docs:
        for fname, text in (("body", doc.body), ("title", doc.title)):
            fx = indexes[fname]
            tokens = tokenize(text)
            fx.doc_lengths[doc.doc_id] = len(tokens)
            counts: dict[str, int] = {}
            for t in tokens:
                counts[t] = counts.get(t, 0) + 1
            for term in sorted(counts):
                fx.postings.setdefault(term, []).append((doc.doc_id, counts[term]))
    return LexicalIndex(fields=indexes, n_docs=len(docs))


def bm25_search(
    ix: LexicalIndex,
    query: str,
    k: int,
    *,
    field_name: str = "body",
    k1: float = 1.2,
    b: float = 0.75,
    allowed: set[str] | None = None,
) -> list[SearchHit]:
    """Top-k documents by BM25 with idf(t) = ln(1 + (N - df + 0.5)/(df + 0.5)).

    Only documents in `allowed` (when given) are scored; zero-score documents
    are excluded; ties break by ascending doc_id.
    """
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    if field_name not in FIELDS:
        raise InvalidArgument(f"unknown field {field_name!r}")
    terms = tokenize(query)
    if not terms:
        raise InvalidArgument("query has no tokens")
    fx = ix.fields[field_name]
    n = ix.n_docs
    avgdl = fx.avg_doc_length
    scores: dict[str, float] = {}
    for term in terms:
        plist = fx.postings.get(term)
        if not plist:
            continue
        df = len(plist)
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        for doc_id, tf in plist:
            if allowed is not None and doc_id not in allowed:
                continue
            dl = fx.doc_lengths[doc_id]
            denom = tf + k1 * (1.0 - b + b * dl / avgdl) if avgdl > 0 else tf + k1
            scores[doc_id] = scores.get(doc_id, 0.0) + idf * tf * (k1 + 1.0) / denom
    ranked = sorted(
        ((doc_id, s) for doc_id, s in scores.items() if s > 0.0),
        key=lambda x: (-x[1], x[0]),
    )[:k]
    return [
        SearchHit(doc_id=d, score=s, rank=i + 1, matched_field=field_name)
        for i, (d, s) in enumerate(ranked)
    ]
