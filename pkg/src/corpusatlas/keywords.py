"""Cluster-level tf-idf keyword extraction over pseudo-documents."""

from __future__ import annotations

import math

from .analysis import STOPWORDS, tokenize
from .model import Document


def _cluster_tokens(docs: list[Document]) -> list[str]:
    tokens = []
    for d in docs:
        tokens.extend(t for t in tokenize(f"{d.title} {d.body}") if t not in STOPWORDS)
    return tokens


def ctfidf_keywords(
    topic_docs: list[Document],
    all_topics_docs: list[list[Document]],
    top_n: int,
) -> list[tuple[str, float]]:
    """Each cluster is one pseudo-document; tf(t, c) = count / cluster tokens,
    idf(t) = ln(1 + C / cf(t)) with cf = number of clusters containing t.
    Top-n by (weight desc, term asc)."""
    n_clusters = len(all_topics_docs)
    cluster_freq: dict[str, int] = {}
    for docs in all_topics_docs:
        for term in set(_cluster_tokens(docs)):
            cluster_freq[term] = cluster_freq.get(term, 0) + 1
    tokens = _cluster_tokens(topic_docs)
    total = len(tokens)
    if total == 0:
        return []
    counts: dict[str, int] = {}
    for t in tokens:
        counts[t] = counts.get(t, 0) + 1
    weights = []
    for term, count in counts.items():
        tf = count / total
        idf = math.log(1.0 + n_clusters / cluster_freq.get(term, 1))
        weights.append((term, tf * idf))
    weights.sort(key=lambda x: (-x[1], x[0]))
    return weights[:top_n]
