"""Question answering: corpus-level routing over cluster labels and
document-level retrieval-augmented answering with source attribution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embed import hash_embed
from .errors import EmptyContextError, InvalidArgument, NoRouteError, ProviderUnavailable
from .llm import load_prompt
from .model import Answer, Topic
from .vindex import VectorIndex, vector_search_entries

_ROUTE_EMBED_DIM = 256       # internal dim for label/query similarity, independent of corpus d
_UNMATCHED_LABEL_MIN_SIM = 0.5


@dataclass(frozen=True)
class SentenceContext:
    doc_id: str
    seq: int
    text: str
    score: float


def _label_similarity(a: str, b: str) -> float:
    return float(np.dot(hash_embed(a, _ROUTE_EMBED_DIM), hash_embed(b, _ROUTE_EMBED_DIM)))


def _stub_route(query: str, labels: list[tuple[str, str]]) -> list[str]:
    q = query.lower()
    matched = [tid for tid, label in labels if label and label.lower() in q]
    if matched:
        return matched
    best = max(labels, key=lambda x: (_label_similarity(x[1], query), x[0]))
    return [best[0]]


def route_corpus_query(llm, query: str, labels: list[tuple[str, str]]) -> tuple[list[str], bool]:
    """Select topic ids relevant to the query. Returns (topic_ids, degraded).

    Stub: case-insensitive substring match of each label against the query,
    falling back to the single most similar label. Remote: the model picks a
    subset of labels; unmatched returned labels resolve by hash-embedding
    similarity and are dropped below 0.5.
    """
    if not labels:
        raise InvalidArgument("need at least one label to route over")
    if getattr(llm, "kind", "stub") == "stub":
        return _stub_route(query, labels), False
    prompt = load_prompt("route").format(
        labels="\n".join(label for _, label in labels), query=query)
    try:
        text = llm.complete(prompt)
    except ProviderUnavailable:
        return _stub_route(query, labels), True
    by_label = {label.strip(): tid for tid, label in labels}
    out: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line in by_label:
            tid = by_label[line]
        else:
            cand, sim = max(
                ((tid, _label_similarity(line, label)) for tid, label in labels),
                key=lambda x: (x[1], x[0]))
            if sim < _UNMATCHED_LABEL_MIN_SIM:
                continue
            tid = cand
        if tid not in out:
            out.append(tid)
    if not out:
        return _stub_route(query, labels), False
    return out, False


def answer_corpus(llm, query: str, topics: list[Topic], *, degraded: bool = False) -> Answer:
    """Summarize the selected topics' labels, keywords, and descriptions."""
    if not topics:
        raise NoRouteError("corpus-level answer requires at least one routed topic")
    contexts = tuple(
        (t.topic_id,
         f"{t.label}; keywords: {', '.join(term for term, _ in t.keywords)}; {t.description}",
         1.0)
        for t in topics
    )
    stub_text = "\n".join(
        f"{t.label}: {', '.join(term for term, _ in t.keywords[:5])}" for t in topics)
    citations = tuple(t.topic_id for t in topics)
    if getattr(llm, "kind", "stub") == "stub":
        return Answer(text=stub_text, mode="corpus", citations=citations,
                      contexts=contexts, degraded=degraded)
    prompt = load_prompt("corpus_answer").format(
        contexts="\n".join(c[1] for c in contexts), query=query)
    try:
        text = llm.complete(prompt).strip()
    except ProviderUnavailable:
        return Answer(text=stub_text, mode="corpus", citations=citations,
                      contexts=contexts, degraded=True)
    return Answer(text=text, mode="corpus", citations=citations,
                  contexts=contexts, degraded=degraded)


def retrieve_sentences(
    vix: VectorIndex,
    query_vec: np.ndarray,
    allowed_doc_ids: set[str],
    sentence_texts: dict[str, str],
    k: int,
) -> list[SentenceContext]:
    """Top-k sentences by cosine among entries whose parent document passes the
    filter; ties break by (doc_id asc, seq asc) via the entry id ordering."""
    hits = vector_search_entries(vix, query_vec, k, allowed=allowed_doc_ids)
    if not hits:
        raise EmptyContextError("no sentence passes the active filter")
    out = []
    for i, score in hits:
        out.append(SentenceContext(
            doc_id=vix.doc_ids[i], seq=int(vix.seqs[i]),
            text=sentence_texts[vix.ids[i]], score=score))
    return out


def answer_document(llm, query: str, contexts: list[SentenceContext]) -> Answer:
    """Generate an attributed answer from retrieved sentences.

    Stub: the top-3 context sentences concatenated, each suffixed with its
    source doc_id; citations are the context doc_ids deduplicated in rank order.
    """
    if not contexts:
        raise InvalidArgument("document-level answer requires contexts")
    ctx_tuples = tuple((c.doc_id, c.text, c.score) for c in contexts)

    def stub_answer(degraded: bool) -> Answer:
        parts = [f"{c.text} [{c.doc_id}]" for c in contexts[:3]]
        cited: list[str] = []
        for c in contexts[:3]:
            if c.doc_id not in cited:
                cited.append(c.doc_id)
        return Answer(text=" ".join(parts), mode="document", citations=tuple(cited),
                      contexts=ctx_tuples, degraded=degraded)

    if getattr(llm, "kind", "stub") == "stub":
        return stub_answer(False)
    numbered = "\n".join(f"[{i + 1}] {c.text}" for i, c in enumerate(contexts))
    prompt = load_prompt("document_answer").format(contexts=numbered, query=query)
    try:
        text = llm.complete(prompt).strip()
    except ProviderUnavailable:
        return stub_answer(True)
    cited: list[str] = []
    for i, c in enumerate(contexts):
        if f"[{i + 1}]" in text and c.doc_id not in cited:
            cited.append(c.doc_id)
    if not cited:  # the model cited nothing usable; keep attribution sound
        cited = [contexts[0].doc_id]
    return Answer(text=text, mode="document", citations=tuple(cited),
                  contexts=ctx_tuples, degraded=False)
