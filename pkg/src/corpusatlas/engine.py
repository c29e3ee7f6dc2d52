"""The built engine: owns all indexes and the merged atlas, and answers every
query the gateway or CLI can pose. Immutable after build/load."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import qa as qa_mod
from .atlas import MergedAtlas, build_hierarchy, layout_atlas, merge_models
from .clustering import cluster_interval
from .config import EngineConfig
from .embed import HashEmbedder, embed_documents, embed_sentences
from .errors import EmptyContextError, InvalidArgument
from .filters import apply_filter, timeline_histogram
from .ingest import compute_stats, partition_intervals, segment_sentences
from .lexical import LexicalIndex, bm25_search, build_lexical
from .llm import StubLlm
from .model import (Answer, CorpusStats, Document, Filter, OUTLIER_TOPIC_ID,
                    QaRequest, SearchHit, SentenceChunk)
from .vindex import VectorIndex, build_vector_index, vector_search


@dataclass
class Engine:
    cfg: EngineConfig
    docs: list[Document]
    chunks: list[SentenceChunk]
    stats: CorpusStats
    lexical: LexicalIndex
    doc_vix: VectorIndex
    sent_vix: VectorIndex
    atlas: MergedAtlas
    all_members: dict[str, list[str]]
    llm: object = field(default_factory=StubLlm)
    embedder: object = None
    snapshot_id: Optional[str] = None

    def __post_init__(self):
        if self.embedder is None:
            self.embedder = HashEmbedder(self.cfg.embedding_dim)
        self.docs_by_id = {d.doc_id: d for d in self.docs}
        self.sentence_texts = {c.chunk_id: c.text for c in self.chunks}
        self._children = self.atlas.children_map()

    # ----- build ---------------------------------------------------------

    @classmethod
    def build(cls, docs: list[Document], cfg: EngineConfig,
              llm=None, embedder=None) -> "Engine":
        llm = llm or StubLlm()
        embedder = embedder or HashEmbedder(cfg.embedding_dim)
        chunks = []
        for doc in docs:
            for seq, text in enumerate(segment_sentences(doc.body)):
                chunks.append(SentenceChunk(doc_id=doc.doc_id, seq=seq, text=text))
        doc_vecs = embed_documents(docs, embedder)
        sent_vecs = embed_sentences(chunks, embedder)
        for doc, v in zip(docs, doc_vecs):
            doc.embedding = v
        for chunk, v in zip(chunks, sent_vecs):
            chunk.embedding = v
        stats = compute_stats(docs, cfg.interval_days)

        models = []
        for interval, interval_docs in partition_intervals(docs, cfg.interval_days):
            embeddings = [(d.doc_id, d.embedding) for d in interval_docs]
            models.append(cluster_interval(embeddings, cfg, interval))

        docs_by_id = {d.doc_id: d for d in docs}
        doc_embeddings = {d.doc_id: d.embedding for d in docs}
        atlas = merge_models(models, cfg, doc_embeddings, docs_by_id, llm)
        if cfg.reassign_outliers:
            _reassign_outliers(atlas, doc_embeddings)
        parents, parent_members = build_hierarchy(
            atlas.leaf_topics(), cfg.hierarchy_thresholds, atlas.members,
            docs_by_id, llm, cfg.top_n_keywords)
        atlas.topics.extend(parents)
        all_members = dict(atlas.members)
        all_members.update(parent_members)

        for doc in docs:
            doc.topic_id = atlas.doc_assignments.get(doc.doc_id)
        doc_matrix = np.stack([d.embedding for d in docs]).astype(np.float64)
        layout_atlas(atlas, [d.doc_id for d in docs], doc_matrix, cfg, all_members)
        for doc in docs:
            doc.coords = atlas.doc_coords[doc.doc_id]

        lexical = build_lexical(docs)
        doc_vix = build_vector_index(
            [(d.doc_id, d.embedding, d.doc_id, None) for d in docs], cfg.embedding_dim)
        sent_vix = build_vector_index(
            [(c.chunk_id, c.embedding, c.doc_id, c.seq) for c in chunks], cfg.embedding_dim)
        return cls(cfg=cfg, docs=docs, chunks=chunks, stats=stats, lexical=lexical,
                   doc_vix=doc_vix, sent_vix=sent_vix, atlas=atlas,
                   all_members=all_members, llm=llm, embedder=embedder)

    # ----- queries -------------------------------------------------------

    def allowed_ids(self, flt: Filter) -> set[str]:
        return apply_filter(self.docs, flt, topic_children=self._children)

    def search(self, query: str, mode: str = "lexical", field_name: str = "body",
               flt: Filter = Filter(), k: int = 10, offset: int = 0) -> list[SearchHit]:
        if mode not in ("lexical", "semantic"):
            raise InvalidArgument(f"unknown search mode {mode!r}")
        if mode == "semantic" and field_name != "body":
            raise InvalidArgument("semantic search supports only the body field")
        if not query.strip():
            raise InvalidArgument("query must be non-empty")
        allowed = self.allowed_ids(flt)
        need = k + offset
        if mode == "lexical":
            hits = bm25_search(self.lexical, query, need, field_name=field_name,
                               k1=self.cfg.bm25_k1, b=self.cfg.bm25_b, allowed=allowed)
        else:
            qvec = self.embed_query(query)
            hits = vector_search(self.doc_vix, qvec, need, allowed=allowed)
        return hits[offset:offset + k]

    def embed_query(self, query: str) -> np.ndarray:
        return np.asarray(self.embedder.embed_batch([query])[0], dtype=np.float32)

    def timeline(self, flt: Filter, bucket: str = "day") -> list[tuple[dt.date, int]]:
        return timeline_histogram(self.docs, flt, bucket, topic_children=self._children)

    def map_payload(self, flt: Filter, cap: Optional[int] = None) -> dict:
        cap = cap if cap is not None else self.cfg.map_point_cap
        allowed = self.allowed_ids(flt)
        points = []
        truncated = False
        for doc in self.docs:
            if doc.doc_id not in allowed:
                continue
            if len(points) >= cap:
                truncated = True
                break
            x, y = doc.coords if doc.coords else (0.0, 0.0)
            points.append({"doc_id": doc.doc_id, "x": x, "y": y, "topic_id": doc.topic_id})
        topics = [
            {
                "topic_id": t.topic_id, "label": t.label,
                "x": t.coords[0] if t.coords else 0.0,
                "y": t.coords[1] if t.coords else 0.0,
                "size": t.size, "parent_id": t.parent_id, "level": t.level,
            }
            for t in self.atlas.topics
        ]
        return {"points": points, "topics": topics,
                "truncated": truncated, "total": len(allowed)}

    def qa(self, request: QaRequest) -> Answer:
        if request.mode == "corpus":
            leaves = self.atlas.leaf_topics()
            degraded = False
            if request.topic_ids:
                by_id = {t.topic_id: t for t in self.atlas.topics}
                missing = [t for t in request.topic_ids if t not in by_id]
                if missing:
                    raise InvalidArgument(f"unknown topic ids: {sorted(missing)}")
                topics = [by_id[t] for t in sorted(request.topic_ids)]
            else:
                labels = [(t.topic_id, t.label) for t in leaves]
                routed, degraded = qa_mod.route_corpus_query(self.llm, request.query, labels)
                by_id = {t.topic_id: t for t in leaves}
                topics = [by_id[t] for t in routed]
            return qa_mod.answer_corpus(self.llm, request.query, topics, degraded=degraded)
        allowed = self.allowed_ids(request.filter)
        if not allowed:
            raise EmptyContextError("no document passes the active filter")
        qvec = self.embed_query(request.query)
        contexts = qa_mod.retrieve_sentences(
            self.sent_vix, qvec, allowed, self.sentence_texts, self.cfg.top_k_sentences)
        return qa_mod.answer_document(self.llm, request.query, contexts)

    def doc_metadata(self, doc_id: str) -> dict:
        doc = self.docs_by_id[doc_id]
        return {
            "doc_id": doc.doc_id, "title": doc.title,
            "pub_date": doc.pub_date.isoformat(),
            "journal": doc.journal, "authors": doc.authors,
        }


def _reassign_outliers(atlas: MergedAtlas, doc_embeddings: dict[str, np.ndarray]) -> None:
    leaves = atlas.leaf_topics()
    if not leaves or not atlas.outlier_ids:
        return
    cents = np.stack([t.centroid for t in leaves])
    for doc_id in sorted(atlas.outlier_ids):
        sims = cents @ np.asarray(doc_embeddings[doc_id], dtype=np.float64)
        best = leaves[int(np.argmax(sims))]
        atlas.doc_assignments[doc_id] = best.topic_id
        atlas.members[best.topic_id].append(doc_id)
        best.size += 1
    outlier = [t for t in atlas.topics if t.topic_id == OUTLIER_TOPIC_ID]
    for t in outlier:
        atlas.topics.remove(t)
    atlas.members.pop(OUTLIER_TOPIC_ID, None)
    atlas.outlier_ids = set()
