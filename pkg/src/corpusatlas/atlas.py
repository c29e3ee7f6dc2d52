"""Merging per-interval topic models into one landscape: centroid-based greedy
merge, cosine-threshold hierarchy, and 2D map layout."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .clustering import IntervalModel
from .config import EngineConfig
from .errors import InvalidArgument
from .keywords import ctfidf_keywords
from .llm import generate_label
from .model import Document, OUTLIER_TOPIC_ID, Topic
from .projection import project_apply, project_fit, refine_layout
from .vectors import normalize


@dataclass
class MergedAtlas:
    topics: list[Topic] = field(default_factory=list)
    members: dict[str, list[str]] = field(default_factory=dict)  # leaf topic -> doc ids
    doc_assignments: dict[str, str] = field(default_factory=dict)
    doc_coords: dict[str, tuple[float, float]] = field(default_factory=dict)
    topic_coords: dict[str, tuple[float, float]] = field(default_factory=dict)
    merge_log: list[dict] = field(default_factory=list)
    outlier_ids: set[str] = field(default_factory=set)

    def topic_by_id(self, tid: str) -> Topic:
        for t in self.topics:
            if t.topic_id == tid:
                return t
        raise KeyError(tid)

    def children_map(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for t in self.topics:
            if t.parent_id is not None:
                out.setdefault(t.parent_id, []).append(t.topic_id)
        return out

    def leaf_topics(self) -> list[Topic]:
        return [t for t in self.topics if t.level == 0 and t.topic_id != OUTLIER_TOPIC_ID]


@dataclass
class _PoolTopic:
    topic_id: str
    vec_sum: np.ndarray
    member_ids: list[str]
    source_intervals: set[str]

    @property
    def centroid(self) -> np.ndarray:
        return normalize(self.vec_sum)


def merge_models(
    models: list[IntervalModel],
    cfg: EngineConfig,
    doc_embeddings: dict[str, np.ndarray],
    docs_by_id: dict[str, Document],
    llm,
) -> MergedAtlas:
    """Greedy chronological merge: each interval topic is absorbed into the most
    similar pool topic when centroid cosine >= merge_threshold, else appended.
    Similarity ties break toward the earliest pool topic."""
    atlas = MergedAtlas()
    if not models:
        return atlas
    pool: list[_PoolTopic] = []
    for model in sorted(models, key=lambda m: m.interval.start):
        iv_id = model.interval.interval_id
        for topic in model.topics:
            member_ids = model.members[topic.topic_id]
            vec_sum = np.sum(
                [np.asarray(doc_embeddings[d], dtype=np.float64) for d in member_ids], axis=0)
            best_idx, best_sim = -1, -2.0
            for i, pt in enumerate(pool):
                sim = float(np.dot(pt.centroid, topic.centroid))
                if sim > best_sim:
                    best_idx, best_sim = i, sim
            if best_idx >= 0 and best_sim >= cfg.merge_threshold:
                target = pool[best_idx]
                target.vec_sum = target.vec_sum + vec_sum
                target.member_ids.extend(member_ids)
                target.source_intervals.add(iv_id)
                atlas.merge_log.append({
                    "interval_topic_id": topic.topic_id,
                    "merged_topic_id": target.topic_id,
                    "similarity": best_sim,
                    "action": "absorb",
                })
            else:
                new = _PoolTopic(
                    topic_id=f"t{len(pool):04d}",
                    vec_sum=vec_sum,
                    member_ids=list(member_ids),
                    source_intervals={iv_id},
                )
                pool.append(new)
                atlas.merge_log.append({
                    "interval_topic_id": topic.topic_id,
                    "merged_topic_id": new.topic_id,
                    "similarity": best_sim if best_idx >= 0 else None,
                    "action": "new",
                })
        atlas.outlier_ids.update(model.outlier_ids)

    all_cluster_docs = [[docs_by_id[d] for d in pt.member_ids] for pt in pool]
    for pt, cluster_docs in zip(pool, all_cluster_docs):
        kw = ctfidf_keywords(cluster_docs, all_cluster_docs, cfg.top_n_keywords)
        label, description = generate_label(llm, kw) if kw else ("(unlabeled)", "")
        atlas.topics.append(Topic(
            topic_id=pt.topic_id, centroid=pt.centroid, keywords=kw,
            label=label, description=description, size=len(pt.member_ids),
            level=0, source_intervals=set(pt.source_intervals),
        ))
        atlas.members[pt.topic_id] = list(pt.member_ids)
        for d in pt.member_ids:
            atlas.doc_assignments[d] = pt.topic_id

    if atlas.outlier_ids:
        atlas.topics.append(Topic(
            topic_id=OUTLIER_TOPIC_ID, centroid=None, keywords=[],
            label="Outliers", description="Documents left unassigned by density clustering.",
            size=len(atlas.outlier_ids), level=0,
            source_intervals={m.interval.interval_id for m in models if m.outlier_ids},
        ))
        atlas.members[OUTLIER_TOPIC_ID] = sorted(atlas.outlier_ids)
        for d in atlas.outlier_ids:
            atlas.doc_assignments[d] = OUTLIER_TOPIC_ID
    return atlas


def build_hierarchy(
    leaves: list[Topic],
    thresholds: tuple[float, ...],
    members: dict[str, list[str]],
    docs_by_id: dict[str, Document],
    llm,
    top_n_keywords: int = 10,
) -> tuple[list[Topic], dict[str, list[str]]]:
    """Agglomerate level by level: at each threshold, nodes whose centroid cosine
    meets it join one parent (single linkage / connected components); singleton
    components are lifted unchanged. Returns (new parent topics, their members)."""
    for a, b in zip(thresholds, thresholds[1:]):
        if a <= b:
            raise InvalidArgument("hierarchy thresholds must be strictly descending")
    parents: list[Topic] = []
    parent_members: dict[str, list[str]] = {}
    current = list(leaves)
    current_members = {t.topic_id: list(members[t.topic_id]) for t in leaves}
    for level, theta in enumerate(thresholds, start=1):
        n = len(current)
        if n == 0:
            break
        comp = list(range(n))

        def find(a: int) -> int:
            while comp[a] != a:
                comp[a] = comp[comp[a]]
                a = comp[a]
            return a

        cents = np.stack([t.centroid for t in current])
        sims = cents @ cents.T
        for i in range(n):
            for j in range(i + 1, n):
                if sims[i, j] >= theta:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        comp[max(ri, rj)] = min(ri, rj)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        next_level: list[Topic] = []
        next_members: dict[str, list[str]] = {}
        new_parents = [idx for _, idx in sorted(groups.items()) if len(idx) > 1]
        all_group_docs = None
        for gi, idx in enumerate(new_parents):
            children = [current[i] for i in idx]
            pid = f"h{level}-{gi:03d}"
            combined: list[str] = []
            for c in children:
                combined.extend(current_members[c.topic_id])
                c.parent_id = pid
            if all_group_docs is None:
                all_group_docs = _level_doc_groups(groups, current, current_members, docs_by_id)
            combined_docs = [docs_by_id[d] for d in combined]
            kw = ctfidf_keywords(combined_docs, all_group_docs, top_n_keywords)
            label, description = generate_label(llm, kw) if kw else ("(unlabeled)", "")
            vec = np.sum([c.size * c.centroid for c in children], axis=0)
            parent = Topic(
                topic_id=pid, centroid=normalize(vec), keywords=kw, label=label,
                description=description, size=sum(c.size for c in children), level=level,
                source_intervals=set().union(*(c.source_intervals for c in children)),
            )
            parents.append(parent)
            parent_members[pid] = combined
            next_level.append(parent)
            next_members[pid] = combined
        for _, idx in sorted(groups.items()):
            if len(idx) == 1:  # lifted unchanged
                t = current[idx[0]]
                next_level.append(t)
                next_members[t.topic_id] = current_members[t.topic_id]
        current = next_level
        current_members = next_members
    return parents, parent_members


def _level_doc_groups(groups, current, current_members, docs_by_id):
    out = []
    for _, idx in sorted(groups.items()):
        docs: list[Document] = []
        for i in idx:
            docs.extend(docs_by_id[d] for d in current_members[current[i].topic_id])
        out.append(docs)
    return out


def layout_atlas(
    atlas: MergedAtlas,
    doc_ids: list[str],
    doc_matrix: np.ndarray,
    cfg: EngineConfig,
    all_members: dict[str, list[str]],
) -> None:
    """Project all document embeddings to 2D and place each topic at the
    size-weighted mean of its member documents' coordinates."""
    transform = project_fit(doc_matrix, 2, seed=cfg.rng_seed)
    coords = project_apply(transform, doc_matrix)
    if cfg.refine_layout:
        coords = refine_layout(coords, seed=cfg.rng_seed)
    atlas.doc_coords = {d: (float(x), float(y)) for d, (x, y) in zip(doc_ids, coords)}
    for topic in atlas.topics:
        member_docs = all_members.get(topic.topic_id, [])
        if member_docs:
            pts = np.array([atlas.doc_coords[d] for d in member_docs])
            topic.coords = (float(pts[:, 0].mean()), float(pts[:, 1].mean()))
        else:
            topic.coords = (0.0, 0.0)
        atlas.topic_coords[topic.topic_id] = topic.coords
