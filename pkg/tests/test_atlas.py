import datetime as dt

import numpy as np
import pytest

from corpusatlas.atlas import build_hierarchy, layout_atlas, merge_models
from corpusatlas.clustering import cluster_interval
from corpusatlas.config import EngineConfig
from corpusatlas.errors import InvalidArgument
from corpusatlas.llm import StubLlm
from corpusatlas.model import Document, TimeInterval, Topic
from corpusatlas.vectors import normalize

from conftest import sphere_blobs

IV1 = TimeInterval(dt.date(2023, 1, 1), dt.date(2023, 1, 16))
IV2 = TimeInterval(dt.date(2023, 1, 16), dt.date(2023, 1, 31))

CFG = EngineConfig(embedding_dim=8, reduce_dim=5, merge_threshold=0.8)


def make_docs(points, prefix, interval, vocab="alpha beta gamma"):
    docs = {}
    for i, _ in enumerate(points):
        did = f"{prefix}{i:04d}"
        docs[did] = Document(doc_id=did, title=f"{vocab.split()[i % 3]} {i}",
                             body=f"{vocab} sentence {i}.", pub_date=interval.start)
    return docs


def interval_model(points, prefix, interval, cfg=CFG):
    return cluster_interval([(f"{prefix}{i:04d}", p) for i, p in enumerate(points)],
                            cfg, interval)


class TestMergeModels:
    def test_identical_centroids_merge(self):
        pts, _, _ = sphere_blobs(1, 30, 8, 0.02, seed=1)
        m1 = interval_model(pts, "a", IV1)
        m2 = interval_model(pts, "b", IV2)
        docs = make_docs(pts, "a", IV1) | make_docs(pts, "b", IV2)
        emb = {f"{p}{i:04d}": pts[i] for p in "ab" for i in range(len(pts))}
        atlas = merge_models([m1, m2], CFG, emb, docs, StubLlm())
        leaves = atlas.leaf_topics()
        assert len(leaves) == 1
        assert leaves[0].source_intervals == {IV1.interval_id, IV2.interval_id}
        assert leaves[0].size == 60

    def test_orthogonal_centroids_stay_separate(self):
        e0 = np.zeros(8); e0[0] = 1.0
        e1 = np.zeros(8); e1[1] = 1.0
        rng = np.random.default_rng(2)
        pts1 = np.stack([normalize(e0 + rng.normal(scale=0.01, size=8)) for _ in range(30)])
        pts2 = np.stack([normalize(e1 + rng.normal(scale=0.01, size=8)) for _ in range(30)])
        m1 = interval_model(pts1, "a", IV1)
        m2 = interval_model(pts2, "b", IV2)
        docs = make_docs(pts1, "a", IV1) | make_docs(pts2, "b", IV2)
        emb = {f"a{i:04d}": pts1[i] for i in range(30)}
        emb |= {f"b{i:04d}": pts2[i] for i in range(30)}
        atlas = merge_models([m1, m2], CFG, emb, docs, StubLlm())
        assert len(atlas.leaf_topics()) == 2

    def test_two_interval_blobs_deduplicate(self):
        # same generator in both intervals: merged topic count equals one interval's
        pts, _, _ = sphere_blobs(3, 80, 8, 0.03, seed=3)
        m1 = interval_model(pts, "a", IV1)
        m2 = interval_model(pts, "b", IV2)
        single_count = len(m1.topics)
        docs = make_docs(pts, "a", IV1) | make_docs(pts, "b", IV2)
        emb = {f"{p}{i:04d}": pts[i] for p in "ab" for i in range(len(pts))}
        atlas = merge_models([m1, m2], CFG, emb, docs, StubLlm())
        assert len(atlas.leaf_topics()) == single_count

    def test_empty_models(self):
        atlas = merge_models([], CFG, {}, {}, StubLlm())
        assert atlas.topics == []
        assert atlas.doc_assignments == {}

    def test_merge_conservation_and_log(self):
        pts, _, _ = sphere_blobs(3, 60, 8, 0.04, seed=4)
        m1 = interval_model(pts, "a", IV1)
        m2 = interval_model(pts, "b", IV2)
        docs = make_docs(pts, "a", IV1) | make_docs(pts, "b", IV2)
        emb = {f"{p}{i:04d}": pts[i] for p in "ab" for i in range(len(pts))}
        atlas = merge_models([m1, m2], CFG, emb, docs, StubLlm())
        interval_total = sum(t.size for t in m1.topics) + sum(t.size for t in m2.topics)
        merged_total = sum(t.size for t in atlas.leaf_topics())
        assert merged_total == interval_total
        # every interval topic produced exactly one log entry
        assert len(atlas.merge_log) == len(m1.topics) + len(m2.topics)
        for entry in atlas.merge_log:
            assert entry["action"] in ("absorb", "new")
        # every assignment target exists
        topic_ids = {t.topic_id for t in atlas.topics}
        assert set(atlas.doc_assignments.values()) <= topic_ids

    def test_centroids_unit(self):
        pts, _, _ = sphere_blobs(2, 50, 8, 0.03, seed=5)
        m1 = interval_model(pts, "a", IV1)
        docs = make_docs(pts, "a", IV1)
        emb = {f"a{i:04d}": pts[i] for i in range(len(pts))}
        atlas = merge_models([m1], CFG, emb, docs, StubLlm())
        for t in atlas.leaf_topics():
            assert np.linalg.norm(t.centroid) == pytest.approx(1.0, abs=1e-6)


def leaf(topic_id, centroid, size=10):
    return Topic(topic_id=topic_id, centroid=np.asarray(centroid, dtype=float),
                 keywords=[("kw", 1.0)], label=topic_id, description="", size=size,
                 level=0, source_intervals={"2023-01-01"})


def leaf_docs(leaves):
    docs = {}
    members = {}
    for t in leaves:
        ids = [f"{t.topic_id}-doc{j}" for j in range(2)]
        members[t.topic_id] = ids
        for d in ids:
            docs[d] = Document(doc_id=d, title=t.topic_id, body=f"text {t.topic_id}.",
                               pub_date=dt.date(2023, 1, 1))
    return docs, members


class TestHierarchy:
    def test_close_pair_gets_parent(self):
        a = normalize(np.array([1.0, 0.1, 0, 0]))
        b = normalize(np.array([1.0, -0.1, 0, 0]))
        leaves = [leaf("t0", a), leaf("t1", b)]
        docs, members = leaf_docs(leaves)
        parents, pmembers = build_hierarchy(leaves, (0.8, 0.6), members, docs, StubLlm())
        assert len(parents) == 1
        assert parents[0].level == 1
        assert leaves[0].parent_id == parents[0].topic_id
        assert leaves[1].parent_id == parents[0].topic_id
        assert sorted(pmembers[parents[0].topic_id]) == sorted(
            members["t0"] + members["t1"])

    def test_orthogonal_leaves_no_parent(self):
        leaves = [leaf("t0", [1, 0, 0, 0]), leaf("t1", [0, 1, 0, 0])]
        docs, members = leaf_docs(leaves)
        parents, _ = build_hierarchy(leaves, (0.8, 0.6), members, docs, StubLlm())
        assert parents == []
        assert leaves[0].parent_id is None

    def test_non_descending_thresholds_rejected(self):
        leaves = [leaf("t0", [1, 0]), leaf("t1", [0, 1])]
        docs, members = leaf_docs(leaves)
        with pytest.raises(InvalidArgument):
            build_hierarchy(leaves, (0.6, 0.8), members, docs, StubLlm())

    def test_components_match_brute_force(self):
        rng = np.random.default_rng(6)
        for trial in range(50):
            n = int(rng.integers(3, 11))
            cents = rng.normal(size=(n, 6))
            cents /= np.linalg.norm(cents, axis=1, keepdims=True)
            leaves = [leaf(f"t{i}", cents[i]) for i in range(n)]
            docs, members = leaf_docs(leaves)
            thresholds = (0.8, 0.4)
            parents, _ = build_hierarchy(leaves, thresholds, members, docs, StubLlm())
            # brute-force connected components of the thresholded similarity graph
            current = [[i] for i in range(n)]
            node_ids = [[leaves[i].topic_id] for i in range(n)]
            level_nodes = {0: [{leaves[i].topic_id} for i in range(n)]}
            cur_cents = [cents[i] for i in range(n)]
            cur_sizes = [leaves[i].size for i in range(n)]
            cur_sets = [{leaves[i].topic_id} for i in range(n)]
            for li, theta in enumerate(thresholds, start=1):
                m = len(cur_cents)
                adj = [[float(np.dot(cur_cents[i], cur_cents[j])) >= theta
                        for j in range(m)] for i in range(m)]
                seen = [False] * m
                comps = []
                for i in range(m):
                    if seen[i]:
                        continue
                    stack, comp = [i], []
                    seen[i] = True
                    while stack:
                        u = stack.pop()
                        comp.append(u)
                        for v in range(m):
                            if adj[u][v] and not seen[v]:
                                seen[v] = True
                                stack.append(v)
                    comps.append(sorted(comp))
                new_cents, new_sizes, new_sets = [], [], []
                for comp in comps:
                    vec = np.sum([cur_sizes[i] * np.asarray(cur_cents[i]) for i in comp],
                                 axis=0)
                    new_cents.append(vec / np.linalg.norm(vec))
                    new_sizes.append(sum(cur_sizes[i] for i in comp))
                    new_sets.append(set().union(*(cur_sets[i] for i in comp)))
                level_nodes[li] = new_sets
                cur_cents, cur_sizes, cur_sets = new_cents, new_sizes, new_sets
            # engine's parents at each level must equal multi-leaf brute-force components
            for li in (1, 2):
                expected = {frozenset(s) for s in level_nodes[li] if len(
                    [x for x in level_nodes[li - 1] if x <= s]) > 1}
                got = set()
                for p in parents:
                    if p.level == li:
                        got.add(frozenset(_leaf_set(p, leaves, parents)))
                assert got == expected, f"trial {trial} level {li}"
            for p in parents:
                assert np.linalg.norm(p.centroid) == pytest.approx(1.0, abs=1e-6)


def _leaf_set(parent, leaves, parents):
    all_topics = {t.topic_id: t for t in leaves + parents}
    out = set()
    children = {}
    for t in all_topics.values():
        if t.parent_id:
            children.setdefault(t.parent_id, []).append(t.topic_id)
    stack = [parent.topic_id]
    while stack:
        tid = stack.pop()
        kids = children.get(tid, [])
        if not kids and all_topics[tid].level == 0:
            out.add(tid)
        stack.extend(kids)
    return out


class TestLayout:
    def test_single_member_topic_coord(self):
        pts, _, _ = sphere_blobs(2, 40, 8, 0.03, seed=8)
        m1 = interval_model(pts, "a", IV1)
        docs = make_docs(pts, "a", IV1)
        emb = {f"a{i:04d}": pts[i] for i in range(len(pts))}
        atlas = merge_models([m1], CFG, emb, docs, StubLlm())
        doc_ids = sorted(docs)
        matrix = np.stack([emb[d] for d in doc_ids])
        layout_atlas(atlas, doc_ids, matrix, CFG, atlas.members)
        for t in atlas.leaf_topics():
            member_coords = np.array([atlas.doc_coords[d] for d in atlas.members[t.topic_id]])
            np.testing.assert_allclose(t.coords, member_coords.mean(axis=0), atol=1e-9)

    def test_blob_separation_in_2d(self):
        pts, labels, _ = sphere_blobs(2, 60, 8, 0.02, seed=9)
        m1 = interval_model(pts, "a", IV1)
        docs = make_docs(pts, "a", IV1)
        emb = {f"a{i:04d}": pts[i] for i in range(len(pts))}
        atlas = merge_models([m1], CFG, emb, docs, StubLlm())
        doc_ids = sorted(docs)
        matrix = np.stack([emb[d] for d in doc_ids])
        layout_atlas(atlas, doc_ids, matrix, CFG, atlas.members)
        leaves = atlas.leaf_topics()
        assert len(leaves) == 2
        t0, t1 = leaves
        gap = np.linalg.norm(np.array(t0.coords) - np.array(t1.coords))
        spreads = []
        for t in leaves:
            cs = np.array([atlas.doc_coords[d] for d in atlas.members[t.topic_id]])
            spreads.append(np.linalg.norm(cs - cs.mean(axis=0), axis=1).mean())
        assert gap > max(spreads)

    def test_deterministic(self):
        pts, _, _ = sphere_blobs(2, 40, 8, 0.03, seed=10)
        m1 = interval_model(pts, "a", IV1)
        docs = make_docs(pts, "a", IV1)
        emb = {f"a{i:04d}": pts[i] for i in range(len(pts))}
        doc_ids = sorted(docs)
        matrix = np.stack([emb[d] for d in doc_ids])
        coords = []
        for _ in range(2):
            atlas = merge_models([m1], CFG, emb, docs, StubLlm())
            layout_atlas(atlas, doc_ids, matrix, CFG, atlas.members)
            coords.append(dict(atlas.doc_coords))
        assert coords[0] == coords[1]
