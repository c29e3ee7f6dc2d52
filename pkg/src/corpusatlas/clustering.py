"""Density-based clustering: core distances, mutual reachability, MST,
single-linkage condensation, and excess-of-mass cluster selection."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import EngineConfig
from .errors import InvalidArgument
from .model import TimeInterval, Topic
from .projection import ProjectionTransform, project_apply, project_fit
from .vectors import normalize

_W_EPS = 1e-12  # distance floor so lambda = 1/distance stays finite


@dataclass
class CondensedNode:
    node_id: int
    parent: Optional[int]
    lambda_birth: float
    lambda_death: float = 0.0
    child_count: int = 0
    stability: float = 0.0
    children: list[int] = field(default_factory=list)
    fallouts: list[tuple[int, float]] = field(default_factory=list)  # (point, lambda at exit)
    split_lambda: Optional[float] = None
    split_size: int = 0


@dataclass
class IntervalModel:
    interval: TimeInterval
    topics: list[Topic]
    members: dict[str, list[str]]       # topic_id -> member doc_ids
    outlier_ids: set[str]
    reducer: Optional[ProjectionTransform]
    degenerate: bool = False


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    x = np.asarray(points, dtype=np.float64)
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.maximum(d2, 0.0, out=d2)
    return np.sqrt(d2)


def core_distances(points: np.ndarray, min_samples: int) -> np.ndarray:
    """Distance from each point to its min_samples-th nearest neighbor (self excluded)."""
    x = np.asarray(points, dtype=np.float64)
    n = x.shape[0]
    if n <= min_samples:
        raise InvalidArgument(f"need more than {min_samples} points, got {n}")
    dists = pairwise_distances(x)
    sorted_d = np.sort(dists, axis=1)
    return sorted_d[:, min_samples]  # column 0 is the self-distance


def mutual_reachability(dists: np.ndarray, cores: np.ndarray) -> np.ndarray:
    """d_mreach(a, b) = max(core(a), core(b), dist(a, b)); diagonal = core(a)."""
    m = np.maximum(dists, np.maximum(cores[:, None], cores[None, :]))
    np.fill_diagonal(m, cores)
    return m


def prim_mst(weights: np.ndarray) -> list[tuple[float, int, int]]:
    """Minimum spanning tree over a dense symmetric weight matrix."""
    n = weights.shape[0]
    in_tree = np.zeros(n, dtype=bool)
    best = np.full(n, np.inf)
    best_edge = np.full(n, -1, dtype=np.int64)
    in_tree[0] = True
    best = weights[0].copy()
    best_edge[:] = 0
    best[0] = np.inf
    edges = []
    for _ in range(n - 1):
        v = int(np.argmin(best))
        u = int(best_edge[v])
        edges.append((float(best[v]), min(u, v), max(u, v)))
        in_tree[v] = True
        best[v] = np.inf
        improve = weights[v] < best
        improve &= ~in_tree
        best[improve] = weights[v][improve]
        best_edge[improve] = v
    return edges


def single_linkage(edges: list[tuple[float, int, int]], n: int):
    """Build the single-linkage merge tree from MST edges.

    Returns (left, right, weight, size) arrays indexed by merge step; merge t
    creates node n + t. Edge ties break by (weight, u, v) for determinism.
    """
    order = sorted(edges)
    parent = list(range(2 * n - 1))
    root_of = list(range(n))  # set representative -> current tree node

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    left = np.empty(n - 1, dtype=np.int64)
    right = np.empty(n - 1, dtype=np.int64)
    weight = np.empty(n - 1, dtype=np.float64)
    size = np.empty(2 * n - 1, dtype=np.int64)
    size[:n] = 1
    for t, (w, u, v) in enumerate(order):
        ru, rv = find(u), find(v)
        node = n + t
        left[t] = root_of[ru]
        right[t] = root_of[rv]
        weight[t] = w
        size[node] = size[root_of[ru]] + size[root_of[rv]]
        parent[ru] = rv
        root_of[rv] = node
    return left, right, weight, size


def _leaves_under(node: int, n: int, left, right) -> list[int]:
    out = []
    stack = [node]
    while stack:
        m = stack.pop()
        if m < n:
            out.append(m)
        else:
            stack.append(int(left[m - n]))
            stack.append(int(right[m - n]))
    return out


def condense_tree(left, right, weight, size, n: int, min_cluster_size: int) -> list[CondensedNode]:
    """Condense the single-linkage tree: splits where a side has fewer than
    min_cluster_size points become fallouts from the parent cluster."""
    root = CondensedNode(node_id=0, parent=None, lambda_birth=0.0)
    clusters = [root]
    stack = [(2 * n - 2, 0)]
    while stack:
        node, cid = stack.pop()
        cluster = clusters[cid]
        while True:
            if node < n:
                # a cluster can only shrink to one leaf when min_cluster_size is 1
                cluster.fallouts.append((node, 1.0 / _W_EPS))
                break
            l, r = int(left[node - n]), int(right[node - n])
            lam = 1.0 / max(float(weight[node - n]), _W_EPS)
            sl, sr = int(size[l]), int(size[r])
            if sl >= min_cluster_size and sr >= min_cluster_size:
                cluster.split_lambda = lam
                cluster.split_size = sl + sr
                for child_node in (l, r):
                    child = CondensedNode(node_id=len(clusters), parent=cid, lambda_birth=lam)
                    clusters.append(child)
                    cluster.children.append(child.node_id)
                    stack.append((child_node, child.node_id))
                break
            if sl >= min_cluster_size:
                for p in _leaves_under(r, n, left, right):
                    cluster.fallouts.append((p, lam))
                node = l
            elif sr >= min_cluster_size:
                for p in _leaves_under(l, n, left, right):
                    cluster.fallouts.append((p, lam))
                node = r
            else:
                for p in _leaves_under(node, n, left, right):
                    cluster.fallouts.append((p, lam))
                break
    for c in clusters:
        exit_lams = [lam for _, lam in c.fallouts]
        if c.split_lambda is not None:
            exit_lams.append(c.split_lambda)
        c.lambda_death = max(exit_lams) if exit_lams else c.lambda_birth
        c.child_count = len(c.children)
        c.stability = sum(lam - c.lambda_birth for _, lam in c.fallouts)
        if c.split_lambda is not None:
            c.stability += c.split_size * (c.split_lambda - c.lambda_birth)
    return clusters


def select_clusters_eom(clusters: list[CondensedNode]) -> list[int]:
    """Excess-of-mass selection: a parent is chosen over its children iff its
    stability is at least the sum of theirs. The root is never selected."""
    val: dict[int, float] = {}
    sel: dict[int, list[int]] = {}
    for c in reversed(clusters):  # children have larger ids than parents
        cid = c.node_id
        if not c.children:
            val[cid] = c.stability
            sel[cid] = [cid]
        else:
            child_sum = sum(val[ch] for ch in c.children)
            if c.stability >= child_sum and c.parent is not None:
                val[cid] = c.stability
                sel[cid] = [cid]
            else:
                val[cid] = child_sum
                sel[cid] = [x for ch in c.children for x in sel[ch]]
    root = clusters[0]
    return [] if not root.children else sel[0]


def cluster_members(clusters: list[CondensedNode], cid: int) -> list[int]:
    """All points that fell out of cluster cid or any condensed descendant."""
    out = []
    stack = [cid]
    while stack:
        c = clusters[stack.pop()]
        out.extend(p for p, _ in c.fallouts)
        stack.extend(c.children)
    return sorted(out)


def cluster_points(points: np.ndarray, min_cluster_size: int, min_samples: int):
    """Full pipeline on reduced points. Returns (labels, condensed tree); label -1
    marks outliers. An empty selection yields all -1."""
    n = points.shape[0]
    cores = core_distances(points, min_samples)
    dists = pairwise_distances(points)
    mreach = mutual_reachability(dists, cores)
    if float(mreach.max()) <= _W_EPS:
        return np.zeros(n, dtype=np.int64), []  # zero diameter: one cluster
    edges = prim_mst(mreach)
    left, right, weight, size = single_linkage(edges, n)
    clusters = condense_tree(left, right, weight, size, n, min_cluster_size)
    selected = select_clusters_eom(clusters)
    labels = np.full(n, -1, dtype=np.int64)
    member_sets = [(cid, cluster_members(clusters, cid)) for cid in selected]
    member_sets.sort(key=lambda x: x[1][0])  # deterministic: order by smallest point index
    for idx, (_cid, pts) in enumerate(member_sets):
        labels[pts] = idx
    return labels, clusters


def cluster_interval(
    embeddings: list[tuple[str, np.ndarray]],
    cfg: EngineConfig,
    interval: TimeInterval,
) -> IntervalModel:
    """Cluster one interval's documents: reduce to cfg.reduce_dim dims, run the
    density pipeline, and form topics with full-dimensional centroids."""
    doc_ids = [d for d, _ in embeddings]
    full = np.stack([np.asarray(v, dtype=np.float64) for _, v in embeddings]) if embeddings \
        else np.zeros((0, cfg.embedding_dim))
    n = len(doc_ids)
    iv_id = interval.interval_id
    if n < cfg.min_cluster_size + cfg.min_samples:
        return _degenerate_model(interval, doc_ids, full)
    reducer = project_fit(full, min(cfg.reduce_dim, n), seed=cfg.rng_seed)
    reduced = project_apply(reducer, full)
    labels, _tree = cluster_points(reduced, cfg.min_cluster_size, cfg.min_samples)
    n_clusters = int(labels.max()) + 1 if labels.size else 0
    if n_clusters == 0:
        model = _degenerate_model(interval, doc_ids, full)
        model.reducer = reducer
        return model
    topics: list[Topic] = []
    members: dict[str, list[str]] = {}
    for c in range(n_clusters):
        idx = np.nonzero(labels == c)[0]
        tid = f"{iv_id}:c{c}"
        centroid = normalize(full[idx].mean(axis=0))
        topics.append(Topic(
            topic_id=tid, centroid=centroid, keywords=[], label="", description="",
            size=int(idx.size), level=0, source_intervals={iv_id},
        ))
        members[tid] = [doc_ids[i] for i in idx]
    outliers = {doc_ids[i] for i in np.nonzero(labels < 0)[0]}
    return IntervalModel(interval=interval, topics=topics, members=members,
                         outlier_ids=outliers, reducer=reducer)


def _degenerate_model(interval: TimeInterval, doc_ids: list[str], full: np.ndarray) -> IntervalModel:
    iv_id = interval.interval_id
    tid = f"{iv_id}:c0"
    centroid = normalize(full.mean(axis=0)) if len(doc_ids) else None
    topic = Topic(topic_id=tid, centroid=centroid, keywords=[], label="", description="",
                  size=len(doc_ids), level=0, source_intervals={iv_id})
    return IntervalModel(interval=interval, topics=[topic], members={tid: list(doc_ids)},
                         outlier_ids=set(), reducer=None, degenerate=True)
