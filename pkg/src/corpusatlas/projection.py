"""Deterministic dimensionality reduction.

PCA with a fixed sign convention is the reproducible baseline; an optional
seeded attraction/repulsion refinement over a k-NN graph can tighten local
structure for visualization and is off by default.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument


@dataclass
class ProjectionTransform:
    mean: np.ndarray          # (d,)
    basis: np.ndarray         # (target_dim, d), rows orthonormal (zero rows pad rank deficiency)
    target_dim: int
    seed: int
    padded_dims: int = 0      # directions zero-padded due to rank deficiency


def project_fit(vectors: np.ndarray, target_dim: int, seed: int = 42) -> ProjectionTransform:
    """Fit mean + top principal directions. Sign convention: the largest-magnitude
    component of each direction is positive, so the fit is reproducible."""
    x = np.asarray(vectors, dtype=np.float64)
    if x.ndim != 2:
        raise InvalidArgument("expected a 2-D array of row vectors")
    n, d = x.shape
    if n < target_dim:
        raise InvalidArgument(f"need at least {target_dim} vectors, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    basis = np.zeros((target_dim, d), dtype=np.float64)
    tol = (s[0] if s.size else 0.0) * 1e-12
    padded = 0
    for i in range(target_dim):
        if i < s.size and s[i] > tol:
            row = vt[i]
            j = int(np.argmax(np.abs(row)))
            if row[j] < 0:
                row = -row
            basis[i] = row
        else:
            padded += 1
    return ProjectionTransform(mean=mean, basis=basis, target_dim=target_dim,
                               seed=seed, padded_dims=padded)


def project_apply(t: ProjectionTransform, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        return (v - t.mean) @ t.basis.T
    return (v - t.mean) @ t.basis.T


def refine_layout(
    coords: np.ndarray,
    *,
    n_iters: int = 200,
    k_neighbors: int = 15,
    seed: int = 42,
    learning_rate: float = 0.05,
) -> np.ndarray:
    """Seeded attraction/repulsion passes over a k-NN graph of the input coords.

    Bit-reproducible for a given seed; purely a visual refinement stage.
    """
    x = np.asarray(coords, dtype=np.float64).copy()
    n = x.shape[0]
    if n < 3:
        return x
    k = min(k_neighbors, n - 1)
    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(d2, np.inf)
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, :k]
    rng = np.random.default_rng(seed)
    for _ in range(n_iters):
        # attraction toward k-NN neighbors of the original layout
        targets = x[neighbors].mean(axis=1)
        x += learning_rate * (targets - x)
        # repulsion from one random other point per node
        others = rng.integers(0, n, size=n)
        delta = x - x[others]
        dist = np.linalg.norm(delta, axis=1, keepdims=True)
        dist[dist < 1e-9] = 1e-9
        x += learning_rate * 0.2 * delta / dist
    return x
