"""Small vector helpers used across the engine.

Vectors are plain numpy arrays; the engine keeps stored embeddings in
float32 so in-memory state and the on-disk snapshot agree bit for bit.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgument


def normalize(v: np.ndarray) -> np.ndarray:
    """Return v scaled to unit L2 norm. Raises on the zero vector."""
    v = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise InvalidArgument("cannot normalize the zero vector")
    return v / n


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidArgument(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise InvalidArgument("cosine similarity undefined for the zero vector")
    return float(np.dot(a, b) / (na * nb))


def check_unit(v: np.ndarray, tol: float = 1e-6) -> None:
    n = float(np.linalg.norm(np.asarray(v, dtype=np.float64)))
    if abs(n - 1.0) > tol:
        raise InvalidArgument(f"vector is not unit norm (|v| = {n})")
    if not np.all(np.isfinite(v)):
        raise InvalidArgument("vector contains NaN or Inf")
