"""Engine configuration: every tunable constant lives here, nothing is hard-coded downstream."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import InvalidArgument


@dataclass(frozen=True)
class EngineConfig:
    embedding_dim: int = 768
    interval_days: int = 15
    bm25_k1: float = 1.2
    bm25_b: float = 0.75
    min_cluster_size: int = 10
    min_samples: int = 5
    reduce_dim: int = 5
    merge_threshold: float = 0.80
    hierarchy_thresholds: tuple[float, ...] = (0.80, 0.60)
    top_n_keywords: int = 10
    top_k_sentences: int = 10
    rng_seed: int = 42
    # service-level knobs
    map_point_cap: int = 50_000
    cors_origin: str = "*"
    reassign_outliers: bool = False
    refine_layout: bool = False

    def __post_init__(self):
        if not (self.embedding_dim >= self.reduce_dim >= 2):
            raise InvalidArgument("need embedding_dim >= reduce_dim >= 2")
        if not (0.0 < self.merge_threshold <= 1.0):
            raise InvalidArgument("merge_threshold must be in (0, 1]")
        for t in self.hierarchy_thresholds:
            if not (-1.0 <= t <= 1.0):
                raise InvalidArgument(f"hierarchy threshold {t} outside [-1, 1]")
        if self.top_k_sentences < 1:
            raise InvalidArgument("top_k_sentences must be >= 1")
        if self.interval_days < 1:
            raise InvalidArgument("interval_days must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgument(f"unknown config keys: {sorted(unknown)}")
        if "hierarchy_thresholds" in data:
            data = dict(data)
            data["hierarchy_thresholds"] = tuple(data["hierarchy_thresholds"])
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "EngineConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out
