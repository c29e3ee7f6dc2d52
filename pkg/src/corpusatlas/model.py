"""Shared domain types. Everything here is immutable-by-convention after construction."""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgument

OUTLIER_TOPIC_ID = "outlier"


@dataclass
class Document:
    doc_id: str
    title: str
    body: str
    pub_date: dt.date
    journal: str = ""
    authors: list[str] = field(default_factory=list)
    embedding: Optional[np.ndarray] = None
    topic_id: Optional[str] = None
    coords: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if not self.doc_id:
            raise InvalidArgument("doc_id must be non-empty")
        if not isinstance(self.pub_date, dt.date):
            raise InvalidArgument("pub_date must be a date")


@dataclass
class SentenceChunk:
    doc_id: str
    seq: int
    text: str
    embedding: Optional[np.ndarray] = None

    @property
    def chunk_id(self) -> str:
        return f"{self.doc_id}#{self.seq:05d}"


@dataclass(frozen=True)
class TimeInterval:
    start: dt.date  # inclusive
    end: dt.date    # exclusive

    def __post_init__(self):
        if self.start >= self.end:
            raise InvalidArgument("interval start must precede end")

    def contains(self, d: dt.date) -> bool:
        return self.start <= d < self.end

    @property
    def interval_id(self) -> str:
        return self.start.isoformat()


@dataclass
class Topic:
    topic_id: str
    centroid: Optional[np.ndarray]
    keywords: list[tuple[str, float]]
    label: str
    description: str
    size: int
    parent_id: Optional[str] = None
    level: int = 0
    coords: Optional[tuple[float, float]] = None
    source_intervals: set[str] = field(default_factory=set)


@dataclass(frozen=True)
class Filter:
    date_from: Optional[dt.date] = None
    date_to: Optional[dt.date] = None
    topic_ids: Optional[frozenset[str]] = None
    title_keyword: Optional[str] = None
    query: Optional[tuple[str, str]] = None  # (text, "lexical" | "semantic")

    def __post_init__(self):
        if self.date_from and self.date_to and self.date_from > self.date_to:
            raise InvalidArgument("date_from must not exceed date_to")
        if self.query is not None and self.query[1] not in ("lexical", "semantic"):
            raise InvalidArgument(f"unknown query mode {self.query[1]!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "Filter":
        if not isinstance(data, dict):
            raise InvalidArgument("filter must be a JSON object")
        known = {"date_from", "date_to", "topic_ids", "title_keyword", "query"}
        unknown = set(data) - known
        if unknown:
            raise InvalidArgument(f"unknown filter keys: {sorted(unknown)}")
        def parse_date(key):
            v = data.get(key)
            if v is None:
                return None
            try:
                return dt.date.fromisoformat(v)
            except (TypeError, ValueError) as exc:
                raise InvalidArgument(f"bad {key}: {v!r}") from exc
        topic_ids = data.get("topic_ids")
        query = data.get("query")
        if query is not None:
            if not isinstance(query, dict) or "text" not in query:
                raise InvalidArgument("filter query must be {text, mode}")
            query = (query["text"], query.get("mode", "lexical"))
        return cls(
            date_from=parse_date("date_from"),
            date_to=parse_date("date_to"),
            topic_ids=frozenset(topic_ids) if topic_ids is not None else None,
            title_keyword=data.get("title_keyword"),
            query=query,
        )

    def to_dict(self) -> dict:
        out: dict = {}
        if self.date_from:
            out["date_from"] = self.date_from.isoformat()
        if self.date_to:
            out["date_to"] = self.date_to.isoformat()
        if self.topic_ids is not None:
            out["topic_ids"] = sorted(self.topic_ids)
        if self.title_keyword is not None:
            out["title_keyword"] = self.title_keyword
        if self.query is not None:
            out["query"] = {"text": self.query[0], "mode": self.query[1]}
        return out


EMPTY_FILTER = Filter()


@dataclass(frozen=True)
class SearchHit:
    doc_id: str
    score: float
    rank: int
    matched_field: str = "body"


@dataclass(frozen=True)
class CorpusStats:
    doc_count: int
    sentence_count: int
    min_date: dt.date
    max_date: dt.date
    interval_count: int


@dataclass(frozen=True)
class QaRequest:
    mode: str  # "corpus" | "document"
    query: str
    filter: Filter = EMPTY_FILTER
    topic_ids: Optional[frozenset[str]] = None

    def __post_init__(self):
        if self.mode not in ("corpus", "document"):
            raise InvalidArgument(f"unknown QA mode {self.mode!r}")
        if not self.query.strip():
            raise InvalidArgument("query must be non-empty")


@dataclass(frozen=True)
class Answer:
    text: str
    mode: str
    citations: tuple[str, ...]
    contexts: tuple[tuple[str, str, float], ...]  # (source id, text, score)
    degraded: bool = False

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "mode": self.mode,
            "citations": list(self.citations),
            "contexts": [
                {"source": s, "text": t, "score": sc} for s, t, sc in self.contexts
            ],
            "degraded": self.degraded,
        }
