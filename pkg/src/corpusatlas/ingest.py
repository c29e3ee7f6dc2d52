"""Corpus ingestion: JSONL parsing, sentence segmentation, and 15-day interval partitioning."""

from __future__ import annotations

import datetime as dt
import json
import math
import re
from dataclasses import dataclass, field
from typing import IO, Iterable

from .errors import EmptyCorpusError, InvalidArgument
from .model import CorpusStats, Document, TimeInterval

# Tokens before a period that never end a sentence. "et al" is matched as a bigram.
_ABBREVIATIONS = {"Dr", "Mr", "Mrs", "Ms", "Prof", "Fig", "No", "e.g", "i.e", "vs", "approx"}

_SPLIT_RE = re.compile(r"[.!?](?= [A-Z0-9])")
_LAST_WORD_RE = re.compile(r"(\S+)\.$")


@dataclass
class IngestDiagnostics:
    skipped: int = 0
    duplicates: int = 0
    reasons: list[str] = field(default_factory=list)


def segment_sentences(text: str) -> list[str]:
    """Split text into sentences on '.', '!', '?' followed by whitespace and
    an uppercase letter or digit, with an abbreviation/initial guard on periods.

    Rejoining the output with single spaces reproduces the whitespace-normalized input.
    """
    normalized = " ".join(text.split())
    if not normalized:
        return []
    cuts = []
    for m in _SPLIT_RE.finditer(normalized):
        if normalized[m.start()] == "." and _is_abbreviation(normalized, m.start()):
            continue
        cuts.append(m.end())
    sentences = []
    prev = 0
    for cut in cuts:
        sentences.append(normalized[prev:cut])
        prev = cut + 1  # skip the single separating space
    sentences.append(normalized[prev:])
    return [s for s in sentences if s]


def _is_abbreviation(text: str, period_pos: int) -> bool:
    m = _LAST_WORD_RE.search(text[: period_pos + 1])
    if not m:
        return False
    word = m.group(1).lstrip("([\"'")
    if len(word) == 1 and word.isupper():
        return True  # initials like "J."
    if word in _ABBREVIATIONS:
        return True
    if word == "al" and text[: m.start(1)].rstrip().endswith("et"):
        return True
    return False


def parse_corpus(source: Iterable[bytes | str] | IO) -> tuple[list[Document], CorpusStats, IngestDiagnostics]:
    """Parse line-delimited JSON records into validated Documents.

    Malformed lines are skipped and counted; on a duplicate doc_id the last
    occurrence wins and the duplicate is counted.
    """
    diags = IngestDiagnostics()
    by_id: dict[str, Document] = {}
    order: list[str] = []
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8", errors="replace")
        line = raw.strip()
        if not line:
            continue
        doc = _parse_record(line, lineno, diags)
        if doc is None:
            continue
        if doc.doc_id in by_id:
            diags.duplicates += 1
            order.remove(doc.doc_id)
        by_id[doc.doc_id] = doc
        order.append(doc.doc_id)
    if not by_id:
        raise EmptyCorpusError("no valid records in corpus source")
    docs = [by_id[i] for i in order]
    return docs, compute_stats(docs), diags


def _parse_record(line: str, lineno: int, diags: IngestDiagnostics) -> Document | None:
    try:
        rec = json.loads(line)
        doc_id = rec["doc_id"]
        if not isinstance(doc_id, str) or not doc_id:
            raise ValueError("doc_id must be a non-empty string")
        pub_date = dt.date.fromisoformat(rec["pub_date"])
        return Document(
            doc_id=doc_id,
            title=str(rec.get("title", "")),
            body=str(rec["abstract"]),
            pub_date=pub_date,
            journal=str(rec.get("journal", "")),
            authors=[str(a) for a in rec.get("authors", [])],
        )
    except (KeyError, ValueError, TypeError) as exc:
        diags.skipped += 1
        diags.reasons.append(f"line {lineno}: {exc}")
        return None


def compute_stats(docs: list[Document], interval_days: int = 15) -> CorpusStats:
    min_date = min(d.pub_date for d in docs)
    max_date = max(d.pub_date for d in docs)
    span_days = (max_date - min_date).days + 1
    return CorpusStats(
        doc_count=len(docs),
        sentence_count=sum(len(segment_sentences(d.body)) for d in docs),
        min_date=min_date,
        max_date=max_date,
        interval_count=math.ceil(span_days / interval_days),
    )


def partition_intervals(
    docs: list[Document], interval_days: int
) -> list[tuple[TimeInterval, list[Document]]]:
    """Bucket documents into consecutive half-open intervals anchored at the corpus minimum date.

    Intervals with zero documents are omitted.
    """
    if interval_days < 1:
        raise InvalidArgument("interval_days must be positive")
    if not docs:
        return []
    anchor = min(d.pub_date for d in docs)
    buckets: dict[int, list[Document]] = {}
    for doc in docs:
        idx = (doc.pub_date - anchor).days // interval_days
        buckets.setdefault(idx, []).append(doc)
    out = []
    for idx in sorted(buckets):
        start = anchor + dt.timedelta(days=idx * interval_days)
        end = start + dt.timedelta(days=interval_days)
        out.append((TimeInterval(start, end), buckets[idx]))
    return out
