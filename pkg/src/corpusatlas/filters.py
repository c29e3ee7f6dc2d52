"""Conjunctive metadata filtering and timeline histograms."""

from __future__ import annotations

import datetime as dt

from .errors import InvalidArgument
from .model import Document, Filter

BUCKETS = ("day", "week", "month")


def expand_topic_ids(
    selected: frozenset[str], children: dict[str, list[str]] | None
) -> set[str]:
    """Expand selected topic ids to all descendant leaves (a non-leaf selection
    includes every leaf below it). `children` maps topic_id -> child topic ids."""
    if not children:
        return set(selected)
    out: set[str] = set()
    stack = list(selected)
    while stack:
        tid = stack.pop()
        out.add(tid)
        stack.extend(children.get(tid, []))
    return out


def apply_filter(
    docs: list[Document],
    flt: Filter,
    *,
    topic_children: dict[str, list[str]] | None = None,
) -> set[str]:
    """Doc ids passing the conjunction of date range, topic selection, and title keyword."""
    topic_set = (
        expand_topic_ids(flt.topic_ids, topic_children)
        if flt.topic_ids is not None else None
    )
    keyword = flt.title_keyword.lower() if flt.title_keyword is not None else None
    out = set()
    for doc in docs:
        if flt.date_from and doc.pub_date < flt.date_from:
            continue
        if flt.date_to and doc.pub_date > flt.date_to:
            continue
        if topic_set is not None and doc.topic_id not in topic_set:
            continue
        if keyword is not None and keyword not in doc.title.lower():
            continue
        out.add(doc.doc_id)
    return out


def _bucket_start(d: dt.date, bucket: str) -> dt.date:
    if bucket == "day":
        return d
    if bucket == "week":
        return d - dt.timedelta(days=d.weekday())  # Monday-anchored
    if bucket == "month":
        return d.replace(day=1)
    raise InvalidArgument(f"unknown bucket granularity {bucket!r}")


def _next_bucket(d: dt.date, bucket: str) -> dt.date:
    if bucket == "day":
        return d + dt.timedelta(days=1)
    if bucket == "week":
        return d + dt.timedelta(days=7)
    # month
    return (d.replace(day=28) + dt.timedelta(days=4)).replace(day=1)


def timeline_histogram(
    docs: list[Document],
    flt: Filter,
    bucket: str = "day",
    *,
    topic_children: dict[str, list[str]] | None = None,
) -> list[tuple[dt.date, int]]:
    """Date histogram over the filtered documents; spans [min, max] with empty
    buckets included at count 0. Counts always sum to |apply_filter|."""
    if bucket not in BUCKETS:
        raise InvalidArgument(f"unknown bucket granularity {bucket!r}")
    allowed = apply_filter(docs, flt, topic_children=topic_children)
    if not allowed:
        return []
    dates = [doc.pub_date for doc in docs if doc.doc_id in allowed]
    counts: dict[dt.date, int] = {}
    for d in dates:
        b = _bucket_start(d, bucket)
        counts[b] = counts.get(b, 0) + 1
    cur = _bucket_start(min(dates), bucket)
    last = _bucket_start(max(dates), bucket)
    out = []
    while cur <= last:
        out.append((cur, counts.get(cur, 0)))
        cur = _next_bucket(cur, bucket)
    return out
