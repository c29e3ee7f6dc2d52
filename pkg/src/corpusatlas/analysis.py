"""Text analysis shared by the lexical index, embeddings, and keyword extraction."""

from __future__ import annotations

import re

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# Applied only to human-facing keyword extraction, never to the search index.
STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "by", "for", "from",
    "has", "in", "is", "it", "its", "of", "on", "or", "that", "the",
    "this", "to", "was", "were", "which", "with", "we", "our", "their", "these",
})


def tokenize(text: str) -> list[str]:
    """Lowercase and split on non-alphanumerics, dropping empty tokens."""
    return _TOKEN_RE.findall(text.lower())
