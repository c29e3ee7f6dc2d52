"""corpusatlas: interval-clustered topic atlas with search and attributed QA."""

from .config import EngineConfig
from .engine import Engine
from .model import (Answer, Document, Filter, QaRequest, SearchHit,
                    SentenceChunk, TimeInterval, Topic)

__all__ = [
    "Answer", "Document", "Engine", "EngineConfig", "Filter", "QaRequest",
    "SearchHit", "SentenceChunk", "TimeInterval", "Topic",
]

__version__ = "0.1.0"
