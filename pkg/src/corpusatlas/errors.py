"""Exception hierarchy shared by every engine module."""


class EngineError(Exception):
    """Base class for all engine failures."""


class InvalidArgument(EngineError):
    pass


class EmptyCorpusError(EngineError):
    pass


class SnapshotCorrupt(EngineError):
    pass


class IncompatibleSnapshot(EngineError):
    pass


class ProviderUnavailable(EngineError):
    pass


class EmptyContextError(EngineError):
    """No sentence survives the active filter during document-level QA."""


class NoRouteError(EngineError):
    """Corpus-level QA was asked to answer with an empty topic selection."""
