"""Exceptions raised by pn2sc."""


class Pn2ScError(Exception):
    """Base class of every error raised by pn2sc."""


class ModelError(Pn2ScError):
    """Illegal model operation: wrong slot, containment cycle, broken tree."""


class KindError(ModelError):
    """An element (or reference target) has the wrong kind."""


class LivenessError(ModelError):
    """An element is accessed after deletion or was never created."""


class TraceError(Pn2ScError):
    """The traceability map misses an entry for a live element."""


class StateError(Pn2ScError):
    """An operation was called before its preconditions were established."""


class DocumentError(Pn2ScError):
    """A JSON document is malformed or does not follow its schema.

    Args:
        message (str): Diagnostic text.
        line (int): 1-based line of the problem, if known. Default: None.
        column (int): 1-based column of the problem, if known. Default: None.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f'{message} (line {line}, column {column})'
        super().__init__(message)


class UnresolvedIdError(DocumentError):
    """A document references an id that is not declared."""

    def __init__(self, ref_id, where=''):
        self.ref_id = ref_id
        super().__init__(f'unresolved id {ref_id!r}{where}')


class DuplicateIdError(DocumentError):
    """A document declares the same id twice."""

    def __init__(self, dup_id):
        self.dup_id = dup_id
        super().__init__(f'duplicate id {dup_id!r}')


class IrreducibleError(Pn2ScError):
    """Serialization was requested for a net that did not reduce."""


class UsageError(Pn2ScError):
    """Bad command-line usage."""
