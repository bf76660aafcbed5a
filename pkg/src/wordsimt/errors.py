"""Exception types shared across the package."""


class SimtError(Exception):
    """Base class for all errors raised by wordsimt."""


class EmptyInput(SimtError, ValueError):
    pass


class MalformedToken(SimtError, ValueError):
    pass


class InvalidParameter(SimtError, ValueError):
    pass


class InvalidSchedule(SimtError, ValueError):
    pass


class InvalidTrace(SimtError, ValueError):
    pass


class DimensionError(SimtError, ValueError):
    pass


class BoundaryError(SimtError, ValueError):
    pass


class VocabularyAlignmentError(SimtError, ValueError):
    def __init__(self, message, word_index=None):
        super().__init__(message)
        self.word_index = word_index


class ParseError(SimtError, ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class OracleRunaway(SimtError, RuntimeError):
    pass


class EmptyCorpus(SimtError, ValueError):
    pass


class RecordError(SimtError):
    """Wraps a failure on one corpus record so the caller knows which one."""

    def __init__(self, record_id, cause):
        super().__init__(f"record {record_id}: {type(cause).__name__}: {cause}")
        self.record_id = record_id
        self.cause = cause
