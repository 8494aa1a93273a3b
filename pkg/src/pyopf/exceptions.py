"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`OPFError`.
Errors caused by bad arguments also derive from :class:`ValueError` so
callers that only know the standard library can still catch them.
"""


class OPFError(Exception):
    """Base class for all library errors."""


class InvalidStateError(OPFError, RuntimeError):
    """A structure was used in a state that does not allow the operation."""


class EmptyHeapError(OPFError, IndexError):
    """Extraction from an empty heap."""


class SingleClassError(OPFError, ValueError):
    """Supervised training needs at least two distinct labels."""


class TooSmallError(OPFError, ValueError):
    """Not enough samples for the requested operation."""


class InvalidKError(OPFError, ValueError):
    """Neighbourhood size out of range."""


class DimensionError(OPFError, ValueError):
    """Vector or matrix shapes do not agree."""


class UndefinedMetricError(OPFError, ValueError):
    """The distance is undefined for the given vectors."""


class LabelError(OPFError, ValueError):
    """Labels out of the admissible range or of mismatched length."""


class DegenerateClassError(LabelError):
    """A class expected in ``1..c`` does not occur in the ground truth."""


class NotTrainedError(OPFError, RuntimeError):
    """Prediction was requested from a model that was never fitted."""


class ParseError(OPFError, ValueError):
    """A dataset file could not be parsed.

    Attributes:
        path: File being parsed, if known.
        line: 1-based line number for text formats.
        offset: Byte offset for the binary format.
        sample: Index of the offending sample, when it can be determined.
    """

    def __init__(self, message, path=None, line=None, offset=None, sample=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if sample is not None:
            where.append(f"sample {sample}")
        full = f"{message} ({', '.join(where)})" if where else message
        super().__init__(full)
        self.path = path
        self.line = line
        self.offset = offset
        self.sample = sample


class VersionError(OPFError, ValueError):
    """A model file was written by an unsupported format version."""


class CorruptModelError(OPFError, ValueError):
    """A model file is truncated or fails its integrity check."""
