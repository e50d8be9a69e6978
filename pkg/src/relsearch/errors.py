"""Exception taxonomy shared across the package.

The CLI maps ConfigurationError to exit code 1 and DataError (and I/O
failures) to exit code 2.
"""


class ConfigurationError(Exception):
    """Invalid flags, unknown handles, or inconsistent options."""


class DataError(Exception):
    """Malformed or inconsistent input data."""


class SchemaError(DataError):
    """A corpus record violates the expected schema."""


class MalformedRowError(DataError):
    """A TSV row has the wrong shape or an out-of-range field."""


class DanglingReferenceError(DataError):
    """A record references a document, sentence, or mention that does not exist."""


class IndexFormatError(DataError):
    """An index file cannot be parsed."""


class VersionMismatchError(IndexFormatError):
    """The index file declares an unsupported format version."""


class ChecksumError(IndexFormatError):
    """The index file checksum is missing or does not match its content."""


class BipartitenessError(DataError):
    """A relation key or graph edge connects two entities of the same type."""


class MissingPredictionError(DataError):
    """A sidecar predictions file has no score for a generated instance."""


class SpanOverlapError(ValueError):
    """Two entity spans overlap, so tag insertion would be ambiguous."""


class UnknownClassError(LookupError):
    """The requested entity class id does not exist."""
