"""Exception types shared across the package."""


class CoherenceError(Exception):
    """Base class for all errors raised by this package."""


class EmptyDocumentError(CoherenceError):
    """No sentence survived ingestion."""


class InvalidIndexError(CoherenceError):
    """Sentence index or quantile count outside the valid range."""


class DegenerateDocumentError(CoherenceError):
    """Document too short for the requested operation (e.g. permuting N < 2)."""


class FormatError(CoherenceError):
    """A file does not conform to its declared format."""


class DegenerateInputError(CoherenceError):
    """Encoded sentence carries no real tokens."""


class InvalidLabelError(CoherenceError):
    """Class label outside [0, q)."""


class NonFiniteLossError(CoherenceError):
    """Training loss became NaN or infinite."""


class VersionMismatchError(CoherenceError):
    """Model file magic, version, or declared configuration is inconsistent."""


class ChecksumMismatchError(CoherenceError):
    """Model file payload does not match its recorded checksum."""


class MismatchedInputsError(CoherenceError):
    """Two inputs that must describe the same sentences do not."""


class TooShortError(CoherenceError):
    """Fewer elements than the metric requires."""
