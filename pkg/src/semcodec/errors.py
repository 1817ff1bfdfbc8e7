"""Exception hierarchy shared across the codec."""


class CodecError(Exception):
    """Base class for all semcodec errors."""


class FormatError(CodecError):
    """Malformed or truncated container (bad magic, version, lengths)."""


class DimensionMismatchError(CodecError):
    """Operands disagree on the latent dimension or atom count."""


class DegenerateVectorError(CodecError):
    """A vector with (near-)zero norm where a direction is required."""


class NullCodeError(CodecError):
    """An empty sparse code where a non-zero reconstruction is required."""


class DictionaryMismatchError(CodecError):
    """Code container references a different dictionary than supplied."""


class NoBreakEvenError(CodecError):
    """Shared-dictionary coding never beats the per-item baseline."""
