"""Exception hierarchy for the pfister-descent library.

Budget exhaustion and undecided searches are results, not errors: only genuine
misuse or a failed proof obligation raises.
"""


class PfisterError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatchError(PfisterError):
    """Two operands live in different fields."""


class DivisionByZeroError(PfisterError):
    """Inversion or division by the zero element."""


class ElementParseError(PfisterError):
    """Malformed element, field declaration or number in an input string."""

    def __init__(self, message: str, source: str = "", position: int = 0):
        self.source = source
        self.position = position
        if source:
            message = f"{message} at position {position}: {source!r}"
        super().__init__(message)


class UnsupportedInputError(PfisterError):
    """The operation is not defined for this kind of input."""


class DimensionMismatchError(PfisterError):
    """Vector length or form dimensions do not match."""


class SideConditionError(PfisterError):
    """A rewrite move was applied where its side condition fails."""


class CertificateError(PfisterError):
    """A certificate or report failed to replay."""


class ImpossibleCaseError(PfisterError):
    """A configuration that the theory rules out was observed."""


class InstanceFormatError(PfisterError):
    """Malformed instance file or fixture parameters."""
