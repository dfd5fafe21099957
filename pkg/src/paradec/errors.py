"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed group-spec string, word, or bracketed literal.

    ``position`` is the character offset of the offending token in the
    original text, or None when it does not apply.
    """

    def __init__(self, message: str, position: "int | None" = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownSymbolError(ValueError):
    """A word references a generator symbol that the spec does not define."""


class MatrixOverflowError(OverflowError):
    """A matrix entry left the signed 64-bit range.

    Raised instead of silently producing huge integers so that certificate
    data stays within the documented machine-integer contract.
    """


class VertexBudgetError(RuntimeError):
    """Ball enumeration exceeded the configured vertex budget."""


class DomainSizeError(ValueError):
    """Brute-force domain larger than the 4^|D| enumeration guardrail."""


class DisconnectedGraphError(ValueError):
    """Spanning-tree sampling requires a connected graph."""


class RequiredEdgesCycleError(ValueError):
    """The edges a forest must contain already close a cycle.

    For a Cayley patch this signals torsion-like behaviour of the
    distinguished generator within the patch.
    """


class PatchEscapeError(ValueError):
    """A required product lies outside the patch; shrink the sets or grow it."""


class CertificateError(ValueError):
    """A matching certificate failed re-verification."""
