"""Exception types shared across the package."""


class ParseError(ValueError):
    """Raised on malformed DSL input, with the offending position."""

    def __init__(self, message: str, pos: int, expected: str | None = None):
        detail = f"at position {pos}: {message}"
        if expected is not None:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.pos = pos
        self.expected = expected


class NotExtendibleError(ValueError):
    """Raised when an operation requires a word on the tree and it is not."""


class DepthLimitError(ValueError):
    """Raised when a request exceeds the configured enumeration or counting limit."""


class SubsetViolationError(ValueError):
    """Raised when a claimed subclass relation fails; carries a witness word."""

    def __init__(self, witness: str, depth: int):
        super().__init__(f"subclass violation: {witness!r} at depth {depth} "
                         "is in the claimed subclass but not in the superclass")
        self.witness = witness
        self.depth = depth


class NoCertificateError(ValueError):
    """Raised when an operation needs an exact-measure certificate that is unavailable."""
