"""Exception hierarchy shared across the toolkit."""


class MoralAuditError(Exception):
    """Base class for all toolkit errors."""


class ParseError(MoralAuditError):
    """Raised when an input file is structurally malformed."""


class ValidationError(MoralAuditError):
    """Raised when well-formed input violates a documented invariant."""


class ConsistencyError(ValidationError):
    """Raised when logits and predicted bits disagree under the declared threshold."""
