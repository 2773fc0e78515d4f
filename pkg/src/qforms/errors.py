"""Exception hierarchy shared by all engines."""


class QFormsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(QFormsError, ValueError):
    """Input data violates a documented precondition or invariant."""


class ResourceLimitError(QFormsError, RuntimeError):
    """A configured order cap would be exceeded."""


class InternalCheckError(QFormsError, RuntimeError):
    """A self-check that should be mathematically impossible to fail, failed."""


class SchemaError(QFormsError, ValueError):
    """A file or string does not match the documented schema."""
