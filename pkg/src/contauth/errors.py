"""Shared exception types."""


class ContauthError(Exception):
    """Base class for all package errors."""


class ValidationError(ContauthError):
    """Invalid input data or configuration. ``field`` names the offending field."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class SchemaError(ContauthError):
    """Feature schema mismatch between producer and consumer."""


class ConfigurationError(ContauthError):
    """Invalid service or experiment configuration."""


class NotFoundError(ContauthError):
    """Requested resource does not exist."""
