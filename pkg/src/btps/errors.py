"""Exception types raised across the package."""


class BTPSError(Exception):
    """Base class for all package errors."""


class SphereOffShell(BTPSError, ValueError):
    pass


class MixedSpaces(BTPSError, TypeError):
    pass


class BadDimension(BTPSError, ValueError):
    pass


class ConversionFailure(BTPSError, ValueError):
    pass


class NotNormalizable(BTPSError, ValueError):
    pass


class NumericalFailure(BTPSError, RuntimeError):
    """A dense factorization did not converge.

    ``context`` carries whatever provenance the caller could attach
    (matrix id, grid coordinates, level).
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context

    def __str__(self):
        base = super().__str__()
        if not self.context:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in sorted(self.context.items()))
        return f"{base} ({extra})"


class BasisMismatch(BTPSError, ValueError):
    pass


class OrderUnbounded(BTPSError, ValueError):
    pass


class UnknownPreset(BTPSError, KeyError):
    pass


class SchemaError(BTPSError, ValueError):
    """Invalid symbol or config document; ``pointer`` locates the field."""

    def __init__(self, message, pointer=""):
        super().__init__(message)
        self.pointer = pointer

    def __str__(self):
        base = super().__str__()
        return f"{self.pointer}: {base}" if self.pointer else base
