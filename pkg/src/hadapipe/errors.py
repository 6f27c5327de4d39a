"""Exception types shared across the package."""


class HadapipeError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(HadapipeError, ValueError):
    """Operand dimensions are incompatible with the requested operation."""


class IndexRangeError(HadapipeError, IndexError):
    """A 1-based row or pattern index falls outside its valid range."""


class ResourceLimitError(HadapipeError):
    """A result would exceed the configured stored-entry budget."""


class ContractError(HadapipeError, ValueError):
    """A caller violated a documented precondition."""


class InternalInconsistencyError(HadapipeError, RuntimeError):
    """An invariant that must hold by construction failed; indicates a bug
    or corrupted input data, never a plain usage error."""


class FormatError(HadapipeError):
    """A serialized file is malformed. Carries the byte offset of the
    first defect when known."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset
