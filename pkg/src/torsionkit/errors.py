"""Exception hierarchy shared by all modules."""


class TorsionKitError(Exception):
    pass


class DimensionMismatchError(TorsionKitError, ValueError):
    pass


class DegreeError(TorsionKitError, ValueError):
    pass


class InvariantViolationError(TorsionKitError, ValueError):
    pass


class DegenerateDimensionError(TorsionKitError, ValueError):
    pass


class InvalidAlgebraError(TorsionKitError, ValueError):
    pass


class UnsupportedSignatureError(TorsionKitError, ValueError):
    pass


class NotALieStructureError(TorsionKitError, ValueError):
    """Raised when a 3-form fails the tau-Jacobi condition."""

    def __init__(self, message, defect):
        super().__init__(message)
        self.defect = defect


class InternalConsistencyError(TorsionKitError, RuntimeError):
    pass


class PreconditionError(TorsionKitError, ValueError):
    pass


class SchemaError(TorsionKitError, ValueError):
    """Malformed input file. ``where`` points at the offending field."""

    def __init__(self, message, where=""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
