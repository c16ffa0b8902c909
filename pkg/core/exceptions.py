from typing import Any, Dict


class GameError(Exception):
    """Base error; carries the CLI exit code and the HTTP status it maps to."""

    exit_code = 2
    status_code = 422

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "detail": self.detail}


class ValidationError(GameError):
    pass


class LayoutError(ValidationError):
    pass


class LayoutConflictError(LayoutError):
    pass


class NotEntangledError(ValidationError):
    pass


class EffectValidityError(ValidationError):
    pass


class DimensionError(GameError):
    exit_code = 3
    status_code = 400


class InfeasibleConversionError(DimensionError):
    pass


class NoDetectionError(DimensionError):
    pass


class SolverError(DimensionError):
    pass
