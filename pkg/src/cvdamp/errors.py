"""Exception types shared across the package."""


class CvDampError(Exception):
    """Base class; ``kind`` is the machine-readable tag used by the CLI."""

    kind = "error"

    def as_dict(self) -> dict:
        return {"error": self.kind, "message": str(self)}


class InvalidArgument(CvDampError, ValueError):
    kind = "invalid-argument"


class UnsupportedRegime(CvDampError, ValueError):
    kind = "unsupported-regime"


class NumericalError(CvDampError, ArithmeticError):
    kind = "numerical-error"


class TruncationError(NumericalError):
    kind = "truncation-error"

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def as_dict(self) -> dict:
        out = super().as_dict()
        out["diagnostics"] = {k: float(v) if isinstance(v, (int, float)) else v
                              for k, v in self.diagnostics.items()}
        return out


class CutoffTooSmall(TruncationError):
    kind = "cutoff-too-small"


class NumericalWarning(RuntimeWarning):
    """Series or quadrature stopped at its cap before meeting tolerance."""
