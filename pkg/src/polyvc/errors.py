"""Exception hierarchy. The CLI maps these onto exit codes."""


class PolyVCError(Exception):
    exit_code = 1
    kind = "error"

    def to_json(self):
        return {"error": self.kind, "message": str(self)}


class PreconditionError(PolyVCError, ValueError):
    exit_code = 3
    kind = "precondition"


class InadmissibleError(PreconditionError):
    kind = "inadmissible"


class RegimeError(PreconditionError):
    kind = "regime"


class GraphFormatError(PolyVCError, ValueError):
    """Malformed graph input. Carries the offending field when known."""

    exit_code = 2
    kind = "parse"

    def __init__(self, message, field=None, line=None):
        super().__init__(message)
        self.field = field
        self.line = line

    def to_json(self):
        d = super().to_json()
        if self.field is not None:
            d["field"] = self.field
        if self.line is not None:
            d["line"] = self.line
        return d


class NumericalError(PolyVCError, ArithmeticError):
    exit_code = 4
    kind = "numerical"


class CancellationError(NumericalError):
    kind = "cancellation"


class BranchError(NumericalError):
    kind = "branch"


class FitError(NumericalError):
    kind = "fit"
