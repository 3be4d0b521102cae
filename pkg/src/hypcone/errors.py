"""Exception hierarchy.

Every domain error derives from :class:`HypconeError`, which the CLI turns into
a structured JSON error object.  ``field`` optionally names the offending input.
"""


class HypconeError(ValueError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def to_dict(self):
        out = {"type": type(self).__name__, "message": str(self)}
        if self.field is not None:
            out["field"] = self.field
        return out


class ParabolicOrIdentity(HypconeError):
    pass


class NoAxis(HypconeError):
    pass


class NotElliptic(HypconeError):
    pass


class UnsupportedCurvature(HypconeError):
    pass


class NoRealizableRoot(HypconeError):
    pass


class DegenerateSubstitution(HypconeError):
    pass


class QuadratureFailure(HypconeError):
    pass


class NoDegenerationFound(HypconeError):
    pass


class BudgetExceeded(HypconeError):
    pass


class InvalidMetricSpace(HypconeError):
    pass


class AngleAbovePi(HypconeError):
    pass
