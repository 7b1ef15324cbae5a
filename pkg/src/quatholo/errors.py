"""Exception hierarchy shared by all modules.

Every error carries a short machine-readable ``code`` that the CLI puts into
its error object.
"""


class QuatHoloError(Exception):
    code = "Error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


class DivisionByZero(QuatHoloError, ZeroDivisionError):
    code = "DivisionByZero"


class DimensionMismatch(QuatHoloError, ValueError):
    code = "DimensionMismatch"


class InvalidElement(QuatHoloError, ValueError):
    code = "InvalidElement"


class NotInParabolic(QuatHoloError, ValueError):
    code = "NotInParabolic"


class PreconditionViolated(QuatHoloError, ValueError):
    code = "PreconditionViolated"


class NotExact(QuatHoloError, ArithmeticError):
    """An exact result would need a square root outside Q(sqrt 2)."""

    code = "NotExact"


class NotIsotropic(QuatHoloError, ValueError):
    code = "NotIsotropic"


class PoleAtInfinity(QuatHoloError, ValueError):
    code = "PoleAtInfinity"


class PoleInput(QuatHoloError, ValueError):
    code = "PoleInput"


class NotSimilarity(QuatHoloError, ValueError):
    code = "NotSimilarity"


class AmbientMismatch(QuatHoloError, ValueError):
    code = "AmbientMismatch"


class NotASubspace(QuatHoloError, ValueError):
    code = "NotASubspace"


class NonStandardSubspace(NotASubspace):
    """The subspace has no adapted basis of the block form H+C_i+C_j+C_k+R."""

    code = "NonStandardSubspace"


class NotSkew(QuatHoloError, ValueError):
    code = "NotSkew"


class InvalidSpec(QuatHoloError, ValueError):
    code = "InvalidSpec"

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

    def to_json(self):
        return {"error": self.code, "message": str(self), "violations": self.violations}


class ShapeOutOfRange(QuatHoloError, ValueError):
    code = "ShapeOutOfRange"


class UnsupportedCase(QuatHoloError, ValueError):
    code = "UnsupportedCase"
