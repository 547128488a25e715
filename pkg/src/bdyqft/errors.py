"""Exception types raised across the package."""


class BdyQFTError(Exception):
    """Base class; ``code`` is the structured name used in CLI reports."""

    code = "Error"

    def __init__(self, message="", **witness):
        super().__init__(message)
        self.witness = witness

    def to_dict(self):
        return {"error": self.code, "message": str(self), "witness": self.witness}


class UnboundedRegion(BdyQFTError):
    code = "UnboundedRegion"


class NotAnInclusion(BdyQFTError):
    code = "NotAnInclusion"


class NotCausallyConvex(BdyQFTError):
    code = "NotCausallyConvex"


class ClosureOverflow(BdyQFTError):
    code = "ClosureOverflow"


class NotDisjoint(BdyQFTError):
    code = "NotDisjoint"


class EmptyCatalog(BdyQFTError):
    code = "EmptyCatalog"


class DegreeOverflow(BdyQFTError):
    code = "DegreeOverflow"


class NotAnIdeal(BdyQFTError):
    code = "NotAnIdeal"


class InvalidAlgebra(BdyQFTError):
    code = "InvalidAlgebra"


class InvalidMorphism(BdyQFTError):
    code = "InvalidMorphism"


class NotAnIdealFunctor(BdyQFTError):
    code = "NotAnIdealFunctor"


class MissingFactorizationRegion(BdyQFTError):
    code = "MissingFactorizationRegion"


class TruncationUnsound(BdyQFTError):
    code = "TruncationUnsound"


class NotAdditive(BdyQFTError):
    code = "NotAdditive"


class IdealNotTrivialOnInterior(BdyQFTError):
    code = "IdealNotTrivialOnInterior"


class UnsupportedMass(BdyQFTError):
    code = "UnsupportedMass"


class SupportTouchesBoundary(BdyQFTError):
    code = "SupportTouchesBoundary"


class SupportViolation(BdyQFTError):
    code = "SupportViolation"


class BasisDegenerate(BdyQFTError):
    code = "BasisDegenerate"


class CoverNotFound(BdyQFTError):
    code = "CoverNotFound"


class NotAdjointRelated(BdyQFTError):
    code = "NotAdjointRelated"


class ConfigError(BdyQFTError):
    code = "ConfigError"


class AmbiguousNormalForm(BdyQFTError):
    code = "AmbiguousNormalForm"
