"""Exception hierarchy. Every error carries a machine-readable ``code``."""


class HemikitError(Exception):
    code = "error"

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        out = {"error": self.code, "message": str(self)}
        for key, value in self.details.items():
            out[key] = value
        return out


class InvalidAlgebra(HemikitError):
    code = "InvalidAlgebra"


class IndexOutOfRange(InvalidAlgebra):
    code = "IndexOutOfRange"


class NotALattice(InvalidAlgebra):
    code = "NotALattice"


class WrongBounds(InvalidAlgebra):
    code = "WrongBounds"


class MissingNegation(HemikitError):
    code = "MissingNegation"


class MissingCenter(HemikitError):
    code = "MissingCenter"


class MultipleCenters(HemikitError):
    code = "MultipleCenters"


class SizeMismatch(HemikitError):
    code = "SizeMismatch"


class UnknownClass(HemikitError):
    code = "UnknownClass"


class TermSyntaxError(HemikitError):
    code = "SyntaxError"

    def __init__(self, message, position, expected=()):
        super().__init__(message, position=position, expected=sorted(expected))
        self.position = position
        self.expected = tuple(sorted(expected))


class UnboundVariable(HemikitError):
    code = "UnboundVariable"


class PreconditionFailed(HemikitError):
    """An input failed the class check an operation requires."""

    code = "PreconditionFailed"


class NotHIL(PreconditionFailed):
    code = "NotHIL"


class NotKhIL(PreconditionFailed):
    code = "NotKhIL"


class NotTransitive(HemikitError):
    code = "NotTransitive"


class IllDefined(HemikitError):
    code = "IllDefined"


class NotAMorphism(HemikitError):
    code = "NotAMorphism"


class NoCenter(HemikitError):
    code = "NoCenter"


class NotASubset(HemikitError):
    code = "NotASubset"


class NotHImplicative(HemikitError):
    code = "NotHImplicative"


class NotACongruence(HemikitError):
    code = "NotACongruence"


class TooLarge(HemikitError):
    code = "TooLarge"


class CapExceeded(TooLarge):
    code = "CapExceeded"


class UnknownKey(HemikitError):
    code = "UnknownKey"


class UnknownProperty(HemikitError):
    code = "UnknownProperty"


class NotClosed(HemikitError):
    code = "NotClosed"
