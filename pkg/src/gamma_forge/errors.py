"""Exception hierarchy.

Every library error carries a ``kind`` string; the CLI reports that string
verbatim in its ``{"error": {"kind": ..., "detail": ...}}`` payload.
"""


class GammaForgeError(Exception):
    kind = "GammaForgeError"


class MalformedInput(GammaForgeError, ValueError):
    kind = "MalformedInput"


# scalars
class RingMismatch(GammaForgeError, TypeError):
    kind = "RingMismatch"


class ModulusInvalid(GammaForgeError, ValueError):
    kind = "ModulusInvalid"


class UnsupportedRing(GammaForgeError, TypeError):
    kind = "UnsupportedRing"


class NotPrime(GammaForgeError, ValueError):
    kind = "NotPrime"


class NotIntegral(GammaForgeError, ArithmeticError):
    kind = "NotIntegral"


# multi-indices
class BasisMismatch(GammaForgeError, ValueError):
    kind = "BasisMismatch"


class EmptyIndex(GammaForgeError, ValueError):
    kind = "EmptyIndex"


# divided power algebra
class SpecMismatch(GammaForgeError, ValueError):
    kind = "SpecMismatch"


class NotInAugmentationIdeal(GammaForgeError, ValueError):
    kind = "NotInAugmentationIdeal"


class BudgetExceeded(GammaForgeError, RuntimeError):
    kind = "BudgetExceeded"


class EmptyQuotientBasis(GammaForgeError, ValueError):
    kind = "EmptyQuotientBasis"


class NotDegreeOne(GammaForgeError, ValueError):
    kind = "NotDegreeOne"


class ImageNotInIdeal(GammaForgeError, ValueError):
    kind = "ImageNotInIdeal"


# dp structures
class NotRationalAlgebra(GammaForgeError, TypeError):
    kind = "NotRationalAlgebra"


class KernelNotStable(GammaForgeError, ValueError):
    kind = "KernelNotStable"


# polynomial laws
class AlgebraMismatch(GammaForgeError, TypeError):
    kind = "AlgebraMismatch"


class PartitionInvalid(GammaForgeError, ValueError):
    kind = "PartitionInvalid"


class NotHomogeneous(GammaForgeError, ValueError):
    kind = "NotHomogeneous"


# base change
class ExtensionMismatch(GammaForgeError, ValueError):
    kind = "ExtensionMismatch"


def all_error_classes():
    """Every concrete library error class, in definition order."""
    seen = []
    stack = [GammaForgeError]
    while stack:
        cls = stack.pop(0)
        seen.append(cls)
        stack.extend(cls.__subclasses__())
    return seen
