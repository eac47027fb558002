"""
Exceptions Module
Error hierarchy shared by every package
"""
from typing import Iterable, List, Optional


class VeeInsightError(ValueError):
    """Base class for all input and computation errors"""


class ExpressionSyntaxError(VeeInsightError):
    """Malformed radicand expression"""

    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class UnknownSymbolError(ExpressionSyntaxError):
    """Expression references a name that is not a declared parameter"""

    def __init__(self, name: str, position: int):
        self.name = name
        super().__init__(f"Unknown symbol '{name}'", position)


class PolynomialDivisionByZeroError(VeeInsightError, ZeroDivisionError):
    """Division by the zero polynomial"""


class PoleError(VeeInsightError, ZeroDivisionError):
    """Rational function evaluated at a root of its denominator"""


class ZeroFunctionError(VeeInsightError):
    """Operation undefined on the identically zero function"""


class SingularMatrixError(VeeInsightError):
    """Matrix has no inverse"""

    def __init__(self, rank: int, size: int, message: Optional[str] = None):
        self.rank = rank
        self.size = size
        super().__init__(message or f"Singular {size}x{size} matrix (rank {rank})")


class DegenerateGramError(SingularMatrixError):
    """Gram metric is singular; the system needs the regularization workflow"""

    def __init__(self, rank: int, size: int):
        super().__init__(
            rank,
            size,
            f"Gram metric is singular (rank {rank} < {size}); "
            "use the regularize command along a degenerate path",
        )


class UnboundParameterError(VeeInsightError):
    """Parameters left without a value"""

    def __init__(self, names: Iterable[str]):
        self.names: List[str] = sorted(names)
        super().__init__(f"Unbound parameter(s): {', '.join(self.names)}")


class RadicandPoleError(PoleError):
    """Radicand has a pole at the requested parameter values"""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"Radicand of covector '{label}' has a pole")


class InvalidSystemError(VeeInsightError):
    """Covector system failed validation"""

    def __init__(self, messages: List[str]):
        self.messages = messages
        super().__init__("; ".join(messages))


class HyperplaneHitError(VeeInsightError):
    """Point lies on the kernel of a covector"""

    def __init__(self, label: str):
        self.label = label
        super().__init__(f"Point lies on the hyperplane of covector '{label}'")


class SamplingError(VeeInsightError):
    """No admissible point found within the attempt budget"""


class RegularizationError(VeeInsightError):
    """Regularization requested where it is not applicable"""


class NonRegularizableError(RegularizationError):
    """Limit metric is singular along the chosen path"""


class UnitlessProductError(VeeInsightError):
    """Product has no unity (scale factor zero)"""


class MeanNotZeroError(VeeInsightError):
    """Integrand handed to the inverse derivative has nonzero mean"""

    def __init__(self, index: int, mean: float):
        self.index = index
        self.mean = mean
        super().__init__(f"Integrand {index} has nonzero mean {mean:.3e}")


class CompatibilityError(VeeInsightError):
    """Prescribed Hessian is not integrable"""

    def __init__(self, i: int, j: int, detail: Optional[str] = None):
        self.pair = (i, j)
        message = f"Hessian compatibility fails for index pair ({i}, {j})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class WDVVFailureError(VeeInsightError):
    """Polynomial potential does not define an associative product"""


class UnknownBuiltinError(VeeInsightError):
    """Unknown builtin name"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown builtin '{name}'")


class InputFormatError(VeeInsightError):
    """Malformed input document or flag"""
