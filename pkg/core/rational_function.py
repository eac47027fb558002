"""
Rational Function Module
Exact rational functions of named parameters over QQ, kept in canonical form
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple, Union

import sympy as sp

from core.exceptions import (
    PoleError,
    PolynomialDivisionByZeroError,
    UnboundParameterError,
    VeeInsightError,
    ZeroFunctionError,
)

Number = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction, numeric string or sympy rational to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


def _sympify(value) -> sp.Expr:
    if isinstance(value, RationalFunction):
        return value.as_expr()
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    if isinstance(value, int):
        return sp.Integer(value)
    raise TypeError(f"Cannot use {type(value).__name__} as a rational function")


class RationalFunction:
    """
    Quotient of two polynomials with rational coefficients.

    The canonical form has gcd(numerator, denominator) = 1 and a denominator
    whose leading coefficient (lex order on the sorted parameter names) is 1,
    so that equality is structural equality of the expanded parts.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        num = sp.expand(numerator if isinstance(numerator, sp.Basic) else _sympify(numerator))
        den = sp.expand(
            denominator if isinstance(denominator, sp.Basic) else _sympify(denominator)
        )
        if den == 0:
            raise PolynomialDivisionByZeroError("Division by the zero polynomial")

        num, den = sp.fraction(sp.cancel(num / den))
        symbols = sorted((num * den).free_symbols, key=lambda symbol: symbol.name)
        if symbols:
            leading = sp.Poly(den, *symbols, domain="QQ").LC()
            num = sp.expand(num / leading)
            den = sp.expand(den / leading)
        else:
            num = sp.Rational(num, den)
            den = sp.Integer(1)

        self.numerator: sp.Expr = num
        self.denominator: sp.Expr = den

    @classmethod
    def constant(cls, value: Number) -> "RationalFunction":
        return cls(_sympify(to_fraction(value)))

    @classmethod
    def parameter(cls, name: str) -> "RationalFunction":
        return cls(sp.Symbol(name))

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls.constant(value)

    # Introspection

    @property
    def parameters(self) -> Tuple[str, ...]:
        symbols = (self.numerator * self.denominator).free_symbols
        return tuple(sorted(symbol.name for symbol in symbols))

    def as_expr(self) -> sp.Expr:
        return self.numerator / self.denominator

    def is_zero(self) -> bool:
        return self.numerator == 0

    def is_constant(self) -> bool:
        return not self.parameters

    def constant_value(self) -> Fraction:
        """Value of a parameter-free function"""
        if not self.is_constant():
            raise UnboundParameterError(self.parameters)
        return to_fraction(self.numerator / self.denominator)

    # Evaluation

    def substitute(self, values: Mapping[str, Union[Number, "RationalFunction"]]) -> "RationalFunction":
        """Replace some parameters by numbers or other rational functions"""
        mapping = {sp.Symbol(name): _sympify(value) for name, value in values.items()}
        if not mapping:
            return self
        denominator = sp.expand(self.denominator.subs(mapping))
        if denominator == 0:
            # canonical form is reduced, so a vanishing denominator is a genuine pole
            raise PoleError(f"Pole of {self.to_text()} at {dict(values)}")
        return RationalFunction(self.numerator.subs(mapping), denominator)

    def evaluate(self, values: Mapping[str, Number]) -> Fraction:
        """Exact value at a point binding every parameter"""
        missing = set(self.parameters) - set(values)
        if missing:
            raise UnboundParameterError(missing)
        mapping = {
            sp.Symbol(name): _sympify(to_fraction(values[name])) for name in self.parameters
        }
        denominator = self.denominator.subs(mapping)
        if denominator == 0:
            raise PoleError(f"Pole of {self.to_text()} at {dict(values)}")
        return to_fraction(self.numerator.subs(mapping) / denominator)

    def to_text(self) -> str:
        from core.expression_parser import serialize

        return serialize(self)

    # Arithmetic

    def __add__(self, other):
        try:
            return RationalFunction(self.as_expr() + _sympify(other))
        except TypeError:
            return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        try:
            return RationalFunction(self.as_expr() - _sympify(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        try:
            return RationalFunction(_sympify(other) - self.as_expr())
        except TypeError:
            return NotImplemented

    def __mul__(self, other):
        try:
            return RationalFunction(self.as_expr() * _sympify(other))
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            divisor = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        if divisor.is_zero():
            raise PolynomialDivisionByZeroError("Division by the zero polynomial")
        return RationalFunction(
            self.numerator * divisor.denominator, self.denominator * divisor.numerator
        )

    def __rtruediv__(self, other):
        try:
            return RationalFunction.coerce(other) / self
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise VeeInsightError("Exponent must be a non-negative integer")
        return RationalFunction(self.numerator**exponent, self.denominator**exponent)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            sp.expand(self.numerator - other.numerator) == 0
            and sp.expand(self.denominator - other.denominator) == 0
        )

    def __hash__(self) -> int:
        return hash((sp.srepr(self.numerator), sp.srepr(self.denominator)))

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True)
class Valuation:
    """Order of vanishing and leading coefficient at a point"""

    order: int
    leading_coefficient: RationalFunction

    @property
    def leading_value(self) -> Fraction:
        return self.leading_coefficient.constant_value()

    def to_dict(self) -> Dict:
        return {"order": self.order, "leading_coefficient": self.leading_coefficient.to_text()}


def _lowest_term(polynomial: sp.Expr, variable: sp.Symbol, t0: sp.Rational) -> Tuple[int, sp.Expr]:
    shifted = sp.Poly(sp.expand(polynomial.subs(variable, variable + t0)), variable)
    order = min(monom[0] for monom in shifted.monoms())
    return order, shifted.coeff_monomial(variable**order)


def valuation_at(f: RationalFunction, t0: Number, parameter: Optional[str] = None) -> Valuation:
    """
    Order k with (p - t0)^(-k) * f finite and nonzero at p = t0.

    Args:
        f: Nonzero rational function
        t0: Point on the parameter line
        parameter: Parameter to expand in; may be omitted for univariate f

    Returns:
        Valuation whose leading coefficient may depend on the other parameters
    """
    if f.is_zero():
        raise ZeroFunctionError("Valuation of the zero function is undefined")

    if parameter is None:
        if len(f.parameters) > 1:
            raise VeeInsightError(
                f"Valuation of a function of {', '.join(f.parameters)} needs a parameter"
            )
        if not f.parameters:
            return Valuation(0, f)
        parameter = f.parameters[0]

    variable = sp.Symbol(parameter)
    point = _sympify(to_fraction(t0))
    num_order, num_lead = _lowest_term(f.numerator, variable, point)
    den_order, den_lead = _lowest_term(f.denominator, variable, point)
    return Valuation(num_order - den_order, RationalFunction(num_lead, den_lead))
