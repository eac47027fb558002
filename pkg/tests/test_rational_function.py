"""
Unit tests for exact rational functions and the expression parser
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from core.exceptions import (
    ExpressionSyntaxError,
    PoleError,
    PolynomialDivisionByZeroError,
    UnboundParameterError,
    UnknownSymbolError,
    ZeroFunctionError,
)
from core.expression_parser import parse_scalar, serialize
from core.rational_function import RationalFunction, valuation_at


class TestRationalFunction:
    """Test RationalFunction arithmetic and canonical form"""

    @pytest.fixture
    def t(self):
        return RationalFunction.parameter("t")

    def test_canonical_equality(self, t):
        """Equal quotients compare equal after reduction"""
        left = (t * t - 1) / (t - 1)
        assert left == t + 1
        assert hash(left) == hash(t + 1)

    def test_constant_value(self):
        """Parameter-free functions expose their value"""
        assert RationalFunction.constant(Fraction(3, 4)).constant_value() == Fraction(3, 4)

    def test_constant_value_unbound(self, t):
        """Asking for the value of a parametric function fails"""
        with pytest.raises(UnboundParameterError):
            t.constant_value()

    def test_division_by_zero_polynomial(self, t):
        """Dividing by the zero polynomial is rejected"""
        with pytest.raises(PolynomialDivisionByZeroError):
            t / (t - t)

    def test_evaluate(self, t):
        """Exact evaluation at a rational point"""
        f = 3 / t
        assert f.evaluate({"t": Fraction(2)}) == Fraction(3, 2)

    def test_evaluate_pole(self, t):
        """Evaluation at a pole raises"""
        with pytest.raises(PoleError):
            (3 / t).evaluate({"t": 0})

    def test_substitute_keeps_other_parameters(self):
        """Partial substitution leaves a function of the rest"""
        f = parse_scalar("2*(t+s-1)", ["s", "t"])
        g = f.substitute({"s": parse_scalar("-t-1", ["t"])})
        assert g == parse_scalar("-4", [])
        assert g.is_constant()

    def test_power(self, t):
        """Integer powers expand exactly"""
        assert (t + 1) ** 2 == t * t + 2 * t + 1


class TestExpressionParser:
    """Test parse_scalar and serialize"""

    def test_polynomial(self):
        """Products expand to a polynomial"""
        t = RationalFunction.parameter("t")
        assert parse_scalar("2*(2*t+1)", ["t"]) == 4 * t + 2

    def test_rational_function(self):
        """Division by a parameter gives a quotient"""
        f = parse_scalar("3/t", ["t"])
        assert f.evaluate({"t": 3}) == 1
        assert f.parameters == ("t",)

    def test_rational_literal(self):
        """p/q literals parse as exact fractions"""
        assert parse_scalar("-2/3").constant_value() == Fraction(-2, 3)

    def test_unary_minus_and_power(self):
        """'-' binds to its base; '^' takes an integer exponent"""
        assert parse_scalar("-t^2", ["t"]).evaluate({"t": 3}) == 9
        assert parse_scalar("-(t^2)", ["t"]).evaluate({"t": 3}) == -9

    def test_division_by_zero(self):
        """1/0 is a division by the zero polynomial"""
        with pytest.raises(PolynomialDivisionByZeroError):
            parse_scalar("1/0")

    def test_unknown_symbol(self):
        """Names not declared as parameters are rejected with a position"""
        with pytest.raises(UnknownSymbolError) as info:
            parse_scalar("2*x", ["t"])
        assert info.value.position == 2

    @pytest.mark.parametrize("text", ["", "2*", "(t+1", "t^t", "2 $ 3", "t)"])
    def test_syntax_errors(self, text):
        """Malformed input raises a syntax error"""
        with pytest.raises(ExpressionSyntaxError):
            parse_scalar(text, ["t"])

    @pytest.mark.parametrize(
        "text",
        ["2*(t+s-1)", "2*(s-t+1)/t", "(2*t-1)/3", "-t^2 + 1/2", "3/t", "(t*s - 1)/(t^2 + s)"],
    )
    def test_serialize_parses_back(self, text):
        """serialize output reads back to an equal function"""
        f = parse_scalar(text, ["s", "t"])
        assert parse_scalar(serialize(f), ["s", "t"]) == f

    @hypothesis_settings(max_examples=50, deadline=None)
    @given(
        st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=4),
        st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=3),
    )
    def test_serialize_random_quotients(self, numerator, denominator):
        """Random polynomial quotients survive serialize/parse"""
        t = RationalFunction.parameter("t")
        den = sum((c * t**k for k, c in enumerate(denominator)), RationalFunction.constant(0))
        if den.is_zero():
            return
        num = sum((c * t**k for k, c in enumerate(numerator)), RationalFunction.constant(0))
        f = num / den
        assert parse_scalar(serialize(f), ["t"]) == f


class TestValuation:
    """Test valuation_at"""

    def test_simple_zero(self):
        """2*eps vanishes to order 1 with leading coefficient 2"""
        valuation = valuation_at(parse_scalar("2*eps", ["eps"]), 0)
        assert valuation.order == 1
        assert valuation.leading_value == 2

    def test_pole(self):
        """3/t has a simple pole at 0"""
        valuation = valuation_at(parse_scalar("3/t", ["t"]), 0)
        assert valuation.order == -1
        assert valuation.leading_value == 3

    def test_constant(self):
        """A nonzero constant has order 0"""
        valuation = valuation_at(RationalFunction.constant(5), Fraction(7, 2))
        assert valuation.order == 0
        assert valuation.leading_value == 5

    def test_shifted_point(self):
        """(2t+1)^2 vanishes to order 2 at t = -1/2"""
        valuation = valuation_at(parse_scalar("(2*t+1)^2", ["t"]), Fraction(-1, 2))
        assert valuation.order == 2
        assert valuation.leading_value == 4

    def test_leading_coefficient_keeps_other_parameters(self):
        """Expanding in one parameter leaves the others in the coefficient"""
        f = parse_scalar("2*eps/t", ["t", "eps"])
        valuation = valuation_at(f, 0, "eps")
        assert valuation.order == 1
        assert valuation.leading_coefficient == parse_scalar("2/t", ["t"])

    def test_product_orders_add(self):
        """Orders add and leading coefficients multiply under products"""
        f = parse_scalar("3*t*(t-1)", ["t"])
        g = parse_scalar("(t+2)/t^2", ["t"])
        vf, vg, vfg = valuation_at(f, 0), valuation_at(g, 0), valuation_at(f * g, 0)
        assert vfg.order == vf.order + vg.order
        assert vfg.leading_value == vf.leading_value * vg.leading_value

    def test_zero_function(self):
        """The zero function has no valuation"""
        with pytest.raises(ZeroFunctionError):
            valuation_at(RationalFunction.constant(0), 0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
