"""
Expression Parser Module
Recursive-descent parser and serializer for radicand expressions

Grammar (whitespace insignificant):
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' integer)?
    base   := integer | integer '/' integer | name | '(' expr ')' | '-' base
"""
import re
from dataclasses import dataclass
from typing import List, Sequence

import sympy as sp

from core.exceptions import ExpressionSyntaxError, UnknownSymbolError
from core.rational_function import RationalFunction, to_fraction

TOKEN_PATTERN = re.compile(
    r"(?P<space>\s+)|(?P<integer>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    """Split an expression into tokens, ending with an 'end' token"""
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(f"Unexpected character '{text[position]}'", position)
        kind = match.lastgroup
        if kind != "space":
            tokens.append(Token(kind, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Parses one expression over a fixed list of parameter names"""

    def __init__(self, text: str, parameters: Sequence[str] = ()):
        self.text = text
        self.parameters = set(parameters)
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self.current
        if token.text != text:
            found = token.text or "end of input"
            raise ExpressionSyntaxError(f"Expected '{text}' but found '{found}'", token.position)
        return self._advance()

    def parse(self) -> RationalFunction:
        if self.current.kind == "end":
            raise ExpressionSyntaxError("Empty expression", 0)
        value = self._expr()
        if self.current.kind != "end":
            raise ExpressionSyntaxError(f"Unexpected '{self.current.text}'", self.current.position)
        return value

    def _expr(self) -> RationalFunction:
        value = self._term()
        while self.current.text in ("+", "-"):
            operator = self._advance().text
            right = self._term()
            value = value + right if operator == "+" else value - right
        return value

    def _term(self) -> RationalFunction:
        value = self._factor()
        while self.current.text in ("*", "/"):
            operator = self._advance().text
            right = self._factor()
            value = value * right if operator == "*" else value / right
        return value

    def _factor(self) -> RationalFunction:
        value = self._base()
        if self.current.text == "^":
            self._advance()
            token = self.current
            if token.kind != "integer":
                raise ExpressionSyntaxError("Exponent must be a non-negative integer", token.position)
            self._advance()
            value = value ** int(token.text)
        return value

    def _base(self) -> RationalFunction:
        token = self.current
        if token.kind == "integer":
            self._advance()
            return RationalFunction.constant(int(token.text))
        if token.kind == "name":
            self._advance()
            if token.text not in self.parameters:
                raise UnknownSymbolError(token.text, token.position)
            return RationalFunction.parameter(token.text)
        if token.text == "(":
            self._advance()
            value = self._expr()
            self._expect(")")
            return value
        if token.text == "-":
            self._advance()
            return -self._base()
        found = token.text or "end of input"
        raise ExpressionSyntaxError(f"Unexpected '{found}'", token.position)


def parse_scalar(text: str, parameters: Sequence[str] = ()) -> RationalFunction:
    """
    Parse an expression into an exact rational function.

    Args:
        text: Expression in the radicand grammar
        parameters: Names allowed as symbols

    Returns:
        Canonical RationalFunction
    """
    return ExpressionParser(text, parameters).parse()


def _number_text(value) -> str:
    fraction = to_fraction(value)
    if fraction.denominator == 1:
        return str(fraction.numerator)
    return f"{fraction.numerator}/{fraction.denominator}"


def _polynomial_text(expression: sp.Expr, symbols: List[sp.Symbol]) -> str:
    if not symbols:
        return _number_text(expression)

    parts: List[str] = []
    for monom, coefficient in sp.Poly(expression, *symbols).terms():
        value = to_fraction(coefficient)
        powers = [
            symbol.name if exponent == 1 else f"{symbol.name}^{exponent}"
            for symbol, exponent in zip(symbols, monom)
            if exponent
        ]
        magnitude = abs(value)
        if powers and magnitude == 1:
            body = "*".join(powers)
        else:
            body = "*".join([_number_text(magnitude)] + powers)

        if not parts:
            # unary minus binds tighter than '^', keep it on a numeric literal
            if value < 0:
                body = f"-1*{body}" if powers and magnitude == 1 else f"-{body}"
            parts.append(body)
        else:
            parts.append(f"- {body}" if value < 0 else f"+ {body}")
    return " ".join(parts)


def serialize(function: RationalFunction) -> str:
    """Render a rational function as text that parse_scalar reads back"""
    symbols = [sp.Symbol(name) for name in function.parameters]
    numerator = _polynomial_text(function.numerator, symbols)
    if function.denominator == 1:
        return numerator
    denominator = _polynomial_text(function.denominator, symbols)
    return f"({numerator})/({denominator})"
