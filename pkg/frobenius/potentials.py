"""
Potential Sources
Third and fourth derivatives of the Frobenius potential, exact at rational
points and vectorized over floating grids
"""
from fractions import Fraction
from typing import List, Sequence

import numpy as np
import sympy as sp

from core.covector_system import CovectorSystem
from core.exact_linalg import fraction_vector
from core.exceptions import HyperplaneHitError
from core.rational_function import to_fraction


class CovectorPotential:
    """
    F = 1/2 sum alpha(u)^2 log alpha(u) for alpha = sqrt(r) v.

    Only derivatives of order three and four are used; both are rational:
    d3F_ijk = sum r v_i v_j v_k / v(u) and d4F_mijk = -sum r v_m v_i v_j v_k / v(u)^2.
    """

    def __init__(self, system: CovectorSystem):
        self.system = system
        self.directions = system.direction_matrix()
        self.radicands = system.radicand_vector()
        self.float_directions = self.directions.astype(float)
        self.float_radicands = self.radicands.astype(float)

    @property
    def dimension(self) -> int:
        return self.system.dimension

    def linear_forms(self, point: Sequence[Fraction]) -> np.ndarray:
        """v_alpha(u) for every covector; raises on a hyperplane hit"""
        values = self.directions @ fraction_vector(point)
        for covector, value in zip(self.system.covectors, values):
            if value == 0:
                raise HyperplaneHitError(covector.label)
        return values

    def is_admissible(self, point: Sequence[Fraction]) -> bool:
        try:
            self.linear_forms(point)
        except HyperplaneHitError:
            return False
        return True

    def third_derivatives(self, point: Sequence[Fraction]) -> np.ndarray:
        weights = self.radicands / self.linear_forms(point)
        v = self.directions
        return np.einsum("a,ai,aj,ak->ijk", weights, v, v, v)

    def fourth_derivatives(self, point: Sequence[Fraction]) -> np.ndarray:
        values = self.linear_forms(point)
        weights = -self.radicands / (values * values)
        v = self.directions
        return np.einsum("a,am,ai,aj,ak->mijk", weights, v, v, v, v)

    def linear_forms_grid(self, values: np.ndarray) -> np.ndarray:
        forms = values @ self.float_directions.T
        if np.any(forms == 0):
            raise HyperplaneHitError("grid")
        return forms


def evaluate_polynomial(polynomial: sp.Poly, point: Sequence[Fraction]) -> Fraction:
    """Exact value of a polynomial at a rational point"""
    total = Fraction(0)
    for monom, coefficient in polynomial.terms():
        term = to_fraction(coefficient)
        for value, exponent in zip(point, monom):
            if exponent:
                term *= Fraction(value) ** exponent
        total += term
    return total


def evaluate_polynomial_grid(polynomial: sp.Poly, values: np.ndarray) -> np.ndarray:
    """Floating values of a polynomial at every grid row"""
    total = np.zeros(values.shape[0])
    for monom, coefficient in polynomial.terms():
        term = np.full(values.shape[0], float(to_fraction(coefficient)))
        for column, exponent in enumerate(monom):
            if exponent:
                term = term * values[:, column] ** exponent
        total = total + term
    return total


class PolynomialPotential:
    """Polynomial F in flat coordinates u1..un"""

    def __init__(self, potential: sp.Expr, symbols: Sequence[sp.Symbol]):
        self.potential = sp.expand(potential)
        self.symbols = list(symbols)
        n = len(self.symbols)
        self.third: List = [
            [[self._poly(sp.diff(self.potential, self.symbols[i], self.symbols[j], self.symbols[k]))
              for k in range(n)] for j in range(n)] for i in range(n)
        ]

    @property
    def dimension(self) -> int:
        return len(self.symbols)

    def _poly(self, expression: sp.Expr) -> sp.Poly:
        return sp.Poly(expression, *self.symbols, domain="QQ")

    def is_admissible(self, point: Sequence[Fraction]) -> bool:
        return True

    def third_derivatives(self, point: Sequence[Fraction]) -> np.ndarray:
        n = self.dimension
        result = np.empty((n, n, n), dtype=object)
        for index in np.ndindex(n, n, n):
            i, j, k = index
            result[index] = evaluate_polynomial(self.third[i][j][k], point)
        return result

    def fourth_derivatives(self, point: Sequence[Fraction]) -> np.ndarray:
        n = self.dimension
        result = np.empty((n, n, n, n), dtype=object)
        for index in np.ndindex(n, n, n, n):
            m, i, j, k = index
            result[index] = evaluate_polynomial(
                self.third[i][j][k].diff(self.symbols[m]), point
            )
        return result

    def third_derivatives_grid(self, values: np.ndarray) -> np.ndarray:
        n = self.dimension
        result = np.empty((values.shape[0], n, n, n))
        for i, j, k in np.ndindex(n, n, n):
            result[:, i, j, k] = evaluate_polynomial_grid(self.third[i][j][k], values)
        return result
