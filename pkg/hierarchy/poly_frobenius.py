"""
Polynomial Frobenius Structures
Constant metric plus polynomial potential in flat coordinates, with the
structure constants kept as exact polynomial tensors
"""
import itertools
from functools import cached_property
from typing import Callable, Dict, List, Sequence

import sympy as sp
from loguru import logger

from core.exact_linalg import fraction_matrix
from core.exceptions import UnknownBuiltinError, WDVVFailureError
from frobenius.potentials import PolynomialPotential
from frobenius.structure import FrobeniusData, check_associativity_at
from utils.metrics import record_check


class PolyFrobenius(FrobeniusData):
    """FrobeniusData whose potential is a polynomial; c = eta^-1 d3F"""

    @property
    def symbols(self) -> List[sp.Symbol]:
        return self.potential.symbols

    @cached_property
    def structure_polynomials(self) -> List[List[List[sp.Poly]]]:
        """c[i][j][k] as polynomials over QQ"""
        n = self.dimension
        third = self.potential.third
        zero = sp.Poly(0, *self.symbols, domain="QQ")
        result = []
        for i in range(n):
            rows = []
            for j in range(n):
                entries = []
                for k in range(n):
                    total = zero
                    for l in range(n):
                        coefficient = self.metric_inverse[i, l]
                        if coefficient != 0:
                            total = total + third[l][j][k] * sp.Rational(
                                coefficient.numerator, coefficient.denominator
                            )
                    entries.append(total)
                rows.append(entries)
            result.append(rows)
        return result

    @property
    def degree(self) -> int:
        return max(
            (max(entry.total_degree(), 0) for plane in self.structure_polynomials for row in plane for entry in row),
            default=0,
        )

    def to_dict(self) -> Dict:
        return {**super().to_dict(), "potential": str(self.potential.potential)}


def verify_wdvv(data: PolyFrobenius) -> None:
    """
    Commutativity of the multiplication matrices as a polynomial identity.

    The commutators have degree at most 2d in each variable, so vanishing on
    the grid {0..2d}^n proves them zero.

    Raises:
        WDVVFailureError: some commutator is nonzero on the grid
    """
    span = range(2 * data.degree + 1)
    checked = 0
    for point in itertools.product(span, repeat=data.dimension):
        checked += 1
        if not check_associativity_at(data, point):
            record_check("wdvv", False)
            raise WDVVFailureError(f"'{data.name}': multiplication matrices do not commute at {point}")
    record_check("wdvv", True)
    logger.debug(f"WDVV verified for '{data.name}' on {checked} grid points")


def poly_frobenius(
    metric: Sequence[Sequence], potential: sp.Expr, symbols: Sequence[sp.Symbol], name: str = "", verify: bool = True
) -> PolyFrobenius:
    data = PolyFrobenius(fraction_matrix(metric), PolynomialPotential(potential, symbols), None, (), name)
    if verify:
        verify_wdvv(data)
    return data


def _kdv2d() -> PolyFrobenius:
    u1, u2 = sp.symbols("u1 u2")
    potential = sp.Rational(1, 2) * u1**2 * u2 + u2**4 / 24
    return poly_frobenius([[0, 1], [1, 0]], potential, [u1, u2], "kdv2d")


def _trivial1d() -> PolyFrobenius:
    u1 = sp.Symbol("u1")
    return poly_frobenius([[1]], u1**3 / 6, [u1], "trivial1d")


POLY_BUILTINS: Dict[str, Callable[[], PolyFrobenius]] = {
    "kdv2d": _kdv2d,
    "trivial1d": _trivial1d,
}


def builtin_poly_frobenius(name: str) -> PolyFrobenius:
    try:
        factory = POLY_BUILTINS[name]
    except KeyError:
        raise UnknownBuiltinError(name) from None
    return factory()
