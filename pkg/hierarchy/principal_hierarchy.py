"""
Principal Hierarchy Module
Hamiltonian densities h_[p,a] from the recursion d_i d_j h_[p,a+1] = c^l_ij d_l h_[p,a],
integrated exactly with zero integration constants at the origin
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np
import sympy as sp
from loguru import logger

from core.exceptions import CompatibilityError
from core.rational_function import to_fraction
from frobenius.potentials import evaluate_polynomial_grid
from hierarchy.poly_frobenius import PolyFrobenius
from utils.config import settings
from utils.metrics import record_check


def _rational(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


@dataclass
class HierarchyLevel:
    """Density h_[p,alpha] and its vector field X = eta^-1 dh (p is 1-based)"""

    family: int
    level: int
    density: sp.Poly
    vector_field: List[sp.Poly]

    def gradient(self) -> List[sp.Poly]:
        return [self.density.diff(symbol) for symbol in self.density.gens]

    def gradient_on(self, values: np.ndarray) -> np.ndarray:
        """dh at every grid row, shape (N, n)"""
        return np.column_stack([evaluate_polynomial_grid(poly, values) for poly in self.gradient()])

    def density_terms(self) -> Dict[str, Fraction]:
        """Monomial text -> coefficient"""
        terms = {}
        for monom, coefficient in self.density.terms():
            factors = [
                f"{symbol}^{power}" if power > 1 else str(symbol)
                for symbol, power in zip(self.density.gens, monom)
                if power
            ]
            terms["*".join(factors) or "1"] = to_fraction(coefficient)
        return terms

    def to_dict(self) -> Dict:
        return {"family": self.family, "level": self.level, "density": self.density_terms()}


def _vector_field(data: PolyFrobenius, density: sp.Poly) -> List[sp.Poly]:
    gradient = [density.diff(symbol) for symbol in data.symbols]
    n = data.dimension
    field_components = []
    for i in range(n):
        total = sp.Poly(0, *data.symbols, domain="QQ")
        for l in range(n):
            if data.metric_inverse[i, l] != 0:
                total = total + gradient[l] * _rational(data.metric_inverse[i, l])
        field_components.append(total)
    return field_components


def base_level(data: PolyFrobenius, family: int) -> HierarchyLevel:
    """h_[p,-1] = eta_pl u^l"""
    row = data.metric[family - 1]
    density = sp.Poly(
        sum((_rational(row[l]) * symbol for l, symbol in enumerate(data.symbols)), sp.Integer(0)),
        *data.symbols,
        domain="QQ",
    )
    return HierarchyLevel(family, -1, density, _vector_field(data, density))


def prescribed_hessian(data: PolyFrobenius, density: sp.Poly) -> List[List[sp.Poly]]:
    """H_ij = c^l_ij d_l h"""
    n = data.dimension
    gradient = [density.diff(symbol) for symbol in data.symbols]
    c = data.structure_polynomials
    return [
        [sum((c[l][i][j] * gradient[l] for l in range(n)), sp.Poly(0, *data.symbols, domain="QQ")) for j in range(n)]
        for i in range(n)
    ]


def _check_compatibility(data: PolyFrobenius, hessian: List[List[sp.Poly]]) -> None:
    n = data.dimension
    for i in range(n):
        for j in range(i + 1, n):
            if hessian[i][j] != hessian[j][i]:
                raise CompatibilityError(i, j, "prescribed Hessian is not symmetric")
    for k in range(n):
        for i in range(k + 1, n):
            for j in range(n):
                if hessian[i][j].diff(data.symbols[k]) != hessian[k][j].diff(data.symbols[i]):
                    raise CompatibilityError(i, k, f"column {j} of the Hessian is not closed")


def _homotopy(contracted: sp.Poly) -> sp.Poly:
    """
    int_0^1 f_i(tu) u^i dt given the contraction f_i(u) u^i.

    A term of f of degree d becomes a term of degree d + 1 in the
    contraction and is divided by d + 1.
    """
    if contracted.is_zero:
        return contracted
    symbols = contracted.gens
    total = sp.Integer(0)
    for monom, coefficient in contracted.terms():
        degree = sum(monom)
        total += coefficient * sp.Mul(*[s**e for s, e in zip(symbols, monom)]) / degree
    return sp.Poly(total, *symbols, domain="QQ")


def integrate_hessian(data: PolyFrobenius, hessian: List[List[sp.Poly]]) -> sp.Poly:
    """
    Unique polynomial h with Hessian H, h(0) = 0 and dh(0) = 0.

    Radial homotopy twice: g_j = int_0^1 H_ij(tu) u^i dt, then
    h = int_0^1 g_j(tu) u^j dt.
    """
    coordinates = [sp.Poly(symbol, *data.symbols, domain="QQ") for symbol in data.symbols]
    zero = sp.Poly(0, *data.symbols, domain="QQ")
    n = data.dimension
    gradient = [
        _homotopy(sum((hessian[i][j] * coordinates[i] for i in range(n)), zero)) for j in range(n)
    ]
    return _homotopy(sum((gradient[j] * coordinates[j] for j in range(n)), zero))


def recursion_step(data: PolyFrobenius, level: HierarchyLevel) -> HierarchyLevel:
    """
    Next density of the same family.

    Raises:
        CompatibilityError: the prescribed Hessian is not symmetric or not closed
    """
    hessian = prescribed_hessian(data, level.density)
    _check_compatibility(data, hessian)
    density = integrate_hessian(data, hessian)
    for i in range(data.dimension):
        for j in range(data.dimension):
            if density.diff(data.symbols[i]).diff(data.symbols[j]) != hessian[i][j]:
                raise CompatibilityError(i, j, "integrated density does not reproduce the Hessian")
    logger.debug(f"h[{level.family},{level.level + 1}] has {len(density.terms())} terms")
    return HierarchyLevel(level.family, level.level + 1, density, _vector_field(data, density))


def build_hierarchy(data: PolyFrobenius, levels: Optional[int] = None) -> Dict[int, List[HierarchyLevel]]:
    """Levels -1..levels for every family p = 1..n"""
    levels = settings.hierarchy_levels if levels is None else levels
    hierarchy = {}
    for family in range(1, data.dimension + 1):
        chain = [base_level(data, family)]
        for _ in range(levels + 1):
            chain.append(recursion_step(data, chain[-1]))
        hierarchy[family] = chain
    logger.info(f"Principal hierarchy of '{data.name}' built through level {levels}")
    return hierarchy


@dataclass
class RecursionCheck:
    family: int
    level: int
    passed: bool
    witness: Optional[str] = None
    closure: bool = True

    def to_dict(self) -> Dict:
        result = {"family": self.family, "level": self.level, "passed": self.passed, "closure": self.closure}
        if self.witness:
            result["witness"] = self.witness
        return result


def _first_difference(first: sp.Poly, second: sp.Poly) -> Optional[str]:
    difference = first - second
    if difference.is_zero:
        return None
    monom, coefficient = difference.terms()[0]
    return f"{sp.Mul(*[s**e for s, e in zip(first.gens, monom)])} (off by {coefficient})"


def verify_recursion(data: PolyFrobenius, hierarchy: Dict[int, List[HierarchyLevel]]) -> List[RecursionCheck]:
    """
    Re-differentiate every density and compare with the recursion
    coefficient by coefficient; also confirm eta X = dh.
    """
    checks: List[RecursionCheck] = []
    n = data.dimension
    for family, chain in sorted(hierarchy.items()):
        for previous, current in zip(chain, chain[1:]):
            hessian = prescribed_hessian(data, previous.density)
            witness = None
            for i in range(n):
                for j in range(n):
                    actual = current.density.diff(data.symbols[i]).diff(data.symbols[j])
                    difference = _first_difference(actual, hessian[i][j])
                    if difference and witness is None:
                        witness = f"d{i + 1}d{j + 1} h: {difference}"
            closure = _closure_holds(data, current)
            checks.append(RecursionCheck(family, current.level, witness is None and closure, witness, closure))
    passed = all(check.passed for check in checks)
    record_check("recursion", passed)
    logger.bind(CHECK=True).info(f"recursion '{data.name}': {'holds' if passed else 'fails'} ({len(checks)} levels)")
    return checks


def _closure_holds(data: PolyFrobenius, level: HierarchyLevel) -> bool:
    """eta_il X^i == d_l h"""
    for l in range(data.dimension):
        lowered = sp.Poly(0, *data.symbols, domain="QQ")
        for i in range(data.dimension):
            if data.metric[i, l] != 0:
                lowered = lowered + level.vector_field[i] * _rational(data.metric[i, l])
        if lowered != level.density.diff(data.symbols[l]):
            return False
    return True
