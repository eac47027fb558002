"""
Regularization Module
Limits of degenerate one-parameter families: rescaled Gram metric and
surviving covectors
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import sympy as sp
from loguru import logger

from core.covector_system import CovectorSystem, ScaledCovector, substitute_parameters
from core.exact_linalg import bareiss_inverse, fraction_matrix
from core.exceptions import (
    NonRegularizableError,
    RadicandPoleError,
    RegularizationError,
    SingularMatrixError,
    UnboundParameterError,
)
from core.expression_parser import parse_scalar
from core.rational_function import RationalFunction, to_fraction, valuation_at
from core.vee_checker import gram_metric_symbolic
from frobenius.potentials import CovectorPotential
from frobenius.structure import FrobeniusData

PATH_PARAMETER = "eps"


def along_locus(
    family: CovectorSystem, parameter: str, expression: Union[str, RationalFunction]
) -> CovectorSystem:
    """
    Reparametrize a family transversally to the locus parameter = expression.

    The parameter is replaced by expression + eps, so the locus is reached at
    eps = 0 and the other parameters stay free.
    """
    if parameter not in family.parameters:
        raise RegularizationError(f"'{parameter}' is not a parameter of '{family.name}'")
    others = [name for name in family.parameters if name != parameter]
    if isinstance(expression, str):
        expression = parse_scalar(expression, others)
    shifted = expression + RationalFunction.parameter(PATH_PARAMETER)
    result = substitute_parameters(family, {parameter: shifted})
    logger.debug(f"Path {parameter} = {expression.to_text()} + {PATH_PARAMETER} on '{family.name}'")
    return CovectorSystem(
        result.dimension, result.covectors, tuple(others) + (PATH_PARAMETER,), family.name
    )


@dataclass
class RegularizedMetric:
    """Symbolic outcome of the limit before binding the remaining parameters"""

    order: int
    matrix: np.ndarray
    survivors: Tuple[ScaledCovector, ...]
    dropped: Tuple[str, ...]
    parameters: Tuple[str, ...]

    def to_dict(self) -> Dict:
        return {
            "order": self.order,
            "metric": self.matrix,
            "droppedCovectors": list(self.dropped),
            "parameters": list(self.parameters),
        }


def regularized_metric(
    family: CovectorSystem,
    parameter: str,
    t0: Fraction,
    scale: Fraction = Fraction(1),
) -> RegularizedMetric:
    """
    eta = scale * lim G(p) / (p - t0)^k with k the minimal entry valuation.

    Raises:
        RegularizationError: G(t0) is finite and nonsingular, or has a pole
        NonRegularizableError: the limit matrix is singular
    """
    if parameter not in family.parameters:
        raise RegularizationError(f"'{parameter}' is not a parameter of '{family.name}'")
    t0 = to_fraction(t0)
    gram = gram_metric_symbolic(family)
    n = family.dimension
    valuations = {
        (i, j): valuation_at(gram[i, j], t0, parameter)
        for i in range(n)
        for j in range(n)
        if not gram[i, j].is_zero()
    }
    if not valuations:
        raise NonRegularizableError("Gram metric vanishes identically")
    order = min(v.order for v in valuations.values())
    if order < 0:
        raise RegularizationError(f"Gram metric has a pole at {parameter} = {t0}")

    matrix = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            valuation = valuations.get((i, j))
            if valuation is None or valuation.order > order:
                matrix[i, j] = RationalFunction.constant(0)
            else:
                matrix[i, j] = valuation.leading_coefficient * scale

    determinant = sp.cancel(sp.Matrix(n, n, lambda i, j: matrix[i, j].as_expr()).det())
    if determinant == 0:
        raise NonRegularizableError(f"Limit metric along {parameter} -> {t0} is singular")
    if order == 0:
        raise RegularizationError(
            f"Gram metric is nonsingular at {parameter} = {t0}; no regularization needed"
        )

    survivors: List[ScaledCovector] = []
    dropped: List[str] = []
    for covector in family.covectors:
        radicand = RationalFunction.coerce(covector.radicand)
        if radicand.is_zero():
            dropped.append(covector.label)
            continue
        valuation = valuation_at(radicand, t0, parameter)
        if valuation.order < 0:
            raise RadicandPoleError(covector.label)
        if valuation.order > 0:
            dropped.append(covector.label)
            continue
        survivors.append(ScaledCovector(valuation.leading_coefficient, covector.direction, covector.label))

    remaining = tuple(name for name in family.parameters if name != parameter)
    logger.info(
        f"Regularized '{family.name}' along {parameter} -> {t0}: order {order}, "
        f"{len(dropped)} covector(s) dropped"
    )
    return RegularizedMetric(order, matrix, tuple(survivors), tuple(dropped), remaining)


def _bind(value: RationalFunction, bindings: Mapping[str, Fraction]) -> Fraction:
    return value.evaluate({name: bindings[name] for name in value.parameters})


def regularize(
    family: CovectorSystem,
    parameter: str,
    t0: Fraction,
    bindings: Optional[Mapping[str, Fraction]] = None,
    scale: Fraction = Fraction(1),
) -> FrobeniusData:
    """
    Frobenius data of a degenerate limit.

    The structure constants are eta^-1 d3F built from the surviving covectors;
    their check-vector cores are eta^-1 v.

    Args:
        family: Parametric system
        parameter: Path parameter
        t0: Limit value of the path parameter
        bindings: Values for every other parameter still free
        scale: Conventional overall factor of the limit metric
    """
    bindings = {name: to_fraction(value) for name, value in (bindings or {}).items()}
    limit = regularized_metric(family, parameter, t0, scale)

    free = set()
    for entry in limit.matrix.flat:
        free.update(entry.parameters)
    for covector in limit.survivors:
        free.update(RationalFunction.coerce(covector.radicand).parameters)
    missing = free - set(bindings)
    if missing:
        raise UnboundParameterError(missing)

    metric = fraction_matrix([[_bind(entry, bindings) for entry in row] for row in limit.matrix])
    survivors = []
    for covector in limit.survivors:
        radicand = RationalFunction.coerce(covector.radicand)
        value = _bind(radicand, bindings)
        if value == 0:
            raise NonRegularizableError(
                f"Radicand of '{covector.label}' vanishes at the chosen parameter values"
            )
        survivors.append(ScaledCovector(value, covector.direction, covector.label))

    system = CovectorSystem(family.dimension, tuple(survivors), (), family.name, limit.dropped)
    try:
        inverse = bareiss_inverse(metric)
    except SingularMatrixError as e:
        raise NonRegularizableError(f"Limit metric has rank {e.rank} at {bindings}") from None
    checks = (inverse @ system.direction_matrix().T).T
    return FrobeniusData(metric, CovectorPotential(system), checks, limit.dropped, family.name)
