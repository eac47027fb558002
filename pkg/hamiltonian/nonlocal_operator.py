"""
Non-local Operator Module
Purely non-local Hamiltonian operator sum w (X o u_x) d^-1 (X o u_x) on
discrete loops, its coefficient-table form and skew-symmetry tests
"""
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from core.exact_linalg import is_symmetric, to_float
from core.exceptions import HyperplaneHitError, MeanNotZeroError, VeeInsightError
from frobenius.structure import FrobeniusData, structure_constants_grid
from hamiltonian.loop_grid import LoopGrid
from hamiltonian.poisson_conditions import AffinorSet
from utils.config import settings


@dataclass
class NonlocalOperator:
    """
    Operator of one Frobenius structure.

    ``coefficient_table[b, g] = r_b r_g v_b^T eta^-1 v_g`` and
    ``check_table[b] = eta^-1 v_b`` exist only for covector sources.
    """

    data: FrobeniusData
    affinors: AffinorSet
    coefficient_table: Optional[np.ndarray] = None
    check_table: Optional[np.ndarray] = None

    @property
    def has_double_sum(self) -> bool:
        return self.coefficient_table is not None

    def to_dict(self) -> Dict:
        result = {"name": self.data.name, **self.affinors.to_dict()}
        if self.has_double_sum:
            result["coefficientTable"] = self.coefficient_table
        return result


def assemble_nonlocal_operator(data: FrobeniusData) -> NonlocalOperator:
    affinors = AffinorSet.from_frobenius(data)
    system = data.covector_system
    if system is None or data.check_vectors is None:
        return NonlocalOperator(data, affinors)
    radicands = system.radicand_vector()
    directions = system.direction_matrix()
    pairing = directions @ data.metric_inverse @ directions.T
    table = np.outer(radicands, radicands) * pairing
    if not is_symmetric(table):
        raise VeeInsightError("Coefficient table is not symmetric")
    logger.debug(f"Assembled operator for '{data.name}': {len(affinors)} affinors, {len(system)} covectors")
    return NonlocalOperator(data, affinors, table, data.check_vectors)


def require_admissible_loop(data: FrobeniusData, loop: LoopGrid) -> None:
    """Every covector keeps one sign along the loop"""
    system = data.covector_system
    if system is None or not len(system):
        return
    forms = data.potential.linear_forms_grid(loop.values)
    for index, covector in enumerate(system.covectors):
        column = forms[:, index]
        if not (np.all(column > 0) or np.all(column < 0)):
            raise HyperplaneHitError(covector.label)


def _check_means(integrands: np.ndarray, tolerance: Optional[float]) -> None:
    """integrands has shape (N, k); means are compared relative to their size"""
    tolerance = settings.mean_tolerance if tolerance is None else tolerance
    means = integrands.mean(axis=0)
    scale = max(1.0, float(np.max(np.abs(integrands)))) if integrands.size else 1.0
    for index, mean in enumerate(means):
        if abs(mean) > tolerance * scale:
            raise MeanNotZeroError(index, float(mean))


def multiplication_by_u_x(data: FrobeniusData, loop: LoopGrid) -> np.ndarray:
    """M[x, l, j] = c^j_lk(u(x)) u_x^k(x)"""
    c = structure_constants_grid(data, loop.values)
    return np.einsum("xjlk,xk->xlj", c, loop.u_x)


def apply_nonlocal(
    operator: NonlocalOperator,
    loop: LoopGrid,
    g: np.ndarray,
    anchors: Optional[np.ndarray] = None,
    tolerance: Optional[float] = None,
) -> np.ndarray:
    """
    P g on the grid, affinor form.

    Each integrand s_a = (X_a o u_x)^T g must have mean zero. Its
    antiderivative is the zero-mean branch unless ``anchors[a]`` pins its
    value at grid point 0.

    Raises:
        MeanNotZeroError: integrand a has a nonzero mean
    """
    require_admissible_loop(operator.data, loop)
    w = operator.affinors.on_grid(structure_constants_grid(operator.data, loop.values))
    images = np.einsum("axij,xj->axi", w, loop.u_x)
    integrands = np.einsum("axi,xi->xa", images, g)
    _check_means(integrands, tolerance)
    antiderivatives = loop.antiderivative(integrands)
    if anchors is not None:
        antiderivatives = antiderivatives + (np.asarray(anchors, dtype=float) - antiderivatives[0])
    weights = to_float(operator.affinors.weight_vector)
    return np.einsum("a,axi,xa->xi", weights, images, antiderivatives)


def apply_double_sum(
    operator: NonlocalOperator,
    loop: LoopGrid,
    g: np.ndarray,
    tolerance: Optional[float] = None,
) -> np.ndarray:
    """
    P g from the coefficient table:
    sum_{b,c} C(b,c) (d_x log b(u)) d^-1[(d_x log c(u)) <eta^-1 v_c, g>] eta^-1 v_b
    """
    if not operator.has_double_sum:
        raise VeeInsightError(f"'{operator.data.name}' has no covector source")
    require_admissible_loop(operator.data, loop)
    directions = operator.data.potential.float_directions
    logs = (loop.u_x @ directions.T) / (loop.values @ directions.T)
    checks = to_float(operator.check_table)
    inner = logs * (g @ checks.T)
    integrands = inner @ to_float(operator.coefficient_table).T
    _check_means(integrands, tolerance)
    antiderivatives = loop.antiderivative(integrands)
    return np.einsum("xb,xb,bi->xi", logs, antiderivatives, checks)


def skew_symmetry_test(
    operator: NonlocalOperator, loop: LoopGrid, f: np.ndarray, g: np.ndarray, tolerance: Optional[float] = None
) -> float:
    """|<f, P g> + <g, P f>| over the period"""
    pg = apply_nonlocal(operator, loop, g, tolerance=tolerance)
    pf = apply_nonlocal(operator, loop, f, tolerance=tolerance)
    return float(abs(loop.integrate(np.sum(f * pg, axis=1)) + loop.integrate(np.sum(g * pf, axis=1))))


def forms_disagreement(
    operator: NonlocalOperator, loop: LoopGrid, g: np.ndarray, tolerance: Optional[float] = None
) -> float:
    """Sup-norm difference of the two evaluations relative to their size"""
    affinor_form = apply_nonlocal(operator, loop, g, tolerance=tolerance)
    table_form = apply_double_sum(operator, loop, g, tolerance=tolerance)
    scale = max(1.0, float(np.max(np.abs(affinor_form))))
    return float(np.max(np.abs(affinor_form - table_form))) / scale


def metric_gradient(data: FrobeniusData, loop: LoopGrid) -> np.ndarray:
    """Variational derivative of the quadratic density u^T eta u / 2, i.e. eta u"""
    return loop.values @ to_float(data.metric).T


def project_mean_zero(data: FrobeniusData, loop: LoopGrid, f0: np.ndarray) -> np.ndarray:
    """
    Subtract from f0 a combination of the rows of M = c u_x so that the
    vector field z = M f has zero mean, which makes every integrand of P f
    mean-zero.
    """
    m = multiplication_by_u_x(data, loop)
    z = np.einsum("xlj,xj->xl", m, f0)
    gram = np.einsum("xlj,xbj->lb", m, m) / loop.size
    kappa, *_ = np.linalg.lstsq(gram, z.mean(axis=0), rcond=None)
    return f0 - np.einsum("b,xbj->xj", kappa, m)


def random_covector_field(loop: LoopGrid, rng: np.random.Generator, modes: int = 3) -> np.ndarray:
    """Smooth random covector field with a few Fourier modes per component"""
    x = loop.points
    field = rng.normal(size=loop.dimension) * np.ones((loop.size, loop.dimension))
    for m in range(1, modes + 1):
        field += np.outer(np.cos(m * x), rng.normal(size=loop.dimension))
        field += np.outer(np.sin(m * x), rng.normal(size=loop.dimension))
    return field


@dataclass
class LoopTestResult:
    index: int
    agreement: float
    skew_residual: float
    gradient_norm: float

    def to_dict(self) -> Dict:
        return {
            "loop": self.index,
            "formDisagreement": self.agreement,
            "skewResidual": self.skew_residual,
            "gradientNorm": self.gradient_norm,
        }


def run_loop_tests(
    operator: NonlocalOperator,
    loops: List[LoopGrid],
    rng: np.random.Generator,
    pairs_per_loop: int = 10,
    mean_tolerance: Optional[float] = None,
) -> List[LoopTestResult]:
    """
    Form agreement on eta u and the skew residual over projected random
    covector pairs, loop by loop. mean_tolerance overrides the setting of
    the same name for every integrand.
    """
    results = []
    for index, loop in enumerate(loops):
        gradient = metric_gradient(operator.data, loop)
        agreement = forms_disagreement(operator, loop, gradient, mean_tolerance) if operator.has_double_sum else 0.0
        residual = 0.0
        for _ in range(pairs_per_loop):
            f = project_mean_zero(operator.data, loop, random_covector_field(loop, rng))
            g = project_mean_zero(operator.data, loop, random_covector_field(loop, rng))
            residual = max(residual, skew_symmetry_test(operator, loop, f, g, mean_tolerance))
        norm = float(np.max(np.abs(apply_nonlocal(operator, loop, gradient, tolerance=mean_tolerance))))
        results.append(LoopTestResult(index, agreement, residual, norm))
    return results
