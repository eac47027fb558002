"""
Frobenius Structure Module
Structure constants of the induced product and exact point checks:
potentiality, associativity, invariance, compatibility with the flat
connection, Hertling-Manin condition and unity
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from core.covector_system import CovectorSystem
from core.exact_linalg import (
    bareiss_inverse,
    exact_equal,
    fraction_matrix,
    identity,
    is_symmetric,
    is_zero,
    to_float,
)
from core.exceptions import SingularMatrixError, UnitlessProductError, VeeInsightError
from core.vee_checker import gram_metric, require_nonsingular
from frobenius.potentials import CovectorPotential, PolynomialPotential

Potential = Union[CovectorPotential, PolynomialPotential]


@dataclass
class FrobeniusData:
    """
    Metric plus the source of the product.

    For covector sources the structure constants use the closed form
    c^i_jk = sum r v_j v_k Y^i / v(u) with check-vector cores Y (rows of
    ``check_vectors``); polynomial sources use c = eta^-1 d3F.
    """

    metric: np.ndarray
    potential: Potential
    check_vectors: Optional[np.ndarray] = None
    dropped: Tuple[str, ...] = ()
    name: str = ""
    metric_inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.metric = np.asarray(self.metric, dtype=object)
        if not is_symmetric(self.metric):
            raise VeeInsightError("Metric must be symmetric")
        try:
            self.metric_inverse = bareiss_inverse(self.metric)
        except SingularMatrixError as e:
            raise SingularMatrixError(e.rank, e.size, f"Metric of '{self.name}' is singular") from None

    @classmethod
    def from_covector_system(cls, system: CovectorSystem) -> "FrobeniusData":
        """Non-degenerate case: the metric is the Gram metric"""
        gram = require_nonsingular(system, gram_metric(system))
        checks = (gram.inverse @ system.direction_matrix().T).T
        return cls(gram.matrix, CovectorPotential(system), checks, system.dropped, system.name)

    @classmethod
    def from_polynomial(cls, metric, potential: PolynomialPotential, name: str = "") -> "FrobeniusData":
        return cls(fraction_matrix(metric), potential, None, (), name)

    @property
    def dimension(self) -> int:
        return self.metric.shape[0]

    @property
    def covector_system(self) -> Optional[CovectorSystem]:
        if isinstance(self.potential, CovectorPotential):
            return self.potential.system
        return None

    @property
    def uses_gram_metric(self) -> bool:
        """True when the metric equals sum r v v^T of the source covectors"""
        system = self.covector_system
        return system is not None and exact_equal(gram_metric(system).matrix, self.metric)

    def is_admissible(self, point: Sequence[Fraction]) -> bool:
        return self.potential.is_admissible(point)

    def with_metric(self, metric) -> "FrobeniusData":
        """Same source and check-vectors with another metric"""
        return FrobeniusData(fraction_matrix(metric), self.potential, self.check_vectors, self.dropped, self.name)

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "metric": self.metric,
            "droppedCovectors": list(self.dropped),
        }


def structure_constants_at(data: FrobeniusData, point: Sequence[Fraction]) -> np.ndarray:
    """c[i, j, k] = c^i_jk(u), exact"""
    if data.check_vectors is not None:
        potential = data.potential
        weights = potential.radicands / potential.linear_forms(point)
        v = potential.directions
        return np.einsum("a,aj,ak,ai->ijk", weights, v, v, data.check_vectors)
    return np.einsum("il,ljk->ijk", data.metric_inverse, data.potential.third_derivatives(point))


def third_deriv_potential_at(data: FrobeniusData, point: Sequence[Fraction]) -> np.ndarray:
    return data.potential.third_derivatives(point)


def d_structure_constants_at(data: FrobeniusData, point: Sequence[Fraction]) -> np.ndarray:
    """dc[m, i, j, k] = d_m c^i_jk(u), exact"""
    if data.check_vectors is not None:
        potential = data.potential
        values = potential.linear_forms(point)
        weights = -potential.radicands / (values * values)
        v = potential.directions
        return np.einsum("a,am,aj,ak,ai->mijk", weights, v, v, v, data.check_vectors)
    return np.einsum("il,mljk->mijk", data.metric_inverse, data.potential.fourth_derivatives(point))


def structure_constants_grid(data: FrobeniusData, values: np.ndarray) -> np.ndarray:
    """Floating c^i_jk at every row of an N x n array: shape (N, n, n, n)"""
    if data.check_vectors is not None:
        potential = data.potential
        weights = potential.float_radicands / potential.linear_forms_grid(values)
        v = potential.float_directions
        return np.einsum("xa,aj,ak,ai->xijk", weights, v, v, to_float(data.check_vectors))
    third = data.potential.third_derivatives_grid(values)
    return np.einsum("il,xljk->xijk", to_float(data.metric_inverse), third)


# Tensor-level predicates


def associativity_holds(c: np.ndarray) -> bool:
    """Multiplication matrices (C_a)^i_j = c^i_aj pairwise commute"""
    n = c.shape[0]
    matrices = [c[:, a, :] for a in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if not is_zero(matrices[a] @ matrices[b] - matrices[b] @ matrices[a]):
                return False
    return True


def invariance_holds(inverse_metric: np.ndarray, c: np.ndarray) -> bool:
    """g^lm c^j_hm = g^jm c^l_hm"""
    lowered = np.einsum("lm,jhm->ljh", inverse_metric, c)
    return exact_equal(lowered, lowered.transpose(1, 0, 2))


def nabla_c_symmetric(dc: np.ndarray) -> bool:
    """d_m c^i_jl = d_j c^i_ml"""
    return exact_equal(dc, dc.transpose(2, 1, 0, 3))


def hertling_manin_expression(c: np.ndarray, dc: np.ndarray) -> np.ndarray:
    """Six-term Hertling-Manin tensor, indices (k, l, q, s, t)"""
    return (
        np.einsum("mtl,mkqs->klqst", c, dc)
        - np.einsum("mktl,mqs->klqst", dc, c)
        + np.einsum("qmtl,kms->klqst", dc, c)
        + np.einsum("smtl,kmq->klqst", dc, c)
        - np.einsum("lmqs,ktm->klqst", dc, c)
        - np.einsum("tmqs,klm->klqst", dc, c)
    )


# Point checks


def check_potentiality_at(data: FrobeniusData, point: Sequence[Fraction]) -> bool:
    """eta_il c^l_jk(u) == d3F_ijk(u)"""
    lowered = np.einsum("il,ljk->ijk", data.metric, structure_constants_at(data, point))
    return exact_equal(lowered, third_deriv_potential_at(data, point))


def check_associativity_at(data: FrobeniusData, point: Sequence[Fraction]) -> bool:
    return associativity_holds(structure_constants_at(data, point))


def check_invariance_at(data: FrobeniusData, point: Sequence[Fraction]) -> bool:
    return invariance_holds(data.metric_inverse, structure_constants_at(data, point))


def check_nabla_c_symmetry_at(data: FrobeniusData, point: Sequence[Fraction]) -> bool:
    return nabla_c_symmetric(d_structure_constants_at(data, point))


def check_hertling_manin_at(data: FrobeniusData, point: Sequence[Fraction]) -> bool:
    c = structure_constants_at(data, point)
    dc = d_structure_constants_at(data, point)
    return is_zero(hertling_manin_expression(c, dc))


def check_unity_at(data: FrobeniusData, point: Sequence[Fraction], mu: Fraction) -> bool:
    """
    Check that u / mu is the unity of the product at u.

    Raises:
        UnitlessProductError: mu == 0 (degenerate product without unity)
    """
    if mu == 0:
        raise UnitlessProductError("Scale factor 0: the product has no unity")
    c = structure_constants_at(data, point)
    euler = np.array([Fraction(value) / mu for value in point], dtype=object)
    return exact_equal(np.einsum("ijk,k->ij", c, euler), identity(data.dimension))


def endomorphism_sum(data: FrobeniusData) -> np.ndarray:
    """sum r Y v^T over the source covectors"""
    potential = data.potential
    if data.check_vectors is None:
        raise VeeInsightError("Endomorphism sum needs a covector source")
    weighted = (data.check_vectors.T * potential.radicands)
    return weighted @ potential.directions


def unity_scale(data: FrobeniusData) -> Optional[Fraction]:
    """mu with sum rho = mu Id, or None when the product has no such unity"""
    if data.check_vectors is None:
        return None
    total = endomorphism_sum(data)
    mu = total[0, 0]
    if mu == 0 or not exact_equal(total, mu * identity(data.dimension)):
        return None
    return mu


CHECKS = {
    "potentiality": check_potentiality_at,
    "associativity": check_associativity_at,
    "invariance": check_invariance_at,
    "nabla_c_symmetry": check_nabla_c_symmetry_at,
    "hertling_manin": check_hertling_manin_at,
}


@dataclass
class PointReport:
    """Outcome of every Frobenius check at one point"""

    index: int
    point: Tuple[Fraction, ...]
    results: Dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def to_dict(self) -> Dict:
        return {"index": self.index, "point": list(self.point), **self.results}


def run_point_checks(
    data: FrobeniusData, points: Sequence[Sequence[Fraction]], checks: Optional[List[str]] = None
) -> List[PointReport]:
    """Evaluate the selected checks at every point, in order"""
    names = checks or list(CHECKS)
    mu = unity_scale(data)
    reports = []
    for index, point in enumerate(points):
        results = {name: CHECKS[name](data, point) for name in names}
        if mu is not None and checks is None:
            results["unity"] = check_unity_at(data, point, mu)
        reports.append(PointReport(index, tuple(point), results))
    failed = sum(not report.passed for report in reports)
    if failed:
        logger.warning(f"'{data.name}': {failed}/{len(reports)} sample points failed")
    return reports
