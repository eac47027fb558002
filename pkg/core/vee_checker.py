"""
Vee Checker Module
Gram metric, check-vector pairings, plane enumeration and the vee-condition
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
import sympy as sp
from loguru import logger

from core.covector_system import CovectorSystem
from core.exact_linalg import (
    bareiss_inverse,
    fraction_matrix,
    is_zero,
    primitive_direction,
    rref,
    zeros,
)
from core.exceptions import DegenerateGramError, SingularMatrixError, UnboundParameterError
from core.rational_function import RationalFunction
from utils.metrics import record_check, set_planes_enumerated


class PlaneStatus(Enum):
    """Outcome of a per-plane check"""

    SATISFIED = "satisfied"
    VIOLATED = "violated"


@dataclass
class GramMetric:
    """G = sum r v v^T with its exact inverse when nonsingular"""

    matrix: np.ndarray
    inverse: Optional[np.ndarray]
    rank: int

    @property
    def is_singular(self) -> bool:
        return self.inverse is None

    def to_dict(self) -> Dict:
        return {"matrix": self.matrix, "inverse": self.inverse, "rank": self.rank}


def gram_metric(system: CovectorSystem) -> GramMetric:
    """Gram metric of a concrete system; a singular result is still returned"""
    if not system.is_concrete:
        raise UnboundParameterError(system.free_parameters())
    if system.covectors:
        directions = system.direction_matrix()
        matrix = (directions.T * system.radicand_vector()) @ directions
    else:
        matrix = zeros((system.dimension, system.dimension))
    try:
        inverse = bareiss_inverse(matrix)
        rank = system.dimension
    except SingularMatrixError as e:
        inverse, rank = None, e.rank
        logger.debug(f"Gram metric of '{system.name}' is singular (rank {rank})")
    return GramMetric(matrix, inverse, rank)


def _sympy_rational(value: Fraction) -> sp.Rational:
    return sp.Rational(value.numerator, value.denominator)


def gram_metric_symbolic(system: CovectorSystem) -> np.ndarray:
    """Gram matrix of a parametric family with RationalFunction entries"""
    n = system.dimension
    matrix = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            terms = [
                RationalFunction.coerce(c.radicand).as_expr()
                * _sympy_rational(c.direction[i] * c.direction[j])
                for c in system.covectors
                if c.direction[i] != 0 and c.direction[j] != 0
            ]
            entry = RationalFunction(sp.Add(*terms))
            matrix[i, j] = entry
            matrix[j, i] = entry
    return matrix


def require_nonsingular(system: CovectorSystem, gram: Optional[GramMetric] = None) -> GramMetric:
    gram = gram or gram_metric(system)
    if gram.is_singular:
        raise DegenerateGramError(gram.rank, system.dimension)
    return gram


def check_vectors(system: CovectorSystem, gram: GramMetric) -> np.ndarray:
    """Rows G^-1 v_alpha, the rational cores of the check-vectors"""
    gram = require_nonsingular(system, gram)
    return (gram.inverse @ system.direction_matrix().T).T


def pairing_matrix(system: CovectorSystem, gram: GramMetric) -> np.ndarray:
    """B[a, b] = v_a^T G^-1 v_b, so that beta(alpha-check) = sqrt(r_a r_b) B[a, b]"""
    gram = require_nonsingular(system, gram)
    directions = system.direction_matrix()
    return directions @ gram.inverse @ directions.T


@dataclass(frozen=True)
class PlaneGroup:
    """Covectors whose directions span one 2-plane, keyed by the plane's RREF basis"""

    canonical_basis: Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]
    member_indices: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            "basis": [[str(value) for value in row] for row in self.canonical_basis],
            "members": list(self.member_indices),
        }


def plane_key(first, second) -> Tuple[Tuple[Fraction, ...], ...]:
    echelon, pivots = rref(fraction_matrix([first, second]))
    if len(pivots) < 2:
        raise ValueError("Directions are collinear")
    return tuple(tuple(row) for row in echelon)


def enumerate_planes(system: CovectorSystem) -> List[PlaneGroup]:
    """
    Group covectors by the 2-planes spanned by pairs of directions.

    Every non-collinear pair lands in exactly one group; groups are sorted by
    their canonical basis, so the result does not depend on input order.
    """
    primitives = [primitive_direction(c.direction)[0] for c in system.covectors]
    groups: Dict[Tuple, set] = {}
    for i in range(len(primitives)):
        for j in range(i + 1, len(primitives)):
            if primitives[i] == primitives[j]:
                continue
            key = plane_key(primitives[i], primitives[j])
            groups.setdefault(key, set()).update((i, j))

    planes = [PlaneGroup(key, tuple(sorted(members))) for key, members in sorted(groups.items())]
    set_planes_enumerated(len(planes))
    logger.debug(
        f"Enumerated {len(planes)} planes for '{system.name}' "
        f"(largest has {max((len(p.member_indices) for p in planes), default=0)} members)"
    )
    return planes


@dataclass
class PlaneResult:
    """Vee status of one plane with its lambda values or a failure witness"""

    plane: PlaneGroup
    status: PlaneStatus
    lambdas: List[Fraction] = field(default_factory=list)
    witness_index: Optional[int] = None
    residual: Optional[List[Fraction]] = None

    @property
    def satisfied(self) -> bool:
        return self.status == PlaneStatus.SATISFIED

    def to_dict(self) -> Dict:
        result = {**self.plane.to_dict(), "status": self.status.value}
        if self.lambdas:
            result["lambda"] = self.lambdas
        if self.witness_index is not None:
            result["witness"] = {"covector": self.witness_index, "residual": self.residual}
        return result


@dataclass
class VeeVerdict:
    """Aggregate of per-plane vee checks"""

    holds: bool
    planes: List[PlaneResult]

    @property
    def witnesses(self) -> List[PlaneResult]:
        return [plane for plane in self.planes if not plane.satisfied]

    def to_dict(self) -> Dict:
        return {
            "holds": self.holds,
            "planes": [plane.to_dict() for plane in self.planes],
            "witnesses": [plane.to_dict() for plane in self.witnesses],
        }


def _proportionality(vector: np.ndarray, target: np.ndarray) -> Tuple[Fraction, np.ndarray]:
    """lambda from the first nonzero coordinate of target, plus vector - lambda * target"""
    index = next(i for i, value in enumerate(target) if value != 0)
    factor = vector[index] / target[index]
    return factor, vector - factor * target


def check_vee_plane(
    system: CovectorSystem, gram: GramMetric, pairing: np.ndarray, plane: PlaneGroup
) -> PlaneResult:
    """
    Vee-condition restricted to one plane.

    Two members: satisfied iff their pairing vanishes. Three or more: for every
    member a, sum_b r_b B[b, a] G^-1 v_b must equal lambda G^-1 v_a with one
    common lambda for the whole plane.
    """
    members = plane.member_indices
    if len(members) == 2:
        a, b = members
        value = pairing[a, b]
        if value == 0:
            return PlaneResult(plane, PlaneStatus.SATISFIED)
        return PlaneResult(plane, PlaneStatus.VIOLATED, witness_index=a, residual=[value])

    radicands = system.radicand_vector()
    checks = check_vectors(system, gram)
    lambdas: List[Fraction] = []
    for a in members:
        total = zeros(system.dimension)
        for b in members:
            total = total + radicands[b] * pairing[b, a] * checks[b]
        factor, residual = _proportionality(total, checks[a])
        if not is_zero(residual):
            return PlaneResult(plane, PlaneStatus.VIOLATED, lambdas, a, list(residual))
        lambdas.append(factor)

    if any(value != lambdas[0] for value in lambdas):
        index = next(i for i, value in zip(members, lambdas) if value != lambdas[0])
        spread = [value - lambdas[0] for value in lambdas]
        return PlaneResult(plane, PlaneStatus.VIOLATED, lambdas, index, spread)
    return PlaneResult(plane, PlaneStatus.SATISFIED, lambdas)


def is_vee_system(system: CovectorSystem, planes: Optional[List[PlaneGroup]] = None) -> VeeVerdict:
    """
    Decide the vee-condition for a concrete system.

    Raises:
        DegenerateGramError: singular Gram metric (regularize instead)
    """
    gram = require_nonsingular(system)
    pairing = pairing_matrix(system, gram)
    planes = planes if planes is not None else enumerate_planes(system)
    results = [check_vee_plane(system, gram, pairing, plane) for plane in planes]
    holds = all(result.satisfied for result in results)
    record_check("vee", holds)
    logger.bind(CHECK=True).info(
        f"vee '{system.name}': {'holds' if holds else 'fails'} "
        f"({sum(r.satisfied for r in results)}/{len(results)} planes satisfied)"
    )
    return VeeVerdict(holds, results)
