"""
Kohno Checker Module
Rank-one endomorphisms, the Kohno commutator property and its equivalence with the vee-condition
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from core.covector_system import CovectorSystem
from core.exact_linalg import identity, is_symmetric, is_zero, matrix_rank, zeros
from core.exceptions import HyperplaneHitError
from core.vee_checker import (
    GramMetric,
    PlaneGroup,
    PlaneStatus,
    check_vectors,
    enumerate_planes,
    is_vee_system,
    require_nonsingular,
)
from utils.metrics import record_check


@dataclass
class RankOneEndo:
    """rho = r (G^-1 v) v^T for one covector"""

    matrix: np.ndarray
    index: int

    @property
    def trace(self) -> Fraction:
        return sum(self.matrix.diagonal(), Fraction(0))

    @property
    def rank(self) -> int:
        return matrix_rank(self.matrix)

    def is_self_adjoint(self, gram: GramMetric) -> bool:
        return is_symmetric(gram.matrix @ self.matrix)

    def is_quasi_idempotent(self) -> bool:
        """rho^2 = trace(rho) rho"""
        return is_zero(self.matrix @ self.matrix - self.trace * self.matrix)


def endomorphisms(system: CovectorSystem, gram: GramMetric) -> List[RankOneEndo]:
    """One rank-one endomorphism per covector; they sum to the identity"""
    checks = check_vectors(system, gram)
    radicands = system.radicand_vector()
    return [
        RankOneEndo(radicands[i] * np.outer(checks[i], covector.vector), i)
        for i, covector in enumerate(system.covectors)
    ]


def endomorphism_sum(endos: Sequence[RankOneEndo], dimension: int) -> np.ndarray:
    total = zeros((dimension, dimension))
    for endo in endos:
        total = total + endo.matrix
    return total


@dataclass
class KohnoGroupResult:
    """Commutator status of one plane group"""

    plane: PlaneGroup
    status: PlaneStatus
    witness_index: Optional[int] = None
    commutator: Optional[np.ndarray] = None

    @property
    def satisfied(self) -> bool:
        return self.status == PlaneStatus.SATISFIED

    def to_dict(self) -> Dict:
        result = {"plane": self.plane.to_dict(), "status": self.status.value}
        if self.witness_index is not None:
            result["witness"] = {"covector": self.witness_index, "commutator": self.commutator}
        return result


def check_kohno_group(endos: Sequence[RankOneEndo], plane: PlaneGroup) -> KohnoGroupResult:
    """[sum of the plane's rho, rho_J] must vanish for every member J"""
    members = plane.member_indices
    dimension = endos[members[0]].matrix.shape[0]
    total = endomorphism_sum([endos[k] for k in members], dimension)
    for j in members:
        rho = endos[j].matrix
        commutator = total @ rho - rho @ total
        if not is_zero(commutator):
            return KohnoGroupResult(plane, PlaneStatus.VIOLATED, j, commutator)
    return KohnoGroupResult(plane, PlaneStatus.SATISFIED)


@dataclass
class KohnoVerdict:
    """Conjunction of the plane-group commutator checks"""

    holds: bool
    groups: List[KohnoGroupResult]

    def to_dict(self) -> Dict:
        return {"kohno": self.holds, "groups": [group.to_dict() for group in self.groups]}


def has_kohno_property(
    system: CovectorSystem, planes: Optional[List[PlaneGroup]] = None
) -> KohnoVerdict:
    """
    Kohno property of a concrete system.

    Codimension-two intersections of the hyperplanes correspond to the
    annihilated 2-planes, so the plane enumeration of the vee check is reused.
    """
    gram = require_nonsingular(system)
    endos = endomorphisms(system, gram)
    planes = planes if planes is not None else enumerate_planes(system)
    groups = [check_kohno_group(endos, plane) for plane in planes]
    holds = all(group.satisfied for group in groups)
    record_check("kohno", holds)
    logger.bind(CHECK=True).info(f"kohno '{system.name}': {'holds' if holds else 'fails'}")
    return KohnoVerdict(holds, groups)


@dataclass
class EquivalenceReport:
    """Both verdicts and any plane where they disagree"""

    vee: bool
    kohno: bool
    discrepancies: List[PlaneGroup] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.vee == self.kohno and not self.discrepancies

    def to_dict(self) -> Dict:
        return {
            "vee": self.vee,
            "kohno": self.kohno,
            "agree": self.agree,
            "discrepancies": [plane.to_dict() for plane in self.discrepancies],
        }


def crosscheck_equivalence(system: CovectorSystem) -> EquivalenceReport:
    """Run both checks over one plane enumeration and compare plane by plane"""
    planes = enumerate_planes(system)
    vee = is_vee_system(system, planes)
    kohno = has_kohno_property(system, planes)
    discrepancies = [
        v.plane for v, k in zip(vee.planes, kohno.groups) if v.satisfied != k.satisfied
    ]
    report = EquivalenceReport(vee.holds, kohno.holds, discrepancies)
    record_check("equivalence", report.agree)
    if not report.agree:
        logger.error(f"vee/kohno disagreement on '{system.name}': {len(discrepancies)} plane(s)")
    return report


def check_connection_flatness_at(
    system: CovectorSystem, gram: GramMetric, point: Sequence[Fraction]
) -> bool:
    """
    Curvature of d - lambda sum rho_a d(alpha)/alpha at one point.

    The connection is flat for every lambda iff the End(V)-valued 2-form
    sum_{a<b} [rho_a, rho_b] (da ^ db) / (a(u) b(u)) vanishes.
    """
    endos = endomorphisms(system, gram)
    values = []
    for covector in system.covectors:
        value = covector.pair(point)
        if value == 0:
            raise HyperplaneHitError(covector.label)
        values.append(value)

    n = system.dimension
    curvature = {(i, j): zeros((n, n)) for i in range(n) for j in range(i + 1, n)}

    for a in range(len(endos)):
        for b in range(a + 1, len(endos)):
            commutator = endos[a].matrix @ endos[b].matrix - endos[b].matrix @ endos[a].matrix
            if is_zero(commutator):
                continue
            va, vb = system.covectors[a].direction, system.covectors[b].direction
            weight = 1 / (values[a] * values[b])
            for i in range(n):
                for j in range(i + 1, n):
                    wedge = va[i] * vb[j] - va[j] * vb[i]
                    if wedge != 0:
                        curvature[i, j] = curvature[i, j] + weight * wedge * commutator

    return all(is_zero(component) for component in curvature.values())


def resolution_of_identity(system: CovectorSystem, gram: GramMetric) -> bool:
    """sum rho == Id exactly"""
    return is_zero(endomorphism_sum(endomorphisms(system, gram), system.dimension) - identity(system.dimension))
