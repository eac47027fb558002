"""
Poisson Conditions Module
Affinors W = X o (multiplication by a vector field) and the exact pointwise
conditions that make sum w W u_x d^-1 W u_x a Poisson bivector
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from core.exact_linalg import exact_equal, fraction_matrix, is_zero, polarization, to_float
from frobenius.structure import FrobeniusData, d_structure_constants_at, structure_constants_at
from utils.metrics import record_check


def _vector_label(vector: np.ndarray) -> str:
    parts = []
    for index, value in enumerate(vector):
        if value == 0:
            continue
        sign = "-" if value < 0 else "+"
        parts.append(f"{sign}e{index + 1}")
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


@dataclass
class AffinorSet:
    """
    Weighted constant generators X_a with sum w_a X_a X_a^T = eta^-1.

    Signs are carried by the weights; (W_a)^i_j(u) = c^i_jk(u) X_a^k.
    """

    weights: List[Fraction]
    vectors: np.ndarray
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.labels:
            self.labels = [_vector_label(vector) for vector in self.vectors]

    def __len__(self) -> int:
        return len(self.weights)

    @classmethod
    def from_frobenius(cls, data: FrobeniusData) -> "AffinorSet":
        """
        Check-vector cores of the source covectors when the metric is their
        Gram metric, otherwise the polarization decomposition of eta^-1.
        """
        if data.check_vectors is not None and data.uses_gram_metric:
            system = data.covector_system
            return cls(list(system.radicand_vector()), data.check_vectors, system.labels)
        terms = polarization(data.metric_inverse)
        vectors = fraction_matrix([list(vector) for _, vector in terms])
        return cls([weight for weight, _ in terms], vectors)

    @property
    def weight_vector(self) -> np.ndarray:
        return np.array(self.weights, dtype=object)

    def reconstructed_inverse(self) -> np.ndarray:
        """sum w X X^T; equals eta^-1 by construction"""
        return np.einsum("a,ai,aj->ij", self.weight_vector, self.vectors, self.vectors)

    def at(self, data: FrobeniusData, point: Sequence[Fraction]) -> np.ndarray:
        """W[a, i, j] exact"""
        return np.einsum("ijk,ak->aij", structure_constants_at(data, point), self.vectors)

    def derivatives_at(self, data: FrobeniusData, point: Sequence[Fraction]) -> np.ndarray:
        """dW[a, m, i, j] = d_m (W_a)^i_j exact, for constant generators"""
        return np.einsum("mijk,ak->amij", d_structure_constants_at(data, point), self.vectors)

    def on_grid(self, c_grid: np.ndarray) -> np.ndarray:
        """W[a, x, i, j] in floating point from c on a grid"""
        return np.einsum("xijk,ak->axij", c_grid, to_float(self.vectors))

    def to_dict(self) -> Dict:
        return {
            "affinors": [
                {"label": label, "weight": weight, "vector": list(vector)}
                for label, weight, vector in zip(self.labels, self.weights, self.vectors)
            ]
        }


def symmetry_sides(
    w_alpha: np.ndarray, w_beta: np.ndarray, dw_alpha: np.ndarray, dw_beta: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Both sides of the first-derivative symmetry condition, indices (k, l, q).

    dW[m, k, l] = d_m W^k_l. The right side is the left side with the two
    affinors exchanged.
    """

    def side(wa, wb, dwa, dwb):
        return (
            np.einsum("mq,mkl->klq", wb, dwa)
            + np.einsum("ml,mkq->klq", wb, dwa)
            + np.einsum("km,lmq->klq", wa, dwb)
            + np.einsum("km,qml->klq", wa, dwb)
        )

    return side(w_alpha, w_beta, dw_alpha, dw_beta), side(w_beta, w_alpha, dw_beta, dw_alpha)


def check_symmetry_condition_at(
    data: FrobeniusData,
    point: Sequence[Fraction],
    alpha: int,
    beta: int,
    affinors: Optional[AffinorSet] = None,
) -> bool:
    affinors = affinors or AffinorSet.from_frobenius(data)
    w = affinors.at(data, point)
    dw = affinors.derivatives_at(data, point)
    left, right = symmetry_sides(w[alpha], w[beta], dw[alpha], dw[beta])
    return exact_equal(left, right)


def check_commutativity_at(
    data: FrobeniusData,
    point: Sequence[Fraction],
    alpha: int,
    beta: int,
    affinors: Optional[AffinorSet] = None,
) -> bool:
    affinors = affinors or AffinorSet.from_frobenius(data)
    w = affinors.at(data, point)
    return is_zero(w[alpha] @ w[beta] - w[beta] @ w[alpha])


def zerocurv_tensor(weights: np.ndarray, w: np.ndarray) -> np.ndarray:
    """sum_a w_a (W^i_k W^j_h - W^i_h W^j_k), indices (i, k, j, h)"""
    product = np.einsum("a,aik,ajh->ikjh", weights, w, w)
    return product - product.transpose(0, 3, 2, 1)


def check_zerocurv_at(
    data: FrobeniusData, point: Sequence[Fraction], affinors: Optional[AffinorSet] = None
) -> bool:
    affinors = affinors or AffinorSet.from_frobenius(data)
    return is_zero(zerocurv_tensor(affinors.weight_vector, affinors.at(data, point)))


def check_symmetriesof_at(
    data: FrobeniusData, point: Sequence[Fraction], nabla_x: np.ndarray
) -> bool:
    """
    c^i_jk (nabla X)^k_l symmetric in (j, l).

    ``nabla_x[k, l]`` is nabla_l X^k at the point; zero for the flat constant
    generators used by AffinorSet.
    """
    c = structure_constants_at(data, point)
    contracted = np.einsum("ijk,kl->ijl", c, fraction_matrix(nabla_x))
    return exact_equal(contracted, contracted.transpose(0, 2, 1))


@dataclass
class PoissonPointReport:
    index: int
    point: Tuple[Fraction, ...]
    symmetry: bool
    commutativity: bool
    zerocurv: bool
    failing_pairs: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.symmetry and self.commutativity and self.zerocurv

    def to_dict(self) -> Dict:
        return {
            "index": self.index,
            "point": list(self.point),
            "symmetry": self.symmetry,
            "commutativity": self.commutativity,
            "zerocurv": self.zerocurv,
            "failingPairs": [f"{a}|{b}" for a, b in self.failing_pairs],
        }


def check_poisson_conditions_at(
    data: FrobeniusData, point: Sequence[Fraction], affinors: AffinorSet, index: int = 0
) -> PoissonPointReport:
    """Every affinor pair at one point, W and dW evaluated once"""
    w = affinors.at(data, point)
    dw = affinors.derivatives_at(data, point)
    symmetry = commutativity = True
    failing: List[Tuple[str, str]] = []
    for a in range(len(affinors)):
        for b in range(a + 1, len(affinors)):
            left, right = symmetry_sides(w[a], w[b], dw[a], dw[b])
            pair_symmetric = exact_equal(left, right)
            pair_commutes = is_zero(w[a] @ w[b] - w[b] @ w[a])
            if not (pair_symmetric and pair_commutes):
                failing.append((affinors.labels[a], affinors.labels[b]))
            symmetry &= pair_symmetric
            commutativity &= pair_commutes
    zerocurv = is_zero(zerocurv_tensor(affinors.weight_vector, w))
    return PoissonPointReport(index, tuple(point), symmetry, commutativity, zerocurv, failing)


def run_poisson_checks(
    data: FrobeniusData, points: Sequence[Sequence[Fraction]]
) -> List[PoissonPointReport]:
    affinors = AffinorSet.from_frobenius(data)
    logger.debug(f"'{data.name}': {len(affinors)} affinors, {len(points)} points")
    reports = [
        check_poisson_conditions_at(data, point, affinors, index) for index, point in enumerate(points)
    ]
    passed = all(report.passed for report in reports)
    record_check("poisson_conditions", passed)
    logger.bind(CHECK=True).info(
        f"poisson conditions '{data.name}': {'hold' if passed else 'fail'} at {len(points)} points"
    )
    return reports
