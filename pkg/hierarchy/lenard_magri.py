"""
Lenard-Magri Module
Numeric checks of P1 dH_[p,a+1] = Q dH_[p,a-1] on loops, the pointwise
identity behind it and involutivity of the densities
"""
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from loguru import logger

from core.exact_linalg import to_float
from frobenius.structure import structure_constants_grid
from hamiltonian.loop_grid import LoopGrid
from hamiltonian.nonlocal_operator import NonlocalOperator, apply_nonlocal, assemble_nonlocal_operator
from hierarchy.poly_frobenius import PolyFrobenius
from hierarchy.principal_hierarchy import HierarchyLevel
from utils.metrics import record_check

Hierarchy = Dict[int, List[HierarchyLevel]]


def _relative(difference: np.ndarray, reference: np.ndarray) -> float:
    scale = max(1.0, float(np.max(np.abs(reference)))) if reference.size else 1.0
    return float(np.max(np.abs(difference))) / scale if difference.size else 0.0


def _levels(chain: List[HierarchyLevel]) -> Dict[int, HierarchyLevel]:
    return {level.level: level for level in chain}


@dataclass
class ChainResidual:
    family: int
    level: int
    residual: float
    chain: str = ""

    def to_dict(self) -> Dict:
        result = {"family": self.family, "level": self.level, "residual": self.residual}
        if self.chain:
            result["chain"] = self.chain
        return result


def local_pointwise_identity_check(data: PolyFrobenius, hierarchy: Hierarchy, loop: LoopGrid) -> List[ChainResidual]:
    """
    c^j_lq u_x^q d_j h_[p,a-1] against d_x(d_l h_[p,a]) on the grid, with the
    x-derivative taken spectrally.
    """
    c = structure_constants_grid(data, loop.values)
    results = []
    for family, chain in sorted(hierarchy.items()):
        for previous, current in zip(chain, chain[1:]):
            left = np.einsum("xjlq,xq,xj->xl", c, loop.u_x, previous.gradient_on(loop.values))
            right = loop.derivative(current.gradient_on(loop.values))
            results.append(ChainResidual(family, current.level, _relative(left - right, right)))
    return results


def first_structure(data: PolyFrobenius, level: HierarchyLevel, loop: LoopGrid) -> np.ndarray:
    """P1 dH = eta^-1 d_x (dh(u(x)))"""
    return loop.derivative(level.gradient_on(loop.values)) @ to_float(data.metric_inverse).T


def second_structure(
    operator: NonlocalOperator,
    lower: HierarchyLevel,
    middle: HierarchyLevel,
    loop: LoopGrid,
    tolerance: Optional[float] = None,
) -> np.ndarray:
    """
    Q dH_lower with each antiderivative pinned at grid point 0 to
    X_a . dh_middle, the closed form of its primitive.
    """
    anchors = to_float(operator.affinors.vectors) @ middle.gradient_on(loop.values[:1])[0]
    return apply_nonlocal(operator, loop, lower.gradient_on(loop.values), anchors=anchors, tolerance=tolerance)


def lenard_magri_residual(
    operator: NonlocalOperator,
    upper: HierarchyLevel,
    lower: HierarchyLevel,
    middle: HierarchyLevel,
    loop: LoopGrid,
    tolerance: Optional[float] = None,
) -> float:
    left = first_structure(operator.data, upper, loop)
    right = second_structure(operator, lower, middle, loop, tolerance)
    return _relative(left - right, left)


def lenard_magri_check(
    data: PolyFrobenius, hierarchy: Hierarchy, loop: LoopGrid, mean_tolerance: Optional[float] = None
) -> List[ChainResidual]:
    """
    Residual of P1 dH_[p,a+1] - Q dH_[p,a-1] for every a with both levels
    present. Levels a-1 and a+1 share parity, so the densities split into an
    even and an odd chain. Level -1 is also reported against P1 alone,
    which annihilates the Casimirs.
    """
    operator = assemble_nonlocal_operator(data)
    results = []
    for family, chain in sorted(hierarchy.items()):
        levels = _levels(chain)
        base = levels[-1]
        casimir = first_structure(data, base, loop)
        results.append(ChainResidual(family, -1, float(np.max(np.abs(casimir))), "casimir"))
        for alpha in sorted(levels):
            if alpha - 1 not in levels or alpha + 1 not in levels:
                continue
            residual = lenard_magri_residual(
                operator, levels[alpha + 1], levels[alpha - 1], levels[alpha], loop, mean_tolerance
            )
            parity = "even" if (alpha + 1) % 2 == 0 else "odd"
            results.append(ChainResidual(family, alpha, residual, parity))
    logger.debug(f"Lenard-Magri residuals for '{data.name}': max {max(r.residual for r in results):.3g}")
    return results


@dataclass
class InvolutivityEntry:
    first: str
    second: str
    residual: float

    def to_dict(self) -> Dict:
        return {"first": self.first, "second": self.second, "residual": self.residual}


def involutivity_check(data: PolyFrobenius, hierarchy: Hierarchy, loop: LoopGrid) -> List[InvolutivityEntry]:
    """|int dH_a^T eta^-1 d_x dH_b dx| relative to int |...| for every pair"""
    inverse = to_float(data.metric_inverse)
    gradients = {
        f"h[{level.family},{level.level}]": level.gradient_on(loop.values)
        for _, chain in sorted(hierarchy.items())
        for level in chain
    }
    flows = {name: loop.derivative(gradient) @ inverse.T for name, gradient in gradients.items()}
    names = list(gradients)
    entries = []
    for i, first in enumerate(names):
        for second in names[i:]:
            integrand = np.sum(gradients[first] * flows[second], axis=1)
            scale = max(1.0, float(loop.integrate(np.abs(integrand))))
            entries.append(InvolutivityEntry(first, second, float(abs(loop.integrate(integrand))) / scale))
    return entries


def summarize(residuals: List, tolerance: float, check: str) -> bool:
    passed = all(entry.residual < tolerance for entry in residuals)
    record_check(check, passed)
    return passed
