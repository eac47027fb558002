"""
Root Systems
Positive roots of A_n, B_n, D_n and G_2 as covector systems with radicand 1
"""
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from core.covector_system import CovectorSystem, ScaledCovector
from core.exceptions import UnknownBuiltinError

MAX_RANK = 8


def _unit(n: int, *entries: Tuple[int, int]) -> Tuple[int, ...]:
    vector = [0] * n
    for index, value in entries:
        vector[index] += value
    return tuple(vector)


def _sign(value: int) -> str:
    return "+" if value > 0 else "-"


def _covector(direction: Tuple[int, ...], label: str, radicand: int = 1) -> ScaledCovector:
    return ScaledCovector(Fraction(radicand), direction, label).canonical()


def type_a(n: int) -> List[ScaledCovector]:
    """
    e_i - e_j restricted to the sum-zero hyperplane of R^(n+1), in the
    coordinates u_1..u_n with u_(n+1) = -(u_1 + ... + u_n).
    """
    roots = []
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            if j < n:
                direction = _unit(n, (i, 1), (j, -1))
            else:
                direction = tuple(1 + (k == i) for k in range(n))
            roots.append(_covector(direction, f"e{i + 1}-e{j + 1}"))
    return roots


def type_d(n: int) -> List[ScaledCovector]:
    roots = []
    for i in range(n):
        for j in range(i + 1, n):
            for sign in (1, -1):
                roots.append(_covector(_unit(n, (i, 1), (j, sign)), f"e{i + 1}{_sign(sign)}e{j + 1}"))
    return roots


def type_b(n: int) -> List[ScaledCovector]:
    return [_covector(_unit(n, (i, 1)), f"e{i + 1}") for i in range(n)] + type_d(n)


def type_g2() -> List[ScaledCovector]:
    """
    Short roots e_i - e_j and long roots 2e_i - e_j - e_k of the sum-zero
    plane in R^3, coordinates u_1, u_2.
    """
    return [
        _covector((1, -1), "e1-e2"),
        _covector((2, 1), "e1-e3"),
        _covector((1, 2), "e2-e3"),
        _covector((1, 0), "2e1-e2-e3", 9),
        _covector((0, 1), "2e2-e1-e3", 9),
        _covector((1, 1), "e1+e2-2e3", 9),
    ]


ROOT_TYPES: Dict[str, Tuple[int, Callable[[int], List[ScaledCovector]]]] = {
    "A": (1, type_a),
    "B": (1, type_b),
    "D": (2, type_d),
}


def root_system(kind: str, rank: int) -> CovectorSystem:
    """
    Positive roots of a classical or G_2 root system.

    Raises:
        UnknownBuiltinError: unsupported type or rank
    """
    kind = kind.upper()
    name = f"{kind}{rank}"
    if kind == "G":
        if rank != 2:
            raise UnknownBuiltinError(name)
        return CovectorSystem(2, tuple(type_g2()), (), name)
    if kind not in ROOT_TYPES:
        raise UnknownBuiltinError(name)
    minimum, generator = ROOT_TYPES[kind]
    if not minimum <= rank <= MAX_RANK:
        raise UnknownBuiltinError(name)
    return CovectorSystem(rank, tuple(generator(rank)), (), name)
