"""
Parametric Families
Generalized root systems D(2,1,lambda) and G(1,2) with their degenerate loci
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from core.covector_system import CovectorSystem, ScaledCovector
from core.expression_parser import parse_scalar


@dataclass(frozen=True)
class DegeneratePath:
    """
    Where a family's Gram metric vanishes and how to approach it.

    With ``expression`` the parameter is moved along parameter = expression + eps
    (limit eps -> 0); otherwise the parameter itself tends to ``limit``.
    """

    parameter: str
    limit: Fraction = Fraction(0)
    expression: Optional[str] = None
    scale: Fraction = Fraction(1)

    def to_dict(self) -> Dict:
        result = {"parameter": self.parameter, "scale": self.scale}
        if self.expression:
            result["locus"] = f"{self.parameter}={self.expression}"
        else:
            result["limit"] = self.limit
        return result


def _family(
    dimension: int, entries: Tuple[Tuple[str, Tuple[int, ...], str], ...], parameters: Tuple[str, ...], name: str
) -> CovectorSystem:
    covectors = tuple(
        ScaledCovector(parse_scalar(radicand, list(parameters)), direction, label)
        for radicand, direction, label in entries
    )
    return CovectorSystem(dimension, covectors, parameters, name)


def d21lambda() -> CovectorSystem:
    """e1 +- e2 +- e3 and the three weighted axis covectors; Gram metric diag(2(t+s+1), 2(t+s+1)/t, 2(t+s+1)/s)"""
    entries = (
        ("1", (1, 1, 1), "e1+e2+e3"),
        ("1", (1, 1, -1), "e1+e2-e3"),
        ("1", (1, -1, 1), "e1-e2+e3"),
        ("1", (1, -1, -1), "e1-e2-e3"),
        ("2*(t+s-1)", (1, 0, 0), "e1"),
        ("2*(s-t+1)/t", (0, 1, 0), "e2"),
        ("2*(t-s+1)/s", (0, 0, 1), "e3"),
    )
    return _family(3, entries, ("s", "t"), "d21lambda")


D21_PATH = DegeneratePath("s", expression="-t-1")


def g12() -> CovectorSystem:
    entries = (
        ("2*t+1", (1, 0, 0), "e1"),
        ("2*t+1", (0, 1, 0), "e2"),
        ("2*t+1", (1, 1, 0), "e1+e2"),
        ("(2*t-1)/3", (1, -1, 0), "e1-e2"),
        ("(2*t-1)/3", (2, 1, 0), "2e1+e2"),
        ("(2*t-1)/3", (1, 2, 0), "e1+2e2"),
        ("3/t", (0, 0, 1), "e3"),
        ("1", (1, 0, 1), "e1+e3"),
        ("1", (1, 0, -1), "e1-e3"),
        ("1", (0, 1, 1), "e2+e3"),
        ("1", (0, 1, -1), "e2-e3"),
        ("1", (1, 1, 1), "e1+e2+e3"),
        ("1", (1, 1, -1), "e1+e2-e3"),
    )
    return _family(3, entries, ("t",), "g12")


G12_PATH = DegeneratePath("t", limit=Fraction(-1, 2), scale=Fraction(1, 8))
