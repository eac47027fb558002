"""
Builtin Registry
Name resolution for root systems and parametric families
"""
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from core.covector_system import CovectorSystem
from core.exceptions import UnknownBuiltinError
from catalog.parametric import D21_PATH, G12_PATH, DegeneratePath, d21lambda, g12
from catalog.root_systems import MAX_RANK, root_system

ROOT_NAME = re.compile(r"^([ABDG])(\d+)$", re.IGNORECASE)


@dataclass(frozen=True)
class BuiltinFamily:
    name: str
    factory: Callable[[], CovectorSystem]
    description: str
    degenerate_path: Optional[DegeneratePath] = None

    def build(self) -> CovectorSystem:
        return self.factory()

    def to_dict(self) -> Dict:
        result = {"name": self.name, "description": self.description}
        if self.degenerate_path is not None:
            result["degeneratePath"] = self.degenerate_path.to_dict()
        return result


PARAMETRIC: Dict[str, BuiltinFamily] = {
    "d21lambda": BuiltinFamily(
        "d21lambda",
        d21lambda,
        "Generalized root system D(2,1,lambda), parameters s, t; Gram metric vanishes on t+s+1=0",
        D21_PATH,
    ),
    "g12": BuiltinFamily(
        "g12",
        g12,
        "Generalized root system G(1,2), parameter t; Gram metric vanishes at t=-1/2",
        G12_PATH,
    ),
}


def resolve_builtin(name: str) -> BuiltinFamily:
    """
    Look up a builtin by name: A<n>, B<n>, D<n>, G2, d21lambda or g12.

    Raises:
        UnknownBuiltinError: no such builtin
    """
    if name in PARAMETRIC:
        return PARAMETRIC[name]
    match = ROOT_NAME.match(name)
    if match is None:
        raise UnknownBuiltinError(name)
    kind, rank = match.group(1).upper(), int(match.group(2))
    system = root_system(kind, rank)
    return BuiltinFamily(system.name, lambda: system, f"Positive roots of {kind}_{rank}")


def list_builtins() -> List[BuiltinFamily]:
    """Every builtin, root systems by type then rank, families last"""
    families = []
    for kind, first in (("A", 1), ("B", 1), ("D", 2)):
        families.extend(resolve_builtin(f"{kind}{rank}") for rank in range(first, MAX_RANK + 1))
    families.append(resolve_builtin("G2"))
    families.extend(PARAMETRIC.values())
    return families
