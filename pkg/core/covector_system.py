"""
Covector System Module
Scaled covectors alpha = sqrt(r) * v, finite systems of them, and their JSON form
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from core.exact_linalg import fraction_matrix, fraction_vector, matrix_rank, primitive_direction
from core.exceptions import (
    InputFormatError,
    PoleError,
    RadicandPoleError,
    UnboundParameterError,
)
from core.expression_parser import parse_scalar
from core.rational_function import RationalFunction, to_fraction

Radicand = Union[Fraction, RationalFunction]


def _concrete(radicand) -> Radicand:
    if isinstance(radicand, RationalFunction):
        return radicand.constant_value() if radicand.is_constant() else radicand
    return to_fraction(radicand)


def radicand_text(radicand: Radicand) -> str:
    if isinstance(radicand, RationalFunction):
        return radicand.to_text()
    if radicand.denominator == 1:
        return str(radicand.numerator)
    return f"{radicand.numerator}/{radicand.denominator}"


@dataclass(frozen=True)
class ScaledCovector:
    """Covector sqrt(radicand) * direction; only rational data is stored"""

    radicand: Radicand
    direction: Tuple[Fraction, ...]
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(Fraction(v) for v in self.direction))
        object.__setattr__(self, "radicand", _concrete(self.radicand))

    @property
    def is_concrete(self) -> bool:
        return isinstance(self.radicand, Fraction)

    @property
    def vector(self) -> np.ndarray:
        return fraction_vector(self.direction)

    def pair(self, point: Sequence) -> Fraction:
        """Rational core v(u) of alpha(u)"""
        return sum((a * Fraction(b) for a, b in zip(self.direction, point)), Fraction(0))

    def canonical(self) -> "ScaledCovector":
        """Same covector with a primitive integer direction (first entry positive)"""
        primitive, scale = primitive_direction(self.direction)
        return ScaledCovector(self.radicand * scale * scale, primitive, self.label)

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "radicand": radicand_text(self.radicand),
            "direction": [radicand_text(value) for value in self.direction],
        }


@dataclass
class ValidationReport:
    """Diagnostics for a covector system"""

    dimension: int
    rank: int
    zero_directions: List[int] = field(default_factory=list)
    collinear_pairs: List[Tuple[int, int]] = field(default_factory=list)
    zero_radicands: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            not self.zero_directions
            and not self.collinear_pairs
            and not self.zero_radicands
            and self.rank == self.dimension
        )

    @property
    def messages(self) -> List[str]:
        messages = [f"covector {i} has a zero direction" for i in self.zero_directions]
        messages += [f"covectors {i} and {j} are collinear" for i, j in self.collinear_pairs]
        messages += [f"covector {i} has radicand 0" for i in self.zero_radicands]
        if self.rank < self.dimension:
            messages.append(f"directions span rank {self.rank} < dimension {self.dimension}")
        return messages

    def to_dict(self) -> Dict:
        return {
            "ok": self.ok,
            "dimension": self.dimension,
            "rank": self.rank,
            "zero_directions": self.zero_directions,
            "collinear_pairs": [list(pair) for pair in self.collinear_pairs],
            "zero_radicands": self.zero_radicands,
            "messages": self.messages,
        }


@dataclass(frozen=True)
class CovectorSystem:
    """Finite set of scaled covectors in a fixed dimension"""

    dimension: int
    covectors: Tuple[ScaledCovector, ...]
    parameters: Tuple[str, ...] = ()
    name: str = ""
    dropped: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "covectors", tuple(self.covectors))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "dropped", tuple(self.dropped))
        for covector in self.covectors:
            if len(covector.direction) != self.dimension:
                raise InputFormatError(
                    f"Covector '{covector.label}' has {len(covector.direction)} entries, "
                    f"expected {self.dimension}"
                )

    def __len__(self) -> int:
        return len(self.covectors)

    @property
    def is_concrete(self) -> bool:
        return all(covector.is_concrete for covector in self.covectors)

    @property
    def labels(self) -> List[str]:
        return [covector.label for covector in self.covectors]

    def direction_matrix(self) -> np.ndarray:
        """m x n matrix whose rows are the directions"""
        return fraction_matrix([c.direction for c in self.covectors])

    def radicand_vector(self) -> np.ndarray:
        if not self.is_concrete:
            raise UnboundParameterError(self.free_parameters())
        return fraction_vector([c.radicand for c in self.covectors])

    def free_parameters(self) -> List[str]:
        names = set()
        for covector in self.covectors:
            if isinstance(covector.radicand, RationalFunction):
                names.update(covector.radicand.parameters)
        return sorted(names)

    def canonical(self) -> "CovectorSystem":
        return CovectorSystem(
            self.dimension,
            tuple(c.canonical() for c in self.covectors),
            self.parameters,
            self.name,
            self.dropped,
        )

    def transformed(self, matrix: np.ndarray) -> "CovectorSystem":
        """Change of coordinates u = A u'; every direction v becomes A^T v"""
        matrix = np.asarray(matrix, dtype=object)
        covectors = tuple(
            ScaledCovector(c.radicand, tuple(matrix.T @ c.vector), c.label) for c in self.covectors
        )
        return CovectorSystem(self.dimension, covectors, self.parameters, self.name, self.dropped)

    def to_dict(self) -> Dict:
        return {
            "dimension": self.dimension,
            "parameters": list(self.parameters),
            "covectors": [c.to_dict() for c in self.covectors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def direct_sum(first: CovectorSystem, second: CovectorSystem) -> CovectorSystem:
    """Orthogonal sum acting on the product of the two spaces"""
    n1, n2 = first.dimension, second.dimension
    covectors = [
        ScaledCovector(c.radicand, c.direction + (Fraction(0),) * n2, c.label or f"a{i}")
        for i, c in enumerate(first.covectors)
    ]
    covectors += [
        ScaledCovector(c.radicand, (Fraction(0),) * n1 + c.direction, c.label or f"b{i}")
        for i, c in enumerate(second.covectors)
    ]
    parameters = tuple(dict.fromkeys(first.parameters + second.parameters))
    name = f"{first.name}+{second.name}" if first.name and second.name else ""
    return CovectorSystem(n1 + n2, tuple(covectors), parameters, name)


def substitute_parameters(
    system: CovectorSystem, values: Mapping[str, Union[Fraction, RationalFunction]]
) -> CovectorSystem:
    """Bind some parameters, keeping the rest symbolic; drops nothing"""
    covectors = []
    for covector in system.covectors:
        radicand = covector.radicand
        if isinstance(radicand, RationalFunction):
            try:
                radicand = radicand.substitute(
                    {k: v for k, v in values.items() if k in radicand.parameters}
                )
            except PoleError:
                raise RadicandPoleError(covector.label) from None
        covectors.append(ScaledCovector(radicand, covector.direction, covector.label))

    remaining = set()
    for covector in covectors:
        if isinstance(covector.radicand, RationalFunction):
            remaining.update(covector.radicand.parameters)
    parameters = tuple(sorted(remaining))
    return CovectorSystem(system.dimension, tuple(covectors), parameters, system.name, system.dropped)


def instantiate(system: CovectorSystem, values: Mapping[str, Fraction]) -> CovectorSystem:
    """
    Evaluate every radicand at rational parameter values.

    Covectors whose radicand is exactly zero are removed and their labels
    recorded in the result's drop list.

    Raises:
        UnboundParameterError: a radicand still depends on an unbound parameter
        RadicandPoleError: a radicand has a pole at the values
    """
    missing = set(system.free_parameters()) - set(values)
    if missing:
        raise UnboundParameterError(missing)

    unused = set(values) - set(system.parameters)
    if unused:
        logger.warning(f"Ignoring values for unknown parameters: {sorted(unused)}")

    kept, dropped = [], list(system.dropped)
    for covector in system.covectors:
        radicand = covector.radicand
        if isinstance(radicand, RationalFunction):
            try:
                radicand = radicand.evaluate(
                    {name: to_fraction(values[name]) for name in radicand.parameters}
                )
            except PoleError:
                raise RadicandPoleError(covector.label) from None
        if radicand == 0:
            dropped.append(covector.label)
            continue
        kept.append(ScaledCovector(radicand, covector.direction, covector.label))

    if len(dropped) > len(system.dropped):
        logger.info(f"Dropped {len(dropped) - len(system.dropped)} covector(s) with zero radicand: {dropped}")
    return CovectorSystem(system.dimension, tuple(kept), (), system.name, tuple(dropped))


def validate(system: CovectorSystem) -> ValidationReport:
    """Report zero directions, collinear pairs, zero radicands and rank deficiency"""
    zero_directions: List[int] = []
    seen: Dict[Tuple[int, ...], int] = {}
    collinear: List[Tuple[int, int]] = []
    for index, covector in enumerate(system.covectors):
        if all(value == 0 for value in covector.direction):
            zero_directions.append(index)
            continue
        primitive, _ = primitive_direction(covector.direction)
        if primitive in seen:
            collinear.append((seen[primitive], index))
        else:
            seen[primitive] = index

    zero_radicands = [
        index
        for index, covector in enumerate(system.covectors)
        if covector.is_concrete and covector.radicand == 0
        or isinstance(covector.radicand, RationalFunction) and covector.radicand.is_zero()
    ]
    rank = matrix_rank(system.direction_matrix()) if system.covectors else 0
    return ValidationReport(system.dimension, rank, zero_directions, collinear, zero_radicands)


# JSON input


class CovectorEntry(BaseModel):
    label: str = ""
    radicand: Union[str, int] = "1"
    direction: List[Union[str, int]]


class CovectorFile(BaseModel):
    dimension: int = Field(gt=0)
    parameters: List[str] = Field(default_factory=list)
    covectors: List[CovectorEntry]


def parse_rational(text: Union[str, int]) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise InputFormatError(f"Invalid rational '{text}': {e}") from None


def parse_covector_system(document: Mapping, name: str = "") -> CovectorSystem:
    """Build a system from the decoded JSON covector format"""
    try:
        spec = CovectorFile.model_validate(document)
    except ValidationError as e:
        raise InputFormatError(f"Invalid covector document: {e}") from None

    covectors = []
    for index, entry in enumerate(spec.covectors):
        if len(entry.direction) != spec.dimension:
            raise InputFormatError(
                f"Covector {index} has {len(entry.direction)} entries, expected {spec.dimension}"
            )
        radicand = parse_scalar(str(entry.radicand), spec.parameters)
        direction = tuple(parse_rational(value) for value in entry.direction)
        covectors.append(ScaledCovector(radicand, direction, entry.label or f"c{index}"))
    return CovectorSystem(spec.dimension, tuple(covectors), tuple(spec.parameters), name)


def load_covector_system(path: Union[str, Path]) -> CovectorSystem:
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputFormatError(f"Input file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Invalid JSON in {path}: {e}") from None
    logger.debug(f"Loaded covector document {path}")
    return parse_covector_system(document, name=path.stem)


def parse_assignment(text: str) -> Tuple[str, str]:
    """Split 'name=value' flags"""
    name, sep, value = text.partition("=")
    if not sep or not name.strip() or not value.strip():
        raise InputFormatError(f"Expected name=value, got '{text}'")
    return name.strip(), value.strip()


def parse_bindings(items: Optional[Sequence[str]]) -> Dict[str, Fraction]:
    bindings: Dict[str, Fraction] = {}
    for item in items or ():
        name, value = parse_assignment(item)
        bindings[name] = parse_rational(value)
    return bindings
