"""
Random Covector Systems
Seeded systems for property tests: random rational directions, and root
systems moved by random integer changes of coordinates
"""
from fractions import Fraction
from typing import List

import numpy as np
from loguru import logger

from catalog.root_systems import root_system
from core.covector_system import CovectorSystem, ScaledCovector, direct_sum, validate
from core.exact_linalg import fraction_matrix, matrix_rank
from core.exceptions import SamplingError
from utils.config import settings

RADICANDS = (Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2))
ENTRY_BOUND = 2


def random_change_of_coordinates(rng: np.random.Generator, dimension: int) -> np.ndarray:
    """Nonsingular integer matrix with entries in [-2, 2]"""
    for _ in range(settings.max_sampling_attempts):
        matrix = fraction_matrix(rng.integers(-ENTRY_BOUND, ENTRY_BOUND + 1, size=(dimension, dimension)).tolist())
        if matrix_rank(matrix) == dimension:
            return matrix
    raise SamplingError(f"No nonsingular {dimension}x{dimension} matrix found")


def random_directions_system(rng: np.random.Generator, dimension: int) -> CovectorSystem:
    """
    Between dimension + 1 and dimension + 3 spanning, pairwise non-collinear
    integer directions with radicands drawn from RADICANDS.
    """
    count = dimension + int(rng.integers(1, 4))
    for _ in range(settings.max_sampling_attempts):
        directions = rng.integers(-ENTRY_BOUND, ENTRY_BOUND + 1, size=(count, dimension)).tolist()
        radicands = rng.integers(0, len(RADICANDS), size=count)
        covectors = tuple(
            ScaledCovector(RADICANDS[int(r)], tuple(d), f"c{i}") for i, (r, d) in enumerate(zip(radicands, directions))
        )
        system = CovectorSystem(dimension, covectors, (), f"random{dimension}")
        if validate(system).ok:
            return system
    raise SamplingError(f"No valid random system in dimension {dimension}")


def _root_kinds(dimension: int) -> List[str]:
    return ["A", "B", "D"] if dimension >= 2 else ["A"]


def random_system(rng: np.random.Generator, dimension: int) -> CovectorSystem:
    """
    One of three shapes with equal probability: a transformed root system,
    a transformed sum of a root system with A1, or random directions.
    The first two are vee-systems, the last almost never is.
    """
    shape = int(rng.integers(0, 3))
    if shape == 2 or dimension < 2:
        return random_directions_system(rng, dimension)
    if shape == 0:
        kinds = _root_kinds(dimension)
        system = root_system(kinds[int(rng.integers(0, len(kinds)))], dimension)
    else:
        kinds = _root_kinds(dimension - 1)
        system = direct_sum(root_system(kinds[int(rng.integers(0, len(kinds)))], dimension - 1), root_system("A", 1))
    transformed = system.transformed(random_change_of_coordinates(rng, dimension))
    logger.debug(f"Random system from {system.name} in dimension {dimension}")
    return transformed


def random_systems(rng: np.random.Generator, count: int, dimensions=(3, 4, 5)) -> List[CovectorSystem]:
    """count systems with dimensions cycling through ``dimensions``"""
    return [random_system(rng, dimensions[index % len(dimensions)]) for index in range(count)]
