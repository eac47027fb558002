"""
Admissible Point Sampling
Seeded integer points off every hyperplane
"""
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np
from loguru import logger

from core.exceptions import SamplingError
from utils.config import settings

Point = Tuple[Fraction, ...]


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Single source of randomness for a run"""
    return np.random.default_rng(settings.default_seed if seed is None else seed)


def sample_admissible_point(
    dimension: int,
    is_admissible: Callable[[Point], bool],
    rng: np.random.Generator,
    bound: Optional[int] = None,
    attempts: Optional[int] = None,
) -> Point:
    """
    Draw integer coordinates in [-bound, bound] until the point is admissible.

    Raises:
        SamplingError: no admissible point within the attempt budget
    """
    bound = bound or settings.sample_coordinate_bound
    attempts = attempts or settings.max_sampling_attempts
    for _ in range(attempts):
        point = tuple(Fraction(int(x)) for x in rng.integers(-bound, bound + 1, size=dimension))
        if is_admissible(point):
            return point
    raise SamplingError(f"No admissible point found in {attempts} attempts")


def sample_admissible_points(
    dimension: int,
    is_admissible: Callable[[Point], bool],
    count: int,
    rng: np.random.Generator,
) -> List[Point]:
    points = [sample_admissible_point(dimension, is_admissible, rng) for _ in range(count)]
    logger.debug(f"Sampled {count} admissible points in dimension {dimension}")
    return points
