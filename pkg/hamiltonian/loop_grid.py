"""
Loop Grid Module
Periodic loops u: S^1 -> V sampled on 2*pi*k/N, spectral x-derivative and
zero-mean antiderivative, Fourier loop specifications
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from core.exceptions import InputFormatError, VeeInsightError
from frobenius.sampling import sample_admissible_point
from frobenius.structure import FrobeniusData
from utils.config import settings

Coefficient = Union[int, float, str]


def _coefficient_value(value: Coefficient) -> float:
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


class LoopGrid:
    """
    Samples of one loop on a uniform grid of the circle.

    Arrays passed to ``derivative`` / ``antiderivative`` have the grid along
    axis 0; any trailing shape is carried along.
    """

    def __init__(self, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        size = values.shape[0]
        if size < 8 or size & (size - 1):
            raise VeeInsightError(f"Grid size must be a power of two >= 8, got {size}")
        self.values = values
        self.size = size
        self.wavenumbers = np.fft.rfftfreq(size, d=1.0 / size)
        self._u_x: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.values.shape[1]

    @property
    def points(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.size) / self.size

    @property
    def u_x(self) -> np.ndarray:
        if self._u_x is None:
            self._u_x = self.derivative(self.values)
        return self._u_x

    def _multiplier(self, factor: np.ndarray, ndim: int) -> np.ndarray:
        return factor.reshape((-1,) + (1,) * (ndim - 1))

    def derivative(self, f: np.ndarray) -> np.ndarray:
        """Spectral d/dx; the Nyquist mode is dropped"""
        f = np.asarray(f, dtype=float)
        spectrum = np.fft.rfft(f, axis=0)
        factor = 1j * self.wavenumbers
        factor[-1] = 0.0
        spectrum = spectrum * self._multiplier(factor, f.ndim)
        return np.fft.irfft(spectrum, n=self.size, axis=0)

    def antiderivative(self, f: np.ndarray) -> np.ndarray:
        """
        Zero-mean antiderivative of the zero-mean part of f.

        The mean of f is discarded; callers that need the inverse of d/dx
        must check it first.
        """
        f = np.asarray(f, dtype=float)
        spectrum = np.fft.rfft(f, axis=0)
        factor = np.zeros(len(self.wavenumbers), dtype=complex)
        factor[1:-1] = 1.0 / (1j * self.wavenumbers[1:-1])
        spectrum = spectrum * self._multiplier(factor, f.ndim)
        return np.fft.irfft(spectrum, n=self.size, axis=0)

    def mean(self, f: np.ndarray) -> np.ndarray:
        return np.asarray(f, dtype=float).mean(axis=0)

    def integrate(self, f: np.ndarray) -> np.ndarray:
        """Trapezoidal (spectrally exact) integral over the period"""
        return 2 * np.pi * self.mean(f)

    def refined(self, size: int) -> "LoopGrid":
        """Same loop resampled by zero-padding its spectrum"""
        spectrum = np.fft.rfft(self.values, axis=0)
        padded = np.zeros((size // 2 + 1, self.dimension), dtype=complex)
        keep = min(len(spectrum), len(padded)) - 1
        padded[:keep] = spectrum[:keep]
        return LoopGrid(np.fft.irfft(padded, n=size, axis=0) * size / self.size)


def constant_loop(point, size: Optional[int] = None) -> LoopGrid:
    size = size or settings.default_grid
    row = np.array([float(Fraction(value)) for value in point])
    return LoopGrid(np.tile(row, (size, 1)))


class LoopMode(BaseModel):
    """Fourier data of one coordinate: mean + sum a_m cos(mx) + b_m sin(mx)"""

    coord: int = Field(ge=0)
    mean: Coefficient = 0
    cos: List[Coefficient] = Field(default_factory=list)
    sin: List[Coefficient] = Field(default_factory=list)

    @field_validator("mean", "cos", "sin")
    @classmethod
    def rational_strings(cls, value):
        for item in value if isinstance(value, list) else [value]:
            if isinstance(item, str):
                try:
                    Fraction(item.strip())
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"Invalid rational coefficient '{item}'")
        return value

    def sample(self, x: np.ndarray) -> np.ndarray:
        values = np.full(len(x), _coefficient_value(self.mean))
        for m, a in enumerate(self.cos, start=1):
            values += _coefficient_value(a) * np.cos(m * x)
        for m, b in enumerate(self.sin, start=1):
            values += _coefficient_value(b) * np.sin(m * x)
        return values


class LoopSpec(BaseModel):
    """Either {"loop": [...]} or the bare list of per-coordinate entries"""

    loop: List[LoopMode]

    @model_validator(mode="before")
    @classmethod
    def bare_entries(cls, value):
        return {"loop": value} if isinstance(value, list) else value

    @property
    def dimension(self) -> int:
        return len(self.loop)

    @field_validator("loop")
    @classmethod
    def one_entry_per_coordinate(cls, value: List[LoopMode]) -> List[LoopMode]:
        coords = sorted(mode.coord for mode in value)
        if coords != list(range(len(value))):
            raise ValueError(f"Coordinates must be 0..{len(value) - 1} exactly once, got {coords}")
        return sorted(value, key=lambda mode: mode.coord)

    def to_grid(self, size: Optional[int] = None) -> LoopGrid:
        size = size or settings.default_grid
        x = 2 * np.pi * np.arange(size) / size
        return LoopGrid(np.column_stack([mode.sample(x) for mode in self.loop]))


def load_loop_spec(path: Union[str, Path]) -> LoopSpec:
    """Read a Fourier loop file; malformed content raises InputFormatError"""
    path = Path(path)
    try:
        return LoopSpec.model_validate(json.loads(path.read_text()))
    except FileNotFoundError:
        raise InputFormatError(f"Loop file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None
    except ValidationError as e:
        raise InputFormatError(f"{path}: {e.errors()[0]['msg']}") from None


def _amplitude_budget(data: FrobeniusData, mean) -> float:
    """Largest coordinate deviation that keeps every covector away from zero"""
    fraction = settings.loop_amplitude_fraction
    system = data.covector_system
    if system is None or not len(system):
        return fraction * max(1.0, max(abs(float(value)) for value in mean))
    distances = [
        abs(float(covector.pair(mean))) / float(sum(abs(value) for value in covector.direction))
        for covector in system.covectors
    ]
    return fraction * min(distances)


def random_loop(
    data: FrobeniusData,
    rng: np.random.Generator,
    modes: Optional[int] = None,
    bound: Optional[int] = None,
) -> LoopSpec:
    """
    Smooth admissible loop around a sampled admissible point.

    Each coordinate deviates from the mean by at most the amplitude budget,
    so |v(u(x))| >= (1 - fraction) |v(mean)| for every covector.
    """
    modes = modes or settings.loop_modes
    mean = sample_admissible_point(data.dimension, data.is_admissible, rng, bound)
    budget = _amplitude_budget(data, mean)
    per_coefficient = budget / (2 * modes)
    entries = []
    for coord in range(data.dimension):
        cos = rng.uniform(-per_coefficient, per_coefficient, size=modes)
        sin = rng.uniform(-per_coefficient, per_coefficient, size=modes)
        entries.append(
            LoopMode(coord=coord, mean=str(mean[coord]), cos=cos.tolist(), sin=sin.tolist())
        )
    logger.debug(f"Random loop around {[str(value) for value in mean]} with budget {budget:.3g}")
    return LoopSpec(loop=entries)
