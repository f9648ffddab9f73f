"""
Periodic grid, two-component fields and Fourier multipliers
"""

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from config.exceptions import ConfigurationError
from .mixins import GridBoundMixin

PARITIES = ("even", "odd", "none")


@dataclass(frozen=True)
class PeriodicGrid:
    """
    Uniform periodic grid on [-L, L) with N nodes

    Nodes are xi_n = (n - N/2) h with h = 2L/N, so xi_n = -L + n h and the
    reflection xi -> -xi maps node n to node (N - n) mod N exactly.
    """
    half_length: float
    size: int

    def __post_init__(self):
        if self.size < 4 or self.size % 2:
            raise ConfigurationError("grid size must be even and at least 4", field="grid.size")
        if not self.half_length > 0:
            raise ConfigurationError("must be positive", field="grid.half_length")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.size

    @cached_property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.size) - self.size // 2) * self.spacing

    @cached_property
    def frequencies(self) -> np.ndarray:
        """z_j = pi j / L in FFT order"""
        return 2.0 * np.pi * np.fft.fftfreq(self.size, d=self.spacing)

    @cached_property
    def half_frequencies(self) -> np.ndarray:
        """Non-negative frequencies of the real transform"""
        return 2.0 * np.pi * np.fft.rfftfreq(self.size, d=self.spacing)

    @cached_property
    def reflection(self) -> np.ndarray:
        return (-np.arange(self.size)) % self.size

    @cached_property
    def half_index(self) -> np.ndarray:
        """Nodes with xi >= 0 followed by the wrap node -L (the even-subspace coordinates)"""
        half = self.size // 2
        return (half + np.arange(half + 1)) % self.size

    @cached_property
    def half_weights(self) -> np.ndarray:
        """Number of grid nodes represented by each even-subspace coordinate"""
        weights = np.full(self.size // 2 + 1, 2.0)
        weights[0] = weights[-1] = 1.0
        return weights


@dataclass(frozen=True, eq=False)
class Field2(GridBoundMixin):
    """Two real components sampled on a shared periodic grid"""
    grid: PeriodicGrid
    values: np.ndarray
    parity: str = "none"

    def __post_init__(self):
        if self.values.shape != (2, self.grid.size):
            raise ConfigurationError(f"expected shape (2, {self.grid.size}), got {self.values.shape}",
                                     field="Field2.values")

    @classmethod
    def zeros(cls, grid: PeriodicGrid, parity: str = "even") -> "Field2":
        return cls(grid, np.zeros((2, grid.size)), parity)

    @classmethod
    def from_components(cls, grid: PeriodicGrid, first, second, parity: str = "none") -> "Field2":
        return cls(grid, np.vstack([np.asarray(first, dtype=float), np.asarray(second, dtype=float)]),
                   parity)

    @property
    def first(self) -> np.ndarray:
        return self.values[0]

    @property
    def second(self) -> np.ndarray:
        return self.values[1]

    def with_values(self, values: np.ndarray, parity: str = None) -> "Field2":
        return replace(self, values=values, parity=self.parity if parity is None else parity)

    def _combined_parity(self, other: "Field2") -> str:
        return self.parity if self.parity == other.parity else "none"

    def __add__(self, other: "Field2") -> "Field2":
        self.require_same_grid(other)
        return Field2(self.grid, self.values + other.values, self._combined_parity(other))

    def __sub__(self, other: "Field2") -> "Field2":
        self.require_same_grid(other)
        return Field2(self.grid, self.values - other.values, self._combined_parity(other))

    def __mul__(self, scalar: float) -> "Field2":
        return Field2(self.grid, self.values * float(scalar), self.parity)

    __rmul__ = __mul__

    def __neg__(self) -> "Field2":
        return self * -1.0


@dataclass(frozen=True, eq=False)
class Multiplier(GridBoundMixin):
    """Symbol samples m(z_j) on the grid's frequency set, FFT order"""
    grid: PeriodicGrid
    symbol: np.ndarray
    even: bool = False

    @classmethod
    def from_function(cls, grid: PeriodicGrid, fn, even: bool = False) -> "Multiplier":
        return cls(grid, np.asarray(fn(grid.frequencies)), even)

    @property
    def half(self) -> np.ndarray:
        """Samples on the non-negative frequencies (valid for even symbols)"""
        n = self.grid.size // 2
        return np.array(self.symbol[: n + 1])

    def __mul__(self, other: "Multiplier") -> "Multiplier":
        self.require_same_grid(other)
        return Multiplier(self.grid, self.symbol * other.symbol, self.even and other.even)
