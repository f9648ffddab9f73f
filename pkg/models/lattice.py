"""
Lattice geometry and the Taylor data of its effective forces
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from config.exceptions import ConfigurationError
from .potential import ScalarPotential

ForcePair = Tuple[np.ndarray, np.ndarray]
PlanarMap = Callable[[np.ndarray, np.ndarray], ForcePair]

LATTICE_NAMES = ("square", "diamond", "triangle", "custom")


@dataclass(frozen=True, eq=False)
class BondFamily:
    """
    One family of springs: unit direction e, rest multiplier rho and potential

    The rest offset of the spring is rho * r_star * e; in lattice index units the
    neighbour sits at rho * e.
    """
    direction: Tuple[float, float]
    rest_multiplier: float
    potential: ScalarPotential
    label: str = ""

    def __post_init__(self):
        norm = float(np.hypot(*self.direction))
        if abs(norm - 1.0) > 1e-14:
            raise ConfigurationError(f"bond direction {self.direction} is not a unit vector "
                                     f"(|e| = {norm!r})", field="bonds.direction")
        if not self.rest_multiplier > 0:
            raise ConfigurationError("rest multiplier must be positive", field="bonds.rho")

    @property
    def axis(self) -> np.ndarray:
        """Neighbour displacement rho * e in lattice index units"""
        return self.rest_multiplier * np.asarray(self.direction, dtype=float)


@dataclass(frozen=True, eq=False)
class LatticeSpec:
    """Named 2D lattice: reference spacing r_star and an ordered list of bond families"""
    name: str
    r_star: float
    bonds: Tuple[BondFamily, ...]

    def __post_init__(self):
        if len(self.bonds) < 1:
            raise ConfigurationError("a lattice needs at least one bond family", field="bonds")
        if not self.r_star > 0:
            raise ConfigurationError("must be positive", field="r_star")

    @property
    def size(self) -> int:
        return len(self.bonds)

    def offset(self, m: int) -> np.ndarray:
        """Rest vector rho_m * r_star * e_m of bond family m"""
        return self.r_star * self.bonds[m].axis

    def rest_length(self, m: int) -> float:
        return self.r_star * self.bonds[m].rest_multiplier

    def integer_step(self, m: int) -> Optional[Tuple[int, int]]:
        """Index step of bond m if rho_m * e_m is an integer vector, else None"""
        axis = self.bonds[m].axis
        rounded = np.rint(axis)
        if np.max(np.abs(axis - rounded)) > 1e-12:
            return None
        return int(rounded[0]), int(rounded[1])


@dataclass(frozen=True, eq=False)
class DirectionData:
    """Propagation angle alpha, wave vector kappa and the couplings k_m = kappa . (rho_m e_m)"""
    alpha: float
    kappa: Tuple[float, float]
    k: np.ndarray


@dataclass(frozen=True, eq=False)
class TaylorData:
    """
    Linear and quadratic Taylor coefficients of the effective forces

    ``alpha[m, i, j]`` is alpha^m_{i,j}, ``beta[m, i, j, l]`` is beta^m_{i,jl}, and
    ``remainders[m](x1, x2)`` returns (Psi^m_1, Psi^m_2), the part of F^m beyond
    second order.
    """
    alpha: np.ndarray
    beta: np.ndarray
    remainders: Tuple[PlanarMap, ...]
    gamma: Optional[np.ndarray] = field(default=None)

    @property
    def size(self) -> int:
        return self.alpha.shape[0]

    def linear(self, m: int, x1, x2) -> ForcePair:
        a = self.alpha[m]
        return a[0, 0] * x1 + a[0, 1] * x2, a[1, 0] * x1 + a[1, 1] * x2

    def quadratic(self, m: int, x1, x2) -> ForcePair:
        b = self.beta[m]
        out = []
        for i in range(2):
            out.append(0.5 * (b[i, 0, 0] * x1 * x1 + 2.0 * b[i, 0, 1] * x1 * x2
                              + b[i, 1, 1] * x2 * x2))
        return out[0], out[1]

    def remainder(self, m: int, x1, x2) -> ForcePair:
        return self.remainders[m](np.asarray(x1, dtype=float), np.asarray(x2, dtype=float))

    def without_remainder(self) -> "TaylorData":
        """Copy whose forces are exactly quadratic (Psi identically zero)"""
        def zero(x1, x2):
            z = np.zeros(np.broadcast(x1, x2).shape)
            return z, z.copy()
        return replace(self, remainders=tuple(zero for _ in range(self.size)),
                       gamma=np.zeros((self.size, 2)))

    def with_remainders(self, remainders) -> "TaylorData":
        return replace(self, remainders=tuple(remainders), gamma=None)
