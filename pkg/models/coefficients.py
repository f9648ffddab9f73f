"""
Macroscopic constants of the KdV limit and the sampled KdV profile
"""

from dataclasses import dataclass, asdict

import numpy as np

from .field import PeriodicGrid


@dataclass(frozen=True)
class MacroCoefficients:
    """
    Scalar constants of the KdV limit for one lattice and direction

    ``lam``, ``d1``, ``d2``, ``p1`` and ``p2`` are NaN when the direction is
    singular (see ``KdVService.macro_coefficients(strict=False)``).
    """
    c1: float
    c2: float
    c3: float
    sigma0: float
    lam: float
    a1: float
    a2: float
    a3: float
    a4: float
    a5: float
    b1: float
    b2: float
    b3: float
    b4: float
    b5: float
    d1: float
    d2: float
    p1: float
    p2: float

    @property
    def gap(self) -> float:
        """2 sigma0 - (c1 + c3), the lower bound of the determinant symbol"""
        return 2.0 * self.sigma0 - (self.c1 + self.c3)

    @property
    def kdv_denominator(self) -> float:
        return (self.a1 + self.lam * self.a2) + self.lam * (self.b2 + self.lam * self.b1)

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class KdVProfile:
    """W*(xi) = p1 sech^2(sqrt(d1) xi / 2) and its derivative on a periodic grid"""
    grid: PeriodicGrid
    values: np.ndarray
    derivative: np.ndarray
    d1: float
    d2: float
    p1: float
    p2: float
