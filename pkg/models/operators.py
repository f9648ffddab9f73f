"""
Operator context: everything needed to apply B_eps, M_eps, Q_eps, P_eps and L_eps
"""

import threading
from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from .coefficients import KdVProfile, MacroCoefficients
from .field import PeriodicGrid
from .lattice import DirectionData, TaylorData


@dataclass(frozen=True, eq=False)
class SymbolMatrix2:
    """Per-frequency entries of the 2x2 symbol of B_eps = T_eps B_eps^can"""
    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray

    @property
    def det(self) -> np.ndarray:
        return self.b11 * self.b22 - self.b12 * self.b21

    def inverse(self) -> "SymbolMatrix2":
        det = self.det
        return SymbolMatrix2(self.b22 / det, -self.b12 / det, -self.b21 / det, self.b11 / det)


@dataclass(frozen=True, eq=False)
class OperatorContext:
    """
    Immutable operator data for one (lattice, direction, eps)

    Arrays indexed by bond carry the bond index first. ``averages`` and
    ``symbols`` are sampled on the non-negative frequencies of the real
    transform. The dense factorisation of L_eps is built lazily, once, under
    ``lock`` and kept in ``cache``.
    """
    eps: float
    sigma_eps: float
    macro: MacroCoefficients
    taylor: TaylorData
    direction: DirectionData
    grid: PeriodicGrid
    profile: KdVProfile
    averages: np.ndarray
    symbols: SymbolMatrix2
    inverse_symbols: SymbolMatrix2
    averaged_profile: np.ndarray
    eta: np.ndarray
    quadratic_weights: np.ndarray
    threads: int = 1
    cache: Dict[str, Any] = field(default_factory=dict, repr=False)
    lock: Any = field(default_factory=threading.Lock, repr=False)

    @property
    def k(self) -> np.ndarray:
        return self.direction.k

    @property
    def lam(self) -> float:
        return self.macro.lam
