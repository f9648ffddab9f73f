"""
Scalar pair potential V(r) of a spring with its first four derivatives
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

ArrayFn = Callable[[np.ndarray], np.ndarray]

POTENTIAL_KINDS = ("harmonic", "polynomial", "user")


@lru_cache(maxsize=256)
def _shifted_coefficients(coefficients: Tuple[float, ...], order: int, d_ref: float) -> Tuple[float, ...]:
    """Coefficients in t of p^(order)(d_ref + t) - p^(order)(d_ref)."""
    poly = Polynomial(coefficients).deriv(order) if order else Polynomial(coefficients)
    shifted = poly(Polynomial([d_ref, 1.0]))
    coef = np.array(shifted.coef, dtype=float)
    coef[0] = 0.0
    return tuple(coef)


@dataclass(frozen=True, eq=False)
class ScalarPotential:
    """
    Spring potential V(r) and derivatives V', V'', V''', V''''

    Polynomial potentials are stored as a polynomial in d = r - rest_length, which
    lets ``increment`` evaluate V^(n)(r_ref + t) - V^(n)(r_ref) without cancellation.
    """
    kind: str
    derivatives: Tuple[ArrayFn, ...]
    rest_length: float = 1.0
    coefficients: Optional[Tuple[float, ...]] = None
    parameters: dict = field(default_factory=dict)

    @classmethod
    def harmonic(cls, stiffness: float = 1.0, rest_length: float = 1.0) -> "ScalarPotential":
        """V(r) = stiffness/2 * (r - rest_length)^2"""
        potential = cls.polynomial((stiffness, 0.0, 0.0), rest_length)
        return cls(
            kind="harmonic",
            derivatives=potential.derivatives,
            rest_length=rest_length,
            coefficients=potential.coefficients,
            parameters={"stiffness": stiffness, "rest_length": rest_length},
        )

    @classmethod
    def polynomial(cls, moduli: Sequence[float], rest_length: float = 1.0) -> "ScalarPotential":
        """
        FPU-type potential V(r) = sum_n c_n/n * (r - rest_length)^n for n = 2, 3, 4

        Args:
            moduli: (c2, c3, c4); missing trailing entries are zero
            rest_length: length at which the spring is force free
        """
        moduli = tuple(float(c) for c in moduli) + (0.0,) * (3 - len(moduli))
        coefficients = (0.0, 0.0, moduli[0] / 2.0, moduli[1] / 3.0, moduli[2] / 4.0)
        poly = Polynomial(coefficients)
        derivs = tuple(poly.deriv(n) if n else poly for n in range(5))

        def make(p: Polynomial) -> ArrayFn:
            return lambda r: p(np.asarray(r, dtype=float) - rest_length)

        return cls(
            kind="polynomial",
            derivatives=tuple(make(p) for p in derivs),
            rest_length=rest_length,
            coefficients=coefficients,
            parameters={"moduli": list(moduli), "rest_length": rest_length},
        )

    @classmethod
    def from_callables(cls, value: ArrayFn, first: ArrayFn, second: ArrayFn, third: ArrayFn,
                       fourth: Optional[ArrayFn] = None, **parameters) -> "ScalarPotential":
        """User-defined potential from explicit derivative callables"""
        if fourth is None:
            def fourth(r):
                return np.full_like(np.asarray(r, dtype=float), np.nan)
        return cls(kind="user", derivatives=(value, first, second, third, fourth),
                   parameters=dict(parameters))

    def __call__(self, r):
        return self.derivatives[0](r)

    def derivative(self, r, order: int = 1):
        """V^(order)(r) for order 0..4"""
        return self.derivatives[order](r)

    def increment(self, r_ref: float, t, order: int = 0):
        """
        V^(order)(r_ref + t) - V^(order)(r_ref)

        Exact up to rounding in t for polynomial potentials; plain difference otherwise.
        """
        t = np.asarray(t, dtype=float)
        if self.coefficients is None:
            return self.derivatives[order](r_ref + t) - self.derivatives[order](r_ref)
        coef = _shifted_coefficients(self.coefficients, order, float(r_ref - self.rest_length))
        return Polynomial(coef)(t)
