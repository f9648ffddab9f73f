"""
Lattice service - geometries, effective forces and their Taylor data

Business logic for:
- Built-in square, diamond and triangle lattices and custom bond lists
- Couplings k_m for a propagation angle
- Effective forces F^m(x) = grad phi_m(x) - grad phi_m(0)
- Analytic Taylor coefficients with a finite-difference cross-check
- Sampled estimates of the remainder Lipschitz constants
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from config import Config, ConfigurationError, ConsistencyError, DomainError
from models import BondFamily, DirectionData, LatticeSpec, ScalarPotential, TaylorData
from schemas.reports import Assumption1Report, RemainderReport
from schemas.run_config import LatticeConfig, PotentialConfig

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)


def _bond_from_step(step, potential: ScalarPotential, label: str = "") -> BondFamily:
    length = math.hypot(step[0], step[1])
    return BondFamily((step[0] / length, step[1] / length), length, potential, label)


class LatticeService:
    """Service for lattice geometry and effective forces"""

    @staticmethod
    def builtin_lattice(name: str, r_star: float = Config.R_STAR,
                        potential: Optional[ScalarPotential] = None,
                        diagonal_potential: Optional[ScalarPotential] = None) -> LatticeSpec:
        """
        Build one of the built-in lattices

        Args:
            name: "square", "diamond" or "triangle"
            r_star: reference lattice parameter
            potential: spring potential of every bond (harmonic V = (r-1)^2/2 by default)
            diagonal_potential: potential of the diagonal square-lattice bonds (defaults to potential)

        Returns:
            LatticeSpec with M = 4 (square) or M = 3 (diamond, triangle) bond families

        Raises:
            ConfigurationError: If the name is unknown or r_star is not positive
        """
        if not r_star > 0:
            raise ConfigurationError("must be positive", field="r_star")
        potential = potential or ScalarPotential.harmonic()
        diagonal = diagonal_potential or potential
        h = 1.0 / _SQRT2

        if name == "square":
            bonds = (
                BondFamily((1.0, 0.0), 1.0, potential, "horizontal"),
                BondFamily((0.0, 1.0), 1.0, potential, "vertical"),
                BondFamily((h, h), _SQRT2, diagonal, "diagonal"),
                BondFamily((h, -h), _SQRT2, diagonal, "antidiagonal"),
            )
        elif name == "diamond":
            bonds = (
                BondFamily((0.0, 1.0), 1.0, potential, "vertical"),
                BondFamily((h, h), 1.0, potential, "diagonal"),
                BondFamily((h, -h), 1.0, potential, "antidiagonal"),
            )
        elif name == "triangle":
            bonds = (
                BondFamily((1.0, 0.0), 1.0, potential, "0"),
                BondFamily((0.5, _SQRT3 / 2.0), 1.0, potential, "+pi/3"),
                BondFamily((0.5, -_SQRT3 / 2.0), 1.0, potential, "-pi/3"),
            )
        else:
            raise ConfigurationError(f"unknown lattice {name!r}", field="lattice.name")
        return LatticeSpec(name, float(r_star), bonds)

    @staticmethod
    def potential_from_config(cfg: PotentialConfig) -> ScalarPotential:
        if cfg.kind == "harmonic":
            return ScalarPotential.harmonic(cfg.stiffness, cfg.rest_length)
        return ScalarPotential.polynomial(cfg.moduli, cfg.rest_length)

    @staticmethod
    def lattice_from_config(cfg: LatticeConfig) -> LatticeSpec:
        """
        Build a LatticeSpec from the ``lattice`` config section

        Raises:
            ConfigurationError: If the section describes an invalid lattice
        """
        potential = LatticeService.potential_from_config(cfg.potential)
        if cfg.name != "custom":
            diagonal = (LatticeService.potential_from_config(cfg.diagonal_potential)
                        if cfg.diagonal_potential else None)
            return LatticeService.builtin_lattice(cfg.name, cfg.r_star, potential, diagonal)
        bonds = tuple(
            _bond_from_step(b.step,
                            LatticeService.potential_from_config(b.potential) if b.potential else potential,
                            f"bond{m + 1}")
            for m, b in enumerate(cfg.bonds)
        )
        return LatticeSpec("custom", cfg.r_star, bonds)

    @staticmethod
    def couplings(spec: LatticeSpec, alpha: float) -> DirectionData:
        """
        Couplings k_m = kappa . (rho_m e_m) for kappa = (cos alpha, sin alpha)

        Args:
            spec: lattice
            alpha: propagation angle in radians

        Returns:
            DirectionData
        """
        kappa = np.array([math.cos(alpha), math.sin(alpha)])
        axes = np.array([_exact_axis(b) for b in spec.bonds])
        return DirectionData(float(alpha), (float(kappa[0]), float(kappa[1])), axes @ kappa)

    @staticmethod
    def effective_gradient(spec: LatticeSpec, m: int, x) -> np.ndarray:
        """
        F^m(x) = grad phi_m(x) - grad phi_m(0) with phi_m(x) = V_m(|x + rho_m r_* e_m|)

        Evaluated in a form free of cancellation, so F^m is accurate relative to |x|.

        Args:
            spec: lattice
            m: bond index
            x: array of shape (2, ...)

        Returns:
            Array of the same shape as x

        Raises:
            DomainError: If a deformed spring reaches zero length
        """
        x = np.asarray(x, dtype=float)
        return np.stack(_force(spec, m, x[0], x[1]))

    @staticmethod
    def bond_energy(spec: LatticeSpec, m: int, x) -> np.ndarray:
        """
        Bond energy phi_m(x) - phi_m(0) - grad phi_m(0) . x

        Polynomial potentials are summed in Taylor form about the reference length,
        which keeps small deformations free of cancellation.

        Args:
            spec: lattice
            m: bond index
            x: array of shape (2, ...)

        Returns:
            Array of shape x.shape[1:]

        Raises:
            DomainError: If a deformed spring reaches zero length
        """
        x = np.asarray(x, dtype=float)
        return _energy(spec, m, x[0], x[1])

    @staticmethod
    def analytic_taylor(spec: LatticeSpec):
        """
        Analytic alpha^m_{i,j} and beta^m_{i,jk} from V', V'', V''' at the rest length

        Returns:
            Tuple (alpha, beta) of shapes (M, 2, 2) and (M, 2, 2, 2)
        """
        size = spec.size
        alpha = np.zeros((size, 2, 2))
        beta = np.zeros((size, 2, 2, 2))
        eye = np.eye(2)
        for m, bond in enumerate(spec.bonds):
            r0 = spec.rest_length(m)
            n = np.asarray(bond.direction, dtype=float)
            v1 = float(bond.potential.derivative(r0, 1))
            v2 = float(bond.potential.derivative(r0, 2))
            v3 = float(bond.potential.derivative(r0, 3))
            nn = np.outer(n, n)
            alpha[m] = v2 * nn + (v1 / r0) * (eye - nn)
            g = v2 / r0 - v1 / r0 ** 2
            nnn = np.einsum("i,j,k->ijk", n, n, n)
            sym = (np.einsum("ij,k->ijk", eye, n) + np.einsum("ik,j->ijk", eye, n)
                   + np.einsum("jk,i->ijk", eye, n))
            beta[m] = v3 * nnn + g * (sym - 3.0 * nnn)
        return alpha, beta

    @staticmethod
    def finite_difference_taylor(spec: LatticeSpec, steps: Sequence[float] = Config.FD_STEPS):
        """
        Richardson-extrapolated central differences of F^m at 0

        Args:
            spec: lattice
            steps: (h, h/2)

        Returns:
            Tuple (alpha, beta) of the same shapes as ``analytic_taylor``
        """
        h1, h2 = steps
        ratio = (h1 / h2) ** 2
        estimates = [_difference_quotients(spec, h) for h in (h1, h2)]
        alpha = (ratio * estimates[1][0] - estimates[0][0]) / (ratio - 1.0)
        beta = (ratio * estimates[1][1] - estimates[0][1]) / (ratio - 1.0)
        return alpha, beta

    @staticmethod
    def extract_taylor(spec: LatticeSpec, tolerance: float = Config.FD_TOLERANCE,
                       remainder_radius: Optional[float] = 0.1) -> TaylorData:
        """
        Taylor data of every effective force with a mandatory finite-difference cross-check

        Args:
            spec: lattice
            tolerance: relative agreement required between analytic and difference values
            remainder_radius: ball radius for the gamma estimates (None skips them)

        Returns:
            TaylorData

        Raises:
            ConsistencyError: If analytic and finite-difference coefficients disagree
        """
        alpha, beta = LatticeService.analytic_taylor(spec)
        alpha_fd, beta_fd = LatticeService.finite_difference_taylor(spec)
        deviation = max(
            float(np.max(np.abs(alpha - alpha_fd) / np.maximum(1.0, np.abs(alpha)))),
            float(np.max(np.abs(beta - beta_fd) / np.maximum(1.0, np.abs(beta)))),
        )
        if deviation > tolerance:
            raise ConsistencyError(
                f"analytic Taylor coefficients of {spec.name} disagree with finite differences "
                f"(relative deviation {deviation:.3e})", deviation)
        logger.debug("Taylor cross-check for %s: max deviation %.2e", spec.name, deviation)

        remainders = tuple(_remainder(spec, m, alpha[m], beta[m]) for m in range(spec.size))
        taylor = TaylorData(alpha, beta, remainders)
        if remainder_radius:
            report = LatticeService.remainder_bound_check(taylor, remainder_radius, rings=8, rays=12)
            taylor = TaylorData(alpha, beta, remainders, np.array(report.gamma))
        return taylor

    @staticmethod
    def forces(spec: LatticeSpec):
        """Callables (x1, x2) -> (F^m_1, F^m_2), one per bond"""
        return tuple(
            (lambda x1, x2, m=m: _force(spec, m, np.asarray(x1, float), np.asarray(x2, float)))
            for m in range(spec.size)
        )

    @staticmethod
    def check_assumption1(taylor: TaylorData, tolerance: float = Config.SYMMETRY_TOLERANCE) -> Assumption1Report:
        """
        Check alpha_12 = alpha_21, beta_1,22 = beta_2,12 and beta_1,12 = beta_2,11

        Args:
            taylor: Taylor data
            tolerance: relative tolerance

        Returns:
            Assumption1Report
        """
        deviations = []
        for m in range(taylor.size):
            a, b = taylor.alpha[m], taylor.beta[m]
            pairs = [(a[0, 1], a[1, 0]), (b[0, 1, 1], b[1, 0, 1]), (b[0, 0, 1], b[1, 0, 0])]
            scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
            deviations.append(max(abs(p - q) for p, q in pairs) / scale)
        worst = max(deviations) if deviations else 0.0
        return Assumption1Report(passed=worst <= tolerance, tolerance=tolerance,
                                 max_deviation=worst, deviations=deviations)

    @staticmethod
    def remainder_bound_check(taylor: TaylorData, radius: float, rings: int = 12,
                              rays: int = 24) -> RemainderReport:
        """
        Estimate gamma^m_i from the quotient
        |Psi(x) - Psi(y)| / ((|x|^2 + |y|^2)(|x1 - y1| + |x2 - y2|))
        over all pairs of a polar mesh of the ball of the given radius

        Args:
            taylor: Taylor data
            radius: ball radius (> 0)
            rings: radial mesh levels
            rays: angular mesh directions

        Returns:
            RemainderReport with the largest quotient per bond and component
        """
        if not radius > 0:
            raise ConfigurationError("must be positive", field="remainder_radius")
        radii = radius * np.arange(1, rings + 1) / rings
        angles = 2.0 * np.pi * np.arange(rays) / rays
        px = np.concatenate([[0.0], np.outer(radii, np.cos(angles)).ravel()])
        py = np.concatenate([[0.0], np.outer(radii, np.sin(angles)).ravel()])
        i, j = np.triu_indices(px.size, k=1)
        weight = (px[i] ** 2 + py[i] ** 2 + px[j] ** 2 + py[j] ** 2) * (
            np.abs(px[i] - px[j]) + np.abs(py[i] - py[j]))
        gamma = np.zeros((taylor.size, 2))
        for m in range(taylor.size):
            psi = taylor.remainder(m, px, py)
            for comp in range(2):
                values = np.asarray(psi[comp], dtype=float)
                gamma[m, comp] = float(np.max(np.abs(values[i] - values[j]) / weight))
        return RemainderReport(radius=radius, pairs=int(i.size), gamma=gamma.tolist(),
                               max_quotient=float(gamma.max()))


def _exact_axis(bond: BondFamily) -> np.ndarray:
    """rho * e with integer components snapped (so k_3 = cos + sin exactly on the square lattice)"""
    axis = bond.axis
    rounded = np.rint(axis)
    return np.where(np.abs(axis - rounded) < 1e-12, rounded, axis)


def _force(spec: LatticeSpec, m: int, x1: np.ndarray, x2: np.ndarray):
    bond = spec.bonds[m]
    r0 = spec.rest_length(m)
    o1, o2 = r0 * bond.direction[0], r0 * bond.direction[1]
    y1, y2 = o1 + x1, o2 + x2
    r = np.hypot(y1, y2)
    if np.any(r <= 0.0):
        raise DomainError(f"spring {m} of the {spec.name} lattice reaches zero length",
                          min_length=float(np.min(r)))
    t = (2.0 * (o1 * x1 + o2 * x2) + x1 * x1 + x2 * x2) / (r + r0)
    dv = bond.potential.increment(r0, t, order=1)
    v1 = float(bond.potential.derivative(r0, 1))
    # y/r - o/r0 = (r0 x - t o) / (r r0)
    f1 = dv * y1 / r + v1 * (r0 * x1 - t * o1) / (r * r0)
    f2 = dv * y2 / r + v1 * (r0 * x2 - t * o2) / (r * r0)
    return f1, f2


def _energy(spec: LatticeSpec, m: int, x1: np.ndarray, x2: np.ndarray):
    bond = spec.bonds[m]
    r0 = spec.rest_length(m)
    o1, o2 = r0 * bond.direction[0], r0 * bond.direction[1]
    r = np.hypot(o1 + x1, o2 + x2)
    if np.any(r <= 0.0):
        raise DomainError(f"spring {m} of the {spec.name} lattice reaches zero length",
                          min_length=float(np.min(r)))
    ox = o1 * x1 + o2 * x2
    xx = x1 * x1 + x2 * x2
    t = (2.0 * ox + xx) / (r + r0)
    # t - o.x / r0 = (r0 |x|^2 - t o.x) / (r0 (r + r0))
    v1 = float(bond.potential.derivative(r0, 1))
    if bond.potential.coefficients is not None:
        # quartic at most, so the Taylor sum from second order is exact
        curvature = sum(float(bond.potential.derivative(r0, n)) * t ** n / math.factorial(n)
                        for n in range(2, 5))
    else:
        curvature = bond.potential.increment(r0, t, order=0) - v1 * t
    return curvature + v1 * (r0 * xx - t * ox) / (r0 * (r + r0))


def _remainder(spec: LatticeSpec, m: int, alpha: np.ndarray, beta: np.ndarray):
    def psi(x1, x2):
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        f1, f2 = _force(spec, m, x1, x2)
        out = []
        for i, f in enumerate((f1, f2)):
            lin = alpha[i, 0] * x1 + alpha[i, 1] * x2
            quad = 0.5 * (beta[i, 0, 0] * x1 * x1 + 2.0 * beta[i, 0, 1] * x1 * x2
                          + beta[i, 1, 1] * x2 * x2)
            out.append(f - lin - quad)
        return out[0], out[1]
    return psi


def _difference_quotients(spec: LatticeSpec, h: float):
    size = spec.size
    alpha = np.zeros((size, 2, 2))
    beta = np.zeros((size, 2, 2, 2))
    unit = np.eye(2)
    for m in range(size):
        def F(v):
            return np.array(_force(spec, m, np.asarray(v[0]), np.asarray(v[1])), dtype=float)
        for j in range(2):
            plus, minus = F(h * unit[j]), F(-h * unit[j])
            alpha[m, :, j] = (plus - minus) / (2.0 * h)
            # F(0) = 0
            beta[m, :, j, j] = (plus + minus) / h ** 2
        mixed = (F(h * (unit[0] + unit[1])) - F(h * (unit[0] - unit[1]))
                 - F(h * (unit[1] - unit[0])) + F(-h * (unit[0] + unit[1]))) / (4.0 * h ** 2)
        beta[m, :, 0, 1] = beta[m, :, 1, 0] = mixed
    return alpha, beta
