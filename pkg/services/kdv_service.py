"""
KdV service - macroscopic constants of the long-wave limit

Business logic for:
- Stiffness sums c1, c2, c3, the sound speed sigma0 and the polarisation ratio lambda
- Fourth and cubic moment sums a1..a5, b1..b5 and the KdV coefficients d1, d2
- Genericity report (Assumption 2)
- The sech^2 profile W* on a periodic grid, its first integral, and alpha sweeps
"""

import logging
import math
from typing import Iterable, List, Optional, Tuple

import numpy as np

from config import Config, DegenerateDirectionError, GenericityError
from models import KdVProfile, LatticeSpec, MacroCoefficients, PeriodicGrid, TaylorData
from schemas.reports import Assumption2Report, ConditionResult, SweepRow
from services.lattice_service import LatticeService

logger = logging.getLogger(__name__)

_NAN = float("nan")


class KdVService:
    """Service for the KdV limit of a lattice direction"""

    @staticmethod
    def macro_constants(taylor: TaylorData, k: np.ndarray) -> Tuple[float, float, float]:
        """
        c1 = sum k^2 alpha_11, c2 = sum k^2 alpha_12, c3 = sum k^2 alpha_22

        Args:
            taylor: Taylor data
            k: couplings, one per bond

        Returns:
            Tuple (c1, c2, c3)
        """
        k2 = np.asarray(k, dtype=float) ** 2
        a = taylor.alpha
        return (float(np.dot(k2, a[:, 0, 0])), float(np.dot(k2, a[:, 0, 1])),
                float(np.dot(k2, a[:, 1, 1])))

    @staticmethod
    def sound_speed(c1: float, c2: float, c3: float, branch: str = "upper") -> float:
        """
        Root of (c1 - sigma)(c3 - sigma) = c2^2

        Args:
            c1, c2, c3: stiffness sums
            branch: "upper" (the admissible one) or "lower"

        Returns:
            sigma0
        """
        root = math.sqrt((c1 - c3) ** 2 + 4.0 * c2 * c2)
        if branch == "upper":
            return 0.5 * ((c1 + c3) + root)
        if branch == "lower":
            return 0.5 * ((c1 + c3) - root)
        raise ValueError(f"unknown branch {branch!r}")

    @staticmethod
    def lambda_ratio(sigma0: float, c1: float, c2: float, c3: float,
                     tolerance: float = Config.SINGULAR_TOLERANCE, decoupled: bool = False) -> float:
        """
        lambda = c2 / (sigma0 - c3)

        Args:
            sigma0, c1, c2, c3: sound speed and stiffness sums
            tolerance: relative size below which a quantity counts as zero
            decoupled: return 0 for c2 = 0 when sigma0 - c3 stays non-zero
                (the longitudinal waves along a lattice axis)

        Raises:
            GenericityError: If c2 (unless decoupled) or sigma0 - c3 vanishes
        """
        scale = max(1.0, abs(sigma0), abs(c1), abs(c3))
        if abs(sigma0 - c3) <= tolerance * scale:
            raise GenericityError(f"sigma0 - c3 = {sigma0 - c3:.3e} vanishes, lambda is undefined")
        if abs(c2) <= tolerance * scale:
            if decoupled:
                return 0.0
            raise GenericityError(f"c2 = {c2:.3e} vanishes, lambda is undefined")
        return c2 / (sigma0 - c3)

    @staticmethod
    def is_decoupled(macro: MacroCoefficients, tolerance: float = Config.SINGULAR_TOLERANCE) -> bool:
        """c2 = 0 with a well-defined lambda = 0"""
        scale = max(1.0, abs(macro.sigma0), abs(macro.c1), abs(macro.c3))
        return abs(macro.c2) <= tolerance * scale and macro.lam == 0.0

    @staticmethod
    def moment_sums(taylor: TaylorData, k: np.ndarray) -> dict:
        """The ten moment sums a1..a5, b1..b5"""
        k = np.asarray(k, dtype=float)
        w4 = k ** 4 / 12.0
        w3 = k ** 3 / 2.0
        a, b = taylor.alpha, taylor.beta
        return {
            "a1": float(np.dot(w4, a[:, 0, 0])),
            "a2": float(np.dot(w4, a[:, 0, 1])),
            "b1": float(np.dot(w4, a[:, 1, 1])),
            "b2": float(np.dot(w4, a[:, 1, 0])),
            "a3": float(np.dot(w3, b[:, 0, 0, 0])),
            "a4": float(np.dot(w3, b[:, 0, 1, 1])),
            "a5": float(np.dot(k ** 3, b[:, 0, 0, 1])),
            "b3": float(np.dot(w3, b[:, 1, 1, 1])),
            "b4": float(np.dot(w3, b[:, 1, 0, 0])),
            "b5": float(np.dot(k ** 3, b[:, 1, 0, 1])),
        }

    @staticmethod
    def kdv_coefficients(lam: float, moments: dict,
                         tolerance: float = Config.SINGULAR_TOLERANCE) -> Tuple[float, float]:
        """
        d1 and d2 of the limit equation W'' - d1 W + d2 W^2 = 0

        Args:
            lam: polarisation ratio
            moments: output of ``moment_sums``

        Returns:
            Tuple (d1, d2)

        Raises:
            DegenerateDirectionError: If the common denominator vanishes
        """
        m = moments
        denominator = (m["a1"] + lam * m["a2"]) + lam * (m["b2"] + lam * m["b1"])
        scale = max(abs(m["a1"]), abs(m["b1"]), abs(m["a2"]), abs(m["b2"])) * (1.0 + lam * lam)
        if abs(denominator) <= tolerance * max(scale, 1e-300):
            raise DegenerateDirectionError(denominator)
        d1 = (1.0 + lam * lam) / denominator
        numerator = ((m["a3"] + lam * lam * m["a4"] + lam * m["a5"])
                     + lam * (lam * m["b5"] + lam * lam * m["b3"] + m["b4"]))
        return d1, numerator / denominator

    @staticmethod
    def shape_parameters(d1: float, d2: float) -> Tuple[float, float]:
        """p1 = max W* = 3 d1 / (2 d2) and p2 = max |W*'| = sqrt(d1^3 / (3 d2^2))"""
        if d1 <= 0 or d2 == 0:
            return _NAN, _NAN
        return 3.0 * d1 / (2.0 * d2), math.sqrt(d1 ** 3 / (3.0 * d2 * d2))

    @staticmethod
    def macro_coefficients(taylor: TaylorData, k: np.ndarray, strict: bool = True,
                           branch: str = "upper") -> MacroCoefficients:
        """
        All scalar constants of the KdV limit

        Args:
            taylor: Taylor data
            k: couplings
            strict: raise on singular directions; otherwise fill the undefined constants with NaN
            branch: sound-speed branch

        Returns:
            MacroCoefficients

        Raises:
            GenericityError: If strict and lambda or the KdV denominator is undefined
        """
        c1, c2, c3 = KdVService.macro_constants(taylor, k)
        sigma0 = KdVService.sound_speed(c1, c2, c3, branch)
        moments = KdVService.moment_sums(taylor, k)
        try:
            lam = KdVService.lambda_ratio(sigma0, c1, c2, c3, decoupled=True)
            d1, d2 = KdVService.kdv_coefficients(lam, moments)
        except GenericityError as e:
            if strict:
                raise
            logger.debug("Singular direction: %s", e.message)
            lam = d1 = d2 = _NAN
        p1, p2 = KdVService.shape_parameters(d1, d2)
        return MacroCoefficients(c1=c1, c2=c2, c3=c3, sigma0=sigma0, lam=lam, d1=d1, d2=d2,
                                 p1=p1, p2=p2, **moments)

    @staticmethod
    def check_assumption2(macro: MacroCoefficients, alpha: Optional[float] = None,
                          tolerance: float = Config.SINGULAR_TOLERANCE) -> Assumption2Report:
        """
        Report sigma0 > 0, c2 != 0, d1 > 0 and d2 != 0 with their margins

        NaN values (singular directions) fail their condition. A vanishing c2
        passes when lambda = 0 is well defined; the row then says so in ``detail``.
        """
        scale = max(1.0, abs(macro.sigma0), abs(macro.c1), abs(macro.c3))
        coupling = _condition("c2 != 0", macro.c2, abs(macro.c2) - tolerance * scale)
        if not coupling.passed and KdVService.is_decoupled(macro, tolerance):
            coupling = ConditionResult(name="c2 != 0", value=macro.c2,
                                       margin=abs(macro.sigma0 - macro.c3), passed=True,
                                       detail="c2 = 0 with sigma0 != c3: longitudinal wave, lambda = 0")
        conditions = [
            _condition("sigma0 > 0", macro.sigma0, macro.sigma0),
            coupling,
            _condition("d1 > 0", macro.d1, macro.d1),
            _condition("d2 != 0", macro.d2, abs(macro.d2) - tolerance * max(1.0, abs(macro.d1))),
        ]
        return Assumption2Report(alpha=alpha, passed=all(c.passed for c in conditions),
                                 conditions=conditions)

    @staticmethod
    def require_assumption2(macro: MacroCoefficients, alpha: Optional[float] = None) -> None:
        """
        Raises:
            GenericityError: If any Assumption-2 condition fails
        """
        report = KdVService.check_assumption2(macro, alpha)
        if not report.passed:
            where = f" at alpha={alpha:.6g}" if alpha is not None else ""
            raise GenericityError(f"{', '.join(report.failed())} failed{where}")

    @staticmethod
    def default_grid(d1: float, size: int = Config.GRID_SIZE,
                     half_length: Optional[float] = None) -> PeriodicGrid:
        """Grid on [-L, L) with L = max(40 / sqrt(d1), 40) unless given"""
        if half_length is None:
            half_length = max(Config.DOMAIN_SCALE / math.sqrt(d1), Config.DOMAIN_SCALE)
        return PeriodicGrid(float(half_length), int(size))

    @staticmethod
    def kdv_profile(d1: float, d2: float, grid: PeriodicGrid) -> KdVProfile:
        """
        W*(xi) = 3 d1 / (2 d2) sech^2(sqrt(d1) xi / 2) and its derivative

        The profile is evaluated on |xi| so it is exactly even on the symmetric grid.

        Raises:
            GenericityError: If d1 <= 0 or d2 == 0
        """
        if not d1 > 0:
            raise GenericityError(f"d1 = {d1:.6g} is not positive")
        if d2 == 0 or not math.isfinite(d2):
            raise GenericityError(f"d2 = {d2!r} is not a non-zero number")
        p1, p2 = KdVService.shape_parameters(d1, d2)
        root = math.sqrt(d1)
        x = np.abs(grid.nodes)
        sech2 = 1.0 / np.cosh(0.5 * root * x) ** 2
        values = p1 * sech2
        slope = -p1 * root * sech2 * np.tanh(0.5 * root * x) * np.sign(grid.nodes)
        return KdVProfile(grid, values, slope, d1, d2, p1, p2)

    @staticmethod
    def kdv_first_integral(profile: KdVProfile) -> np.ndarray:
        """1/2 W'^2 - d1/2 W^2 + d2/3 W^3, identically zero along the homoclinic orbit"""
        w, dw = profile.values, profile.derivative
        return 0.5 * dw * dw - 0.5 * profile.d1 * w * w + profile.d2 / 3.0 * w ** 3

    @staticmethod
    def default_alpha_grid(lattice_name: str, points: int = Config.SWEEP_POINTS) -> np.ndarray:
        """[-pi/2, pi/2] for the square lattice, [0, pi] for the others"""
        if lattice_name == "square":
            return np.linspace(-0.5 * math.pi, 0.5 * math.pi, points)
        return np.linspace(0.0, math.pi, points)

    @staticmethod
    def sweep_row(spec: LatticeSpec, taylor: TaylorData, alpha: float) -> SweepRow:
        direction = LatticeService.couplings(spec, alpha)
        macro = KdVService.macro_coefficients(taylor, direction.k, strict=False)
        report = KdVService.check_assumption2(macro, alpha)
        if not report.passed:
            logger.warning("alpha=%.6f on %s is singular: %s", alpha, spec.name,
                           ", ".join(report.failed()))
        return SweepRow(alpha=alpha, c1=macro.c1, c2=macro.c2, c3=macro.c3,
                        sigma0=macro.sigma0, lam=macro.lam, d1=macro.d1, d2=macro.d2,
                        p1=macro.p1, p2=macro.p2, assumption2=report.passed,
                        flags=";".join(report.failed()))

    @staticmethod
    def sweep_alpha(spec: LatticeSpec, alphas: Iterable[float],
                    taylor: Optional[TaylorData] = None) -> List[SweepRow]:
        """
        Constants over an alpha grid

        Singular angles are flagged in the row, never raised.

        Args:
            spec: lattice
            alphas: angles in radians
            taylor: precomputed Taylor data (extracted once when omitted)

        Returns:
            One SweepRow per angle, in input order
        """
        if taylor is None:
            taylor = LatticeService.extract_taylor(spec, remainder_radius=None)
        rows = [KdVService.sweep_row(spec, taylor, float(a)) for a in alphas]
        logger.info("Swept %d angles on the %s lattice", len(rows), spec.name)
        return rows


def _condition(name: str, value: float, margin: float) -> ConditionResult:
    passed = bool(np.isfinite(margin) and margin > 0)
    return ConditionResult(name=name, value=value, margin=margin, passed=passed)
