"""
Verification service - numerical checks of the construction

Business logic for:
- The determinant lower-bound function T(z), its symbol oracle and Assumption 4
- The dispersion curves mu1(z) <= mu2(z)
- The travelling-wave residual of a profile with the full nonlinear forces
- The eps^2 convergence-rate study
"""

import logging
import math
from dataclasses import replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from models import Field2, LatticeSpec, MacroCoefficients, OperatorContext, PeriodicGrid, TaylorData, WaveSolution
from schemas.reports import (
    AssumptionReport,
    ConditionResult,
    DispersionReport,
    RateRow,
    RateStudyReport,
)
from schemas.run_config import CheckConfig, SolveConfig
from services.lattice_service import LatticeService
from services.kdv_service import KdVService
from services.operator_service import OperatorService, one_minus_sinc2
from services.solver_service import SolverService
from services.spectral_service import SpectralService
from utils.validators import validate_halving

logger = logging.getLogger(__name__)


def _moments(taylor: TaylorData, k: np.ndarray, z: np.ndarray):
    """X, Y, Z = sum k^2 alpha_ij S_k(z) and the weighted bracket sum"""
    a = taylor.alpha
    x = np.zeros_like(z)
    y = np.zeros_like(z)
    w = np.zeros_like(z)
    for m, km in enumerate(np.asarray(k, dtype=float)):
        if km == 0.0:
            continue
        s = km * km * one_minus_sinc2(km, z)
        x += a[m, 0, 0] * s
        y += a[m, 0, 1] * s
        w += a[m, 1, 1] * s
    return x, y, w


def _oracle_terms(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray,
                  z) -> Tuple[np.ndarray, np.ndarray]:
    """Symbol oracle for T and its rounding floor"""
    z = np.asarray(z, dtype=float)
    x, y, w = _moments(taylor, k, z)
    m = macro
    if math.isfinite(m.lam):
        sym = OperatorService.symbol_matrix(taylor, m, k, 1.0, z)
        products = np.abs(sym.b11 * sym.b22) + np.abs(sym.b12 * sym.b21)
        det = sym.det
    else:
        diag = (m.sigma0 + 1.0 - m.c1 + x) * (m.sigma0 + 1.0 - m.c3 + w)
        off = (y - m.c2) ** 2
        products = np.abs(diag) + off
        det = diag - off
    oracle = m.gap * (det - m.gap - 1.0 - (x + w))
    floor = 64.0 * np.finfo(float).eps * abs(m.gap) * (products + abs(m.gap) + 1.0 + np.abs(x) + np.abs(w))
    return oracle, floor


class VerificationService:
    """Service for assumption checks, residuals and rate studies"""

    @staticmethod
    def default_z_grid(config: Optional[CheckConfig] = None) -> np.ndarray:
        """Uniform grid on [0, z_max] merged with a refined grid on [0, z_refine_max]"""
        config = config or CheckConfig()
        coarse = np.linspace(0.0, config.z_max, config.z_points)
        fine = np.linspace(0.0, config.z_refine_max, config.z_refine_points)
        return np.unique(np.concatenate([coarse, fine]))

    @staticmethod
    def t_function(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray, z) -> np.ndarray:
        """
        T(z) = gap * [sum k^2 ((sigma0 - c3) a11 + (sigma0 - c1) a22 + 2 c2 a12) S_k(z) + X Z - Y^2]

        with gap = 2 sigma0 - (c1 + c3) and X, Y, Z the S_k-weighted stiffness sums.
        """
        z = np.asarray(z, dtype=float)
        x, y, w = _moments(taylor, k, z)
        m = macro
        bracket = (m.sigma0 - m.c3) * x + (m.sigma0 - m.c1) * w + 2.0 * m.c2 * y + x * w - y * y
        return m.gap * bracket

    @staticmethod
    def t_oracle(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray, z) -> np.ndarray:
        """
        T from the determinant of the operator symbol at eps = 1:
        gap * (det B(z) - gap - 1 - T1(z)) with T1 = X + Z

        Directions without a finite lambda use the determinant of the untransformed symbol.
        """
        return _oracle_terms(taylor, macro, k, z)[0]

    @staticmethod
    def oracle_error(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray, z) -> float:
        """
        Largest deviation of the symbol oracle from T, relative to |T| plus a rounding floor

        The oracle leaves T = O(z^2) after subtracting O(1) terms, so near z = 0 it is only
        accurate to a few ulps of those terms. With the floor
        64 ulp * gap * (|b11 b22| + |b12 b21| + gap + 1 + |X| + |Z|), a value <= 1e-10 means
        |oracle - T| <= 1e-10 * (|T| + floor / 1e-10) at every z.
        """
        z = np.asarray(z, dtype=float)
        if not z.size:
            return 0.0
        oracle, floor = _oracle_terms(taylor, macro, k, z)
        exact = VerificationService.t_function(taylor, macro, k, z)
        scale = np.maximum(np.abs(exact) + floor / 1e-10, np.finfo(float).tiny)
        return float(np.max(np.abs(oracle - exact) / scale))

    @staticmethod
    def tau(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray) -> Tuple[float, float]:
        """
        Quadratic coefficient of T at z = 0 and the same sum with the 1/24 prefactor

        Returns:
            Tuple (tau, tau_displayed)
        """
        m = macro
        k4 = np.asarray(k, dtype=float) ** 4
        a = taylor.alpha
        total = float(np.dot(k4, (m.sigma0 - m.c3) * a[:, 0, 0] + (m.sigma0 - m.c1) * a[:, 1, 1]
                             + 2.0 * m.c2 * a[:, 0, 1]))
        return m.gap * total / 12.0, total / 24.0

    @staticmethod
    def check_assumption4(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray,
                          z_grid: Optional[np.ndarray] = None, delta0: float = Config.DELTA0,
                          alpha: Optional[float] = None, branch: str = "upper") -> AssumptionReport:
        """
        Test T(z) >= delta0 * min(|z|, 2)^2 on a z grid

        Args:
            taylor: Taylor data
            macro: constants (sigma0 of the requested branch)
            k: couplings
            z_grid: non-negative frequencies (default grid when omitted)
            delta0: lower-bound constant
            alpha: angle recorded in the report
            branch: sound-speed branch recorded in the report

        Returns:
            AssumptionReport
        """
        z = VerificationService.default_z_grid() if z_grid is None else np.asarray(z_grid, dtype=float)
        t = VerificationService.t_function(taylor, macro, k, z)
        bound = delta0 * np.minimum(np.abs(z), 2.0) ** 2
        margins = t - bound
        worst = int(np.argmin(margins))
        scale = max(1.0, float(np.max(np.abs(t))))
        tol = 1e-12 * scale

        oracle_error = VerificationService.oracle_error(taylor, macro, k, z)
        t0 = float(VerificationService.t_function(taylor, macro, k, np.zeros(1))[0])
        tau, tau_displayed = VerificationService.tau(taylor, macro, k)
        logger.warning("alpha=%s: tau = %.6e with the gap/12 prefactor, %.6e with the 1/24 prefactor",
                       "n/a" if alpha is None else f"{alpha:.6f}", tau, tau_displayed)

        checks = [
            ConditionResult(name="gap > 0", value=macro.gap, margin=macro.gap, passed=macro.gap > 0),
            ConditionResult(name="T(z) >= delta0 min(|z|, 2)^2", value=float(t[worst]),
                            margin=float(margins[worst]), passed=bool(margins[worst] >= -tol),
                            detail=f"worst z = {float(z[worst]):.6g}"),
            ConditionResult(name="T(0) = 0", value=t0, margin=tol - abs(t0), passed=abs(t0) <= tol),
            ConditionResult(name="T matches symbol oracle", value=oracle_error,
                            margin=1e-10 - oracle_error, passed=oracle_error <= 1e-10),
        ]
        report = AssumptionReport(
            alpha=alpha, branch=branch, passed=all(c.passed for c in checks), delta0=delta0,
            min_margin=float(margins[worst]), worst_z=float(z[worst]), tau=tau,
            tau_displayed=tau_displayed, oracle_max_rel_error=oracle_error, checks=checks,
            z_grid=z.tolist(),
        )
        if not report.passed:
            logger.warning("Assumption 4 fails at alpha=%s: %s", alpha,
                           ", ".join(c.name for c in checks if not c.passed))
        return report

    @staticmethod
    def det_curve(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray, eps: float, z) -> np.ndarray:
        """det of the B_eps symbol at the frequencies z; bounded below by the gap under Assumption 4"""
        return OperatorService.symbol_matrix(taylor, macro, k, eps, z).det

    @staticmethod
    def dispersion_spectrum(taylor: TaylorData, k: np.ndarray, z) -> DispersionReport:
        """
        Eigenvalues mu1 <= mu2 of J(z) = sum k^2 alpha sinc^2(k z / 2)

        Args:
            taylor: Taylor data
            k: couplings
            z: frequencies

        Returns:
            DispersionReport
        """
        z = np.asarray(z, dtype=float)
        a = taylor.alpha
        matrices = np.zeros(z.shape + (2, 2))
        for m, km in enumerate(np.asarray(k, dtype=float)):
            weight = km * km * (1.0 - one_minus_sinc2(km, z))
            matrices += weight[..., None, None] * a[m]
        mu = np.linalg.eigvalsh(0.5 * (matrices + np.swapaxes(matrices, -1, -2)))
        at_zero = np.linalg.eigvalsh(np.einsum("m,mij->ij", np.asarray(k, float) ** 2, a))
        return DispersionReport(z=z.tolist(), mu1=mu[..., 0].tolist(), mu2=mu[..., 1].tolist(),
                                max_mu=float(mu.max()), mu_at_zero=at_zero.tolist())

    @staticmethod
    def wave_residual(ctx: OperatorContext, w: Field2, spec: Optional[LatticeSpec] = None) -> float:
        """
        |eps^2 sigma_eps W - sum k A F(eps^2 k A W)| / |eps^2 sigma_eps W|

        Uses the full nonlinear forces: from ``spec`` through ``effective_gradient``
        when given, otherwise as linear + quadratic + remainder of the Taylor data.
        0/0 is defined as 0.
        """
        e2 = ctx.eps ** 2
        av = OperatorService.bond_averages(ctx, w.values)
        forces = np.zeros_like(av)
        for m, km in enumerate(ctx.k):
            if km == 0.0:
                continue
            x1, x2 = e2 * km * av[m, 0], e2 * km * av[m, 1]
            if spec is not None:
                f = LatticeService.effective_gradient(spec, m, np.stack([x1, x2]))
            else:
                lin = ctx.taylor.linear(m, x1, x2)
                quad = ctx.taylor.quadratic(m, x1, x2)
                rem = ctx.taylor.remainder(m, x1, x2)
                f = np.stack([lin[i] + quad[i] + rem[i] for i in range(2)])
            forces[m] = km * f
        lhs = e2 * ctx.sigma_eps * w.values
        denominator = SpectralService.l2_norm(lhs, ctx.grid)
        numerator = SpectralService.l2_norm(lhs - OperatorService.combine_bonds(ctx, forces), ctx.grid)
        if denominator == 0.0:
            return 0.0
        return numerator / denominator

    @staticmethod
    def rate_from_norms(eps_list: Sequence[float], norms: Sequence[float], alpha: float,
                        lattice: str, window: Tuple[float, float] = Config.RATE_WINDOW) -> RateStudyReport:
        """Ratios of successive |W_eps - W0| with a pass flag for the window"""
        rows: List[RateRow] = []
        for i, (eps, norm) in enumerate(zip(eps_list, norms)):
            ratio = norms[i - 1] / norm if i > 0 and norm > 0 else None
            rows.append(RateRow(eps=eps, deviation_norm=norm, ratio=ratio))
        ratios = [r.ratio for r in rows[1:]]
        passed = bool(ratios) and all(r is not None and window[0] <= r <= window[1] for r in ratios)
        for row in rows:
            logger.info("rate: eps=%g |W - W0|=%.6e ratio=%s", row.eps, row.deviation_norm,
                        "-" if row.ratio is None else f"{row.ratio:.4f}")
        return RateStudyReport(alpha=alpha, lattice=lattice, window=list(window), passed=passed, rows=rows)

    @staticmethod
    def rate_from_solutions(solutions: Sequence[WaveSolution], lattice: str,
                            window: Tuple[float, float] = Config.RATE_WINDOW) -> RateStudyReport:
        if not solutions:
            raise ValueError("no solutions to compare")
        grid = solutions[0].profile.grid
        norms = [SpectralService.l2_norm(s.profile - s.leading, grid) for s in solutions]
        return VerificationService.rate_from_norms([s.eps for s in solutions], norms,
                                                   solutions[0].alpha, lattice, window)

    @staticmethod
    def rate_study(spec: LatticeSpec, alpha: float, eps_list: Sequence[float],
                   config: Optional[SolveConfig] = None, grid: Optional[PeriodicGrid] = None,
                   threads: int = 1,
                   callback: Optional[Callable[[WaveSolution], None]] = None,
                   window: Tuple[float, float] = Config.RATE_WINDOW,
                   ) -> Tuple[RateStudyReport, List[WaveSolution]]:
        """
        Solve at successively halved eps and compare |W_eps - W0|

        Args:
            spec: lattice
            alpha: propagation angle
            eps_list: at least three values, each half the previous
            config: solve settings
            grid: periodic grid (default from d1)
            threads: FFT workers
            callback: passed on to the continuation
            window: accepted range of the successive ratios

        Returns:
            Tuple (report, solutions)

        Raises:
            ConfigurationError: If the eps list is not a halving sequence
            NonConvergenceError: If a solve fails
        """
        eps_list = validate_halving(list(eps_list))
        solutions = SolverService.continuation(spec, alpha, eps_list, config, grid, threads, callback)
        return VerificationService.rate_from_solutions(solutions, spec.name, window), solutions

    @staticmethod
    def macro_for_branch(macro: MacroCoefficients, branch: str) -> MacroCoefficients:
        """Same constants with sigma0 on the requested branch; lambda is undefined off the upper one"""
        if branch == "upper":
            return macro
        return replace(macro, sigma0=KdVService.sound_speed(macro.c1, macro.c2, macro.c3, branch),
                       lam=float("nan"))
