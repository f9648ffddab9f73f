"""
Solver service - fixed-point construction of the corrector

Business logic for:
- The iteration V <- (1 - theta) V + theta L^-1 (eps^2 (Q[V] + N[V]) + R + P[W0])
- Assembling W_eps = W0 + eps^2 V and c_eps = sqrt(sigma0 + eps^2)
- Continuation over a descending eps list with warm starts
- The displacement profile (antiderivative of W_eps)
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import BallEscapeError, Config, FPU2DError, NonConvergenceError
from models import Field2, LatticeSpec, OperatorContext, PeriodicGrid, WaveSolution
from schemas.run_config import SolveConfig
from services.kdv_service import KdVService
from services.lattice_service import LatticeService
from services.operator_service import OperatorService
from services.spectral_service import SpectralService
from utils.validators import validate_eps_list

logger = logging.getLogger(__name__)


class SolverService:
    """Service for the corrector iteration"""

    @staticmethod
    def fixed_point(ctx: OperatorContext, v_init: Optional[Field2] = None,
                    config: Optional[SolveConfig] = None) -> Tuple[Field2, List[float], dict]:
        """
        Iterate the fixed-point map of the corrector equation

        Convergence is declared when |V_{k+1} - V_k| <= tol_fp * max(1, |V_{k+1}|).
        An increment that stops decreasing below floor_tol (same scaling) is the
        round-off floor of P and is accepted with a warning.

        Args:
            ctx: operator context
            v_init: even starting point (zero when omitted)
            config: iteration settings

        Returns:
            Tuple (V, increment history, diagnostics)

        Raises:
            BallEscapeError: If an iterate leaves the ball of radius D
            NonConvergenceError: If max_iter is exhausted
        """
        config = config or SolveConfig()
        grid = ctx.grid
        e2 = ctx.eps ** 2
        theta = config.relaxation
        w0 = OperatorService.leading_field(ctx)
        p0 = OperatorService.apply_P(ctx, w0)
        source = OperatorService.residual_R(ctx, w0) + p0

        radius = config.ball_radius
        if radius is None:
            first = OperatorService.solve_L(ctx, source, config.tol_lin, config.linear_solver)
            radius = Config.BALL_FACTOR * max(SpectralService.l2_norm(first, grid), 1e-12)

        v = SpectralService.even_project(v_init) if v_init is not None else Field2.zeros(grid)
        history: List[float] = []
        status = None
        for iteration in range(1, config.max_iter + 1):
            rhs = (OperatorService.apply_Q(ctx, v) + OperatorService.apply_N(ctx, v, w0, p0)) * e2 + source
            update = OperatorService.solve_L(ctx, rhs, config.tol_lin, config.linear_solver)
            new = SpectralService.even_project(v * (1.0 - theta) + update * theta)
            increment = SpectralService.l2_norm(new - v, grid)
            norm = SpectralService.l2_norm(new, grid)
            history.append(increment)
            logger.debug("eps=%g iteration %d: |dV|=%.3e |V|=%.6e", ctx.eps, iteration, increment, norm)
            if norm > radius:
                raise BallEscapeError(norm, radius, iteration, history, ctx.eps)
            v = new
            scale = max(1.0, norm)
            if increment <= config.tol_fp * scale:
                status = "converged"
                break
            if (iteration >= 3 and increment <= config.floor_tol * scale
                    and increment >= 0.5 * history[-2]):
                status = "floor"
                logger.warning("eps=%g: increment stagnates at %.3e (relative %.3e), accepted as the "
                               "round-off floor", ctx.eps, increment, increment / scale)
                break
        if status is None:
            raise NonConvergenceError(config.max_iter, history, ctx.eps)

        diagnostics = {
            "corrector_norm": SpectralService.l2_norm(v, grid),
            "ball_radius": float(radius),
            "contraction": SolverService.contraction_estimate(history, config.tol_fp),
            "floor_accepted": float(status == "floor"),
        }
        logger.info("eps=%g converged in %d iterations, |V|=%.6e", ctx.eps, len(history),
                    diagnostics["corrector_norm"])
        return v, history, diagnostics

    @staticmethod
    def contraction_estimate(history: Sequence[float], tol_fp: float = Config.TOL_FP) -> float:
        """Geometric mean of successive increment ratios while the increments are above the floor"""
        usable = [h for h in history if h > 100.0 * tol_fp]
        ratios = [b / a for a, b in zip(usable, usable[1:]) if a > 0 and b > 0]
        if not ratios:
            return float("nan")
        return float(np.exp(np.mean(np.log(ratios))))

    @staticmethod
    def assemble_wave(ctx: OperatorContext, v: Field2, history: Optional[List[float]] = None,
                      diagnostics: Optional[dict] = None) -> WaveSolution:
        """
        W_eps = W0 + eps^2 V and c_eps = sqrt(sigma0 + eps^2)

        Records |W_eps - W0| = eps^2 |V| as ``deviation_norm``.
        """
        w0 = OperatorService.leading_field(ctx)
        e2 = ctx.eps ** 2
        profile = Field2(ctx.grid, w0.values + e2 * v.values, "even")
        diagnostics = dict(diagnostics or {})
        corrector_norm = SpectralService.l2_norm(v, ctx.grid)
        diagnostics.setdefault("corrector_norm", corrector_norm)
        diagnostics["deviation_norm"] = e2 * corrector_norm
        return WaveSolution(
            eps=ctx.eps,
            alpha=ctx.direction.alpha,
            speed=math.sqrt(ctx.macro.sigma0 + e2),
            corrector=v,
            leading=w0,
            profile=profile,
            macro=ctx.macro,
            history=list(history or []),
            diagnostics=diagnostics,
            context=ctx,
        )

    @staticmethod
    def solve(spec: LatticeSpec, alpha: float, eps: float, config: Optional[SolveConfig] = None,
              grid: Optional[PeriodicGrid] = None, threads: int = 1) -> WaveSolution:
        """One (alpha, eps) solve from a cold start"""
        solutions = SolverService.continuation(spec, alpha, [eps], config, grid, threads)
        return solutions[0]

    @staticmethod
    def continuation(spec: LatticeSpec, alpha: float, eps_list: Sequence[float],
                     config: Optional[SolveConfig] = None, grid: Optional[PeriodicGrid] = None,
                     threads: int = 1,
                     callback: Optional[Callable[[WaveSolution], None]] = None) -> List[WaveSolution]:
        """
        Solve for every eps of a descending list, warm-starting from the previous corrector

        Args:
            spec: lattice
            alpha: propagation angle
            eps_list: strictly descending amplitudes
            config: iteration settings (``warm_start`` False gives cold starts)
            grid: periodic grid (default from d1)
            threads: FFT workers per solve
            callback: called with each solution as soon as it exists

        Returns:
            One WaveSolution per eps

        Raises:
            GenericityError: If the direction fails Assumption 2 (before any solve)
            FPU2DError: Any solve error, tagged with the eps it occurred at
        """
        config = config or SolveConfig()
        eps_list = validate_eps_list(eps_list)
        if not eps_list:
            return []
        taylor = LatticeService.extract_taylor(spec, remainder_radius=None)
        direction = LatticeService.couplings(spec, alpha)
        macro = KdVService.macro_coefficients(taylor, direction.k)
        KdVService.require_assumption2(macro, alpha)
        grid = grid or KdVService.default_grid(macro.d1)

        solutions: List[WaveSolution] = []
        previous: Optional[Field2] = None
        for eps in eps_list:
            logger.info("Solving %s alpha=%.6f eps=%g on N=%d", spec.name, alpha, eps, grid.size)
            try:
                ctx = OperatorService.build_context(taylor, direction, eps, grid, macro, threads)
                start = previous if config.warm_start else None
                v, history, diagnostics = SolverService.fixed_point(ctx, start, config)
            except FPU2DError as e:
                if getattr(e, "eps", None) is None:
                    e.eps = eps
                logger.error("Solve failed at alpha=%.6f eps=%g: %s", alpha, eps, e.message)
                raise
            solution = SolverService.assemble_wave(ctx, v, history, diagnostics)
            solutions.append(solution)
            if callback is not None:
                callback(solution)
            previous = v
        return solutions

    @staticmethod
    def displacement_profile(solution: WaveSolution) -> np.ndarray:
        """
        Q_eps with Q_eps' = W_eps and Q_eps(0) = 0, shape (2, N)

        Q_eps is the periodic antiderivative of W_eps - mean plus the ramp mean * xi.
        W_eps is even with a non-zero mean, so the ramp grows linearly across the box and
        carries the displacement jump Q_eps(L) - Q_eps(-L) = 2 L mean = integral of W_eps.
        Q_eps is flat near the ends only where W_eps has decayed.
        """
        return SpectralService.antiderivative(solution.profile.values, solution.profile.grid)
