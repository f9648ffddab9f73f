"""
Operator service - the linear and nonlinear operators of the corrector equation

Business logic for:
- Building an immutable OperatorContext for (lattice, direction, eps)
- The 2x2 symbol of B_eps, its determinant and inverse
- Q_eps (quadratic), P_eps (higher order), M_eps (derivative of Q at W0),
  N_eps, R_eps and L_eps = B_eps - M_eps, plus the adjoint of L_eps
- The eps -> 0 operators B0, Q0, L0 and the adjoint of L0
- Solving L_eps V = G on the even subspace (dense LU or preconditioned GMRES)
- Norm checks of the first column of B_eps^-1

Fields are (2, N) arrays on the context grid. Internally every operator also
accepts a leading batch axis so the dense assembly can apply L_eps to many
basis vectors per transform.
"""

import logging
from typing import Optional

import numpy as np
from scipy import fft as sfft
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse.linalg import LinearOperator, gmres

from config import (
    AmplitudeTooLargeError,
    Config,
    DomainError,
    InvertibilityError,
    LinearSolveError,
    ParityError,
)
from models import (
    DirectionData,
    Field2,
    MacroCoefficients,
    OperatorContext,
    PeriodicGrid,
    SymbolMatrix2,
    TaylorData,
)
from schemas.reports import InverseBoundReport
from services.kdv_service import KdVService
from services.spectral_service import SpectralService, sinc_half

logger = logging.getLogger(__name__)


def one_minus_sinc2(eta: float, z) -> np.ndarray:
    """
    S(z) = 1 - sinc^2(eta z / 2), accurate relative to its size near z = 0
    """
    y = 0.5 * eta * np.abs(np.asarray(z, dtype=float))
    out = np.empty_like(y)
    small = y < 0.1
    ys = y[small] ** 2
    # 1 - sin(y)^2 / y^2 = sum_{n >= 2} (-1)^n 2^(2n-1) y^(2n-2) / (2n)!
    series = np.zeros_like(ys)
    term_coeffs = [(-1.0) ** n * 2.0 ** (2 * n - 1) / float(np.prod(np.arange(1, 2 * n + 1)))
                   for n in range(2, 10)]
    for coeff in reversed(term_coeffs):
        series = series * ys + coeff
    out[small] = series * ys
    large = ~small
    sinc = np.sin(y[large]) / y[large]
    out[large] = 1.0 - sinc * sinc
    return out


def eta_coefficients(taylor: TaylorData, k: np.ndarray, lam: float) -> np.ndarray:
    """
    Per-bond coefficients of M_eps, shape (M, 2, 2)

    Row 1 holds the lambda-combination of both force components, row 2 the
    second component only (the eps^2 factor is applied by ``apply_M``).
    """
    b = taylor.beta
    k3 = np.asarray(k, dtype=float) ** 3
    eta = np.empty((taylor.size, 2, 2))
    eta[:, 0, 0] = k3 * ((b[:, 0, 0, 0] + lam * b[:, 0, 0, 1]) + lam * (lam * b[:, 1, 0, 1] + b[:, 1, 0, 0]))
    eta[:, 0, 1] = k3 * ((lam * b[:, 0, 1, 1] + b[:, 0, 0, 1]) + lam * (lam * b[:, 1, 1, 1] + b[:, 1, 0, 1]))
    eta[:, 1, 0] = k3 * (lam * b[:, 1, 0, 1] + b[:, 1, 0, 0])
    eta[:, 1, 1] = k3 * (lam * b[:, 1, 1, 1] + b[:, 1, 0, 1])
    return eta


def quadratic_weights(taylor: TaylorData, k: np.ndarray, lam: float, eps: float) -> np.ndarray:
    """
    Coefficients of (U1^2, U1 U2, U2^2) in Q_eps per bond and row, shape (M, 2, 3)
    """
    b = taylor.beta
    k3 = np.asarray(k, dtype=float) ** 3
    w = np.empty((taylor.size, 2, 3))
    w[:, 0, 0] = 0.5 * k3 * (b[:, 0, 0, 0] + lam * b[:, 1, 0, 0])
    w[:, 0, 1] = k3 * (b[:, 0, 0, 1] + lam * b[:, 1, 0, 1])
    w[:, 0, 2] = 0.5 * k3 * (b[:, 0, 1, 1] + lam * b[:, 1, 1, 1])
    w[:, 1, 0] = 0.5 * eps ** 2 * k3 * b[:, 1, 0, 0]
    w[:, 1, 1] = eps ** 2 * k3 * b[:, 1, 0, 1]
    w[:, 1, 2] = 0.5 * eps ** 2 * k3 * b[:, 1, 1, 1]
    return w


class OperatorService:
    """Service for the operator stack of the corrector equation"""

    # ---------------------------------------------------------------- context

    @staticmethod
    def symbol_matrix(taylor: TaylorData, macro: MacroCoefficients, k: np.ndarray,
                      eps: float, z) -> SymbolMatrix2:
        """
        Entries of the symbol of B_eps at the frequencies z

        Args:
            taylor: Taylor data
            macro: constants of the direction
            k: couplings
            eps: amplitude parameter
            z: frequencies (any shape)

        Returns:
            SymbolMatrix2 with arrays shaped like z
        """
        z = np.asarray(z, dtype=float)
        lam = macro.lam
        a = taylor.alpha
        e2 = eps * eps
        x = np.zeros_like(z)
        y = np.zeros_like(z)
        w = np.zeros_like(z)
        for m, km in enumerate(np.asarray(k, dtype=float)):
            if km == 0.0:
                continue
            s = one_minus_sinc2(km * eps, z) / e2
            x += km * km * a[m, 0, 0] * s
            y += km * km * a[m, 0, 1] * s
            w += km * km * a[m, 1, 1] * s
        return SymbolMatrix2(
            b11=1.0 + x + lam * y,
            b12=lam + y + lam * w,
            b21=-macro.c2 + e2 * y,
            b22=(macro.sigma0 - macro.c3) + e2 + e2 * w,
        )

    @staticmethod
    def build_context(taylor: TaylorData, direction: DirectionData, eps: float,
                      grid: Optional[PeriodicGrid] = None, macro: Optional[MacroCoefficients] = None,
                      threads: int = 1, guard: bool = True) -> OperatorContext:
        """
        Precompute everything needed to apply the operators for one eps

        Args:
            taylor: Taylor data of the lattice
            direction: couplings of the propagation angle
            eps: amplitude parameter (> 0)
            grid: periodic grid (default from d1)
            macro: precomputed constants (computed strictly when omitted)
            threads: FFT workers
            guard: enforce the determinant lower bound

        Returns:
            OperatorContext

        Raises:
            GenericityError: If the direction fails Assumption 2
            InvertibilityError: If min det falls below (2 sigma0 - (c1 + c3)) / 2
        """
        if not eps > 0:
            raise ValueError("eps must be positive")
        k = direction.k
        if macro is None:
            macro = KdVService.macro_coefficients(taylor, k)
        KdVService.require_assumption2(macro, direction.alpha)
        if grid is None:
            grid = KdVService.default_grid(macro.d1)
        profile = KdVService.kdv_profile(macro.d1, macro.d2, grid)

        z = grid.half_frequencies
        averages = np.stack([sinc_half(km * eps, z) for km in k])
        symbols = OperatorService.symbol_matrix(taylor, macro, k, eps, z)
        det = symbols.det
        threshold = 0.5 * macro.gap
        if guard and float(det.min()) < threshold:
            raise InvertibilityError(float(det.min()), threshold)
        averaged = sfft.irfft(sfft.rfft(profile.values, workers=threads)[None, :] * averages,
                              n=grid.size, axis=-1, workers=threads)

        ctx = OperatorContext(
            eps=float(eps),
            sigma_eps=macro.sigma0 + eps * eps,
            macro=macro,
            taylor=taylor,
            direction=direction,
            grid=grid,
            profile=profile,
            averages=averages,
            symbols=symbols,
            inverse_symbols=symbols.inverse(),
            averaged_profile=averaged,
            eta=eta_coefficients(taylor, k, macro.lam),
            quadratic_weights=quadratic_weights(taylor, k, macro.lam, eps),
            threads=threads,
        )
        logger.debug("Context alpha=%.6f eps=%g: L=%g N=%d min det=%.6e", direction.alpha, eps,
                     grid.half_length, grid.size, float(det.min()))
        return ctx

    @staticmethod
    def build_b_symbols(ctx: OperatorContext) -> SymbolMatrix2:
        """Symbol of B_eps on the non-negative grid frequencies"""
        return OperatorService.symbol_matrix(ctx.taylor, ctx.macro, ctx.k, ctx.eps,
                                             ctx.grid.half_frequencies)

    @staticmethod
    def leading_field(ctx: OperatorContext) -> Field2:
        """W0 = (W*, lambda W*)"""
        w = ctx.profile.values
        return Field2.from_components(ctx.grid, w, ctx.lam * w, parity="even")

    # ---------------------------------------------------------------- linear

    @staticmethod
    def apply_B(ctx: OperatorContext, v: Field2) -> Field2:
        return v.with_values(_apply_symbol(ctx, ctx.symbols, v.values))

    @staticmethod
    def inv_b_apply(ctx: OperatorContext, g: Field2) -> Field2:
        """
        B_eps^-1 through the cofactor formula per frequency

        Raises:
            InvertibilityError: If the determinant symbol is below its guard
        """
        det_min = float(ctx.symbols.det.min())
        threshold = 0.5 * ctx.macro.gap
        if det_min < threshold:
            raise InvertibilityError(det_min, threshold)
        return g.with_values(_apply_symbol(ctx, ctx.inverse_symbols, g.values))

    @staticmethod
    def apply_M(ctx: OperatorContext, v: Field2) -> Field2:
        return v.with_values(_apply_M(ctx, v.values))

    @staticmethod
    def apply_L(ctx: OperatorContext, v: Field2) -> Field2:
        """L_eps V = B_eps V - M_eps V"""
        return v.with_values(_apply_L(ctx, v.values))

    @staticmethod
    def apply_L_adjoint(ctx: OperatorContext, phi: Field2) -> Field2:
        """Adjoint of L_eps for the grid inner product"""
        return phi.with_values(_apply_L_adjoint(ctx, phi.values))

    # ---------------------------------------------------------------- nonlinear

    @staticmethod
    def apply_Q(ctx: OperatorContext, w: Field2) -> Field2:
        """Quadratic part Q_eps[W]; homogeneous of degree two"""
        return Field2(ctx.grid, _apply_Q(ctx, w.values), _square_parity(w))

    @staticmethod
    def apply_P(ctx: OperatorContext, w: Field2) -> Field2:
        """
        Higher-order part P_eps[W] from the force remainders

        Row 1 is eps^-6 sum k A (Psi_1 + lambda Psi_2), row 2 is eps^-4 sum k A Psi_2,
        both evaluated at eps^2 k A W.

        Raises:
            AmplitudeTooLargeError: If a deformed spring reaches zero length
        """
        return Field2(ctx.grid, _apply_P(ctx, w.values), "even" if w.parity == "even" else "none")

    @staticmethod
    def apply_N(ctx: OperatorContext, v: Field2, w0: Optional[Field2] = None,
                p0: Optional[Field2] = None) -> Field2:
        """
        (P_eps[W0 + eps^2 V] - P_eps[W0]) / eps^2

        Args:
            ctx: operator context
            v: corrector
            w0: base point (the leading field by default)
            p0: P_eps[W0] if already known
        """
        w0 = w0 or OperatorService.leading_field(ctx)
        e2 = ctx.eps ** 2
        base = p0.values if p0 is not None else _apply_P(ctx, w0.values)
        shifted = _apply_P(ctx, w0.values + e2 * v.values)
        return Field2(ctx.grid, (shifted - base) / e2, v.parity if v.parity == "even" else "none")

    @staticmethod
    def residual_R(ctx: OperatorContext, w0: Optional[Field2] = None) -> Field2:
        """(Q_eps[W0] - B_eps W0) / eps^2"""
        w0 = w0 or OperatorService.leading_field(ctx)
        values = (_apply_Q(ctx, w0.values) - _apply_symbol(ctx, ctx.symbols, w0.values)) / ctx.eps ** 2
        return Field2(ctx.grid, values, w0.parity)

    @staticmethod
    def bond_averages(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
        """A_{k_m eps} of every component for every bond, (2, N) -> (M, 2, N)"""
        return _averaged(ctx, values)

    @staticmethod
    def combine_bonds(ctx: OperatorContext, per_bond: np.ndarray) -> np.ndarray:
        """sum_m A_{k_m eps} of per-bond values, (M, 2, N) -> (2, N)"""
        return _outer_average(ctx, per_bond)

    # ---------------------------------------------------------------- eps -> 0

    @staticmethod
    def apply_B0(ctx: OperatorContext, w: Field2) -> Field2:
        m = ctx.macro
        d2 = SpectralService.derivative(w.values, ctx.grid, order=2, workers=ctx.threads)
        row1 = (w.first - (m.a1 + m.lam * m.a2) * d2[0] + m.lam * w.second
                - (m.b2 + m.lam * m.b1) * d2[1])
        row2 = -m.c2 * w.first + (m.sigma0 - m.c3) * w.second
        return w.with_values(np.vstack([row1, row2]))

    @staticmethod
    def apply_Q0(ctx: OperatorContext, w: Field2) -> Field2:
        m = ctx.macro
        w1, w2 = w.first, w.second
        row1 = ((m.a3 + m.lam * m.b4) * w1 * w1 + (m.a5 + m.lam * m.b5) * w1 * w2
                + (m.a4 + m.lam * m.b3) * w2 * w2)
        return Field2(ctx.grid, np.vstack([row1, np.zeros_like(row1)]), _square_parity(w))

    @staticmethod
    def apply_L0(ctx: OperatorContext, phi: Field2) -> Field2:
        """Limit of L_eps: B0 minus the multiplication by W* of the summed eta"""
        e = ctx.eta.sum(axis=0)
        w = ctx.profile.values
        out = OperatorService.apply_B0(ctx, phi).values
        out[0] -= w * (e[0, 0] * phi.first + e[0, 1] * phi.second)
        return phi.with_values(out)

    @staticmethod
    def apply_L0_adjoint(ctx: OperatorContext, phi: Field2) -> Field2:
        m = ctx.macro
        e = ctx.eta.sum(axis=0)
        w = ctx.profile.values
        p1, p2 = phi.first, phi.second
        d2 = SpectralService.derivative(p1, ctx.grid, order=2, workers=ctx.threads)
        row1 = p1 - (m.a1 + m.lam * m.a2) * d2 - e[0, 0] * w * p1 - m.c2 * p2
        row2 = m.lam * p1 - (m.b2 + m.lam * m.b1) * d2 - e[0, 1] * w * p1 + (m.sigma0 - m.c3) * p2
        return phi.with_values(np.vstack([row1, row2]))

    # ---------------------------------------------------------------- solve

    @staticmethod
    def solve_L(ctx: OperatorContext, g: Field2, tol_lin: float = Config.TOL_LIN,
                method: str = "dense", parity_tolerance: float = Config.PARITY_TOLERANCE) -> Field2:
        """
        Solve L_eps V = G on the even subspace

        Args:
            ctx: operator context
            g: right-hand side; an odd part up to ``parity_tolerance`` (relative) is projected away
            tol_lin: required relative residual
            method: "dense" (LU of the assembled even restriction, cached in the context)
                or "gmres" (matrix free, preconditioned by B_eps^-1)
            parity_tolerance: largest acceptable relative odd part

        Returns:
            Even Field2 V with |L V - G| <= tol_lin |G|

        Raises:
            ParityError: If G has a significant odd part
            LinearSolveError: If the residual tolerance is not met
        """
        grid = ctx.grid
        g_norm = SpectralService.l2_norm(g, grid)
        if g_norm == 0.0:
            return Field2.zeros(grid)
        odd = SpectralService.l2_norm(SpectralService.odd_part(g), grid) / g_norm
        if odd > parity_tolerance:
            raise ParityError(odd, parity_tolerance)
        g = SpectralService.even_project(g)

        if method == "dense":
            v, iterations = _solve_dense(ctx, g.values, g_norm, tol_lin)
        elif method == "gmres":
            v, iterations = _solve_gmres(ctx, g.values, tol_lin)
        else:
            raise ValueError(f"unknown linear solver {method!r}")

        residual = SpectralService.l2_norm(_apply_L(ctx, v) - g.values, grid) / g_norm
        if residual > tol_lin:
            raise LinearSolveError(residual, iterations, tol_lin)
        return Field2(grid, v, "even")

    @staticmethod
    def inverse_bound_check(ctx: OperatorContext, g) -> InverseBoundReport:
        """
        |Pi (B^-1)_i1 G|_{H2} / |G| and eps^-2 |(1 - Pi) (B^-1)_i1 G| / |G| for i = 1, 2
        """
        grid = ctx.grid
        g = np.asarray(g, dtype=float)
        g_norm = SpectralService.l2_norm(g, grid)
        cutoff = (np.abs(grid.half_frequencies) <= 2.0 / ctx.eps).astype(float)
        spectrum = sfft.rfft(g, workers=ctx.threads)
        low, high = [], []
        for entry in (ctx.inverse_symbols.b11, ctx.inverse_symbols.b21):
            column = spectrum * entry
            inside = sfft.irfft(column * cutoff, n=grid.size, workers=ctx.threads)
            outside = sfft.irfft(column * (1.0 - cutoff), n=grid.size, workers=ctx.threads)
            low.append(SpectralService.norms(inside, grid).h2 / g_norm)
            high.append(SpectralService.l2_norm(outside, grid) / ctx.eps ** 2 / g_norm)
        return InverseBoundReport(eps=ctx.eps, low_h2=low, high_scaled=high)


# -------------------------------------------------------------------- kernels


def _square_parity(w: Field2) -> str:
    return "even" if w.parity in ("even", "odd") else "none"


def _averaged(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    """A_m applied to every component for every bond: (..., 2, N) -> (..., M, 2, N)"""
    spectrum = sfft.rfft(values, axis=-1, workers=ctx.threads)
    spectrum = spectrum[..., None, :, :] * ctx.averages[:, None, :]
    return sfft.irfft(spectrum, n=ctx.grid.size, axis=-1, workers=ctx.threads)


def _outer_average(ctx: OperatorContext, per_bond: np.ndarray) -> np.ndarray:
    """sum_m A_m of (..., M, 2, N) -> (..., 2, N)"""
    spectrum = sfft.rfft(per_bond, axis=-1, workers=ctx.threads)
    spectrum = np.einsum("...mik,mk->...ik", spectrum, ctx.averages)
    return sfft.irfft(spectrum, n=ctx.grid.size, axis=-1, workers=ctx.threads)


def _apply_symbol(ctx: OperatorContext, sym: SymbolMatrix2, values: np.ndarray,
                  transpose: bool = False) -> np.ndarray:
    spectrum = sfft.rfft(values, axis=-1, workers=ctx.threads)
    s1, s2 = spectrum[..., 0, :], spectrum[..., 1, :]
    if transpose:
        out = np.stack([sym.b11 * s1 + sym.b21 * s2, sym.b12 * s1 + sym.b22 * s2], axis=-2)
    else:
        out = np.stack([sym.b11 * s1 + sym.b12 * s2, sym.b21 * s1 + sym.b22 * s2], axis=-2)
    return sfft.irfft(out, n=ctx.grid.size, axis=-1, workers=ctx.threads)


def _row_scale(ctx: OperatorContext) -> np.ndarray:
    return np.array([1.0, ctx.eps ** 2])[:, None]


def _apply_M(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    av = _averaged(ctx, values)
    mixed = np.einsum("mij,...mjn->...min", ctx.eta, av) * ctx.averaged_profile[:, None, :]
    return _outer_average(ctx, mixed) * _row_scale(ctx)


def _apply_M_adjoint(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    av = _averaged(ctx, values * _row_scale(ctx))
    mixed = np.einsum("mij,...min->...mjn", ctx.eta, av * ctx.averaged_profile[:, None, :])
    return _outer_average(ctx, mixed)


def _apply_L(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    return _apply_symbol(ctx, ctx.symbols, values) - _apply_M(ctx, values)


def _apply_L_adjoint(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    return _apply_symbol(ctx, ctx.symbols, values, transpose=True) - _apply_M_adjoint(ctx, values)


def _apply_Q(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    av = _averaged(ctx, values)
    u1, u2 = av[..., 0:1, :], av[..., 1:2, :]
    w = ctx.quadratic_weights[..., None]
    per_bond = w[:, :, 0] * u1 * u1 + w[:, :, 1] * u1 * u2 + w[:, :, 2] * u2 * u2
    return _outer_average(ctx, per_bond)


def _apply_P(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    eps = ctx.eps
    e2 = eps * eps
    av = _averaged(ctx, values)
    taylor = ctx.taylor
    per_bond = np.zeros_like(av)
    for m, km in enumerate(ctx.k):
        if km == 0.0:
            continue
        x1 = e2 * km * av[m, 0]
        x2 = e2 * km * av[m, 1]
        try:
            psi1, psi2 = taylor.remainder(m, x1, x2)
        except DomainError as e:
            raise AmplitudeTooLargeError(eps, 0.0 if e.min_length is None else e.min_length)
        per_bond[m, 0] = km * (psi1 + ctx.lam * psi2) / eps ** 6
        per_bond[m, 1] = km * psi2 / eps ** 4
    return _outer_average(ctx, per_bond)


def _restrict(ctx: OperatorContext, values: np.ndarray) -> np.ndarray:
    """Even field (..., 2, N) -> half-node coordinates (..., 2K)"""
    half = values[..., ctx.grid.half_index]
    return half.reshape(half.shape[:-2] + (-1,))


def _expand(ctx: OperatorContext, coords: np.ndarray) -> np.ndarray:
    """Half-node coordinates (..., 2K) -> even field (..., 2, N)"""
    grid = ctx.grid
    half = coords.reshape(coords.shape[:-1] + (2, -1))
    out = np.empty(coords.shape[:-1] + (2, grid.size))
    out[..., grid.half_index] = half
    out[..., grid.reflection[grid.half_index]] = half
    return out


def _dense_factor(ctx: OperatorContext):
    with ctx.lock:
        if "lu" in ctx.cache:
            return ctx.cache["lu"]
        grid = ctx.grid
        size = 2 * (grid.size // 2 + 1)
        matrix = np.empty((size, size))
        for start in range(0, size, Config.ASSEMBLY_CHUNK):
            stop = min(start + Config.ASSEMBLY_CHUNK, size)
            basis = np.zeros((stop - start, size))
            basis[np.arange(stop - start), np.arange(start, stop)] = 1.0
            matrix[:, start:stop] = _restrict(ctx, _apply_L(ctx, _expand(ctx, basis))).T
        factor = lu_factor(matrix, check_finite=False)
        logger.debug("Assembled and factorised the even restriction of L (%d x %d)", size, size)
        ctx.cache["lu"] = factor
        return factor


def _solve_dense(ctx: OperatorContext, g: np.ndarray, g_norm: float, tol_lin: float):
    factor = _dense_factor(ctx)
    v = _expand(ctx, lu_solve(factor, _restrict(ctx, g), check_finite=False))
    residual = g - _apply_L(ctx, v)
    iterations = 1
    if SpectralService.l2_norm(residual, ctx.grid) > tol_lin * g_norm:
        v = v + _expand(ctx, lu_solve(factor, _restrict(ctx, residual), check_finite=False))
        iterations = 2
    return v, iterations


def _solve_gmres(ctx: OperatorContext, g: np.ndarray, tol_lin: float):
    size = 2 * (ctx.grid.size // 2 + 1)
    operator = LinearOperator((size, size), dtype=float,
                              matvec=lambda x: _restrict(ctx, _apply_L(ctx, _expand(ctx, x))))
    preconditioner = LinearOperator(
        (size, size), dtype=float,
        matvec=lambda x: _restrict(ctx, _apply_symbol(ctx, ctx.inverse_symbols, _expand(ctx, x))))
    counter = {"n": 0}

    def count(_):
        counter["n"] += 1

    rhs = _restrict(ctx, g)
    x, info = gmres(operator, rhs, rtol=0.1 * tol_lin, atol=0.0, restart=200, maxiter=50,
                    M=preconditioner, callback=count, callback_type="pr_norm")
    if info < 0:
        raise LinearSolveError(float("nan"), counter["n"], tol_lin)
    return _expand(ctx, x), counter["n"]

