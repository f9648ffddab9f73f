"""
solve command - travelling waves for every configured (alpha, eps)

Each alpha is one continuation job over the descending eps list. Writes:
- solution_alpha<a>_eps<e>.csv: xi, W1, W2, V1, V2 with a metadata header
- solution_alpha<a>_eps<e>.svg: components, W0 and the W2-versus-W1 scatter
- solve_summary.csv: one SolveSummaryRow per (alpha, eps)

Files of completed solves are kept when a later eps fails.
"""

import logging
import math
from typing import List

import click

from commands.common import Run, execute, fan_out, fft_workers, open_run, run_options
from config import FPU2DError
from middleware import handle_errors
from models import LatticeSpec, PeriodicGrid, WaveSolution
from schemas import SolveSummaryRow
from services import KdVService, LatticeService, SolverService, VerificationService
from utils.io import job_stem, write_solution, write_table
from utils.plots import plot_solution

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = list(SolveSummaryRow.model_fields)


@click.command("solve")
@run_options
@handle_errors
def solve(config_path, out_dir, threads):
    """Construct the travelling waves and write profiles and a summary."""
    run = open_run("solve", config_path, out_dir, threads)
    execute(run, _solve)


def configured_grid(run: Run, spec: LatticeSpec, alpha: float) -> PeriodicGrid:
    """Grid of the ``grid`` section; the half length follows d1 unless given"""
    taylor = LatticeService.extract_taylor(spec, remainder_radius=None)
    macro = KdVService.macro_coefficients(taylor, LatticeService.couplings(spec, alpha).k)
    return KdVService.default_grid(macro.d1, run.config.grid.size, run.config.grid.half_length)


def summarize(spec: LatticeSpec, solution: WaveSolution) -> SolveSummaryRow:
    """Summary row with the full-force residual of W_eps and of W0"""
    ctx = solution.context
    return SolveSummaryRow(
        alpha=solution.alpha,
        eps=solution.eps,
        converged=True,
        speed=solution.speed,
        iterations=solution.iterations,
        corrector_norm=solution.corrector_norm,
        deviation_norm=solution.diagnostics["deviation_norm"],
        residual=VerificationService.wave_residual(ctx, solution.profile, spec),
        residual_leading=VerificationService.wave_residual(ctx, solution.leading, spec),
        contraction=solution.diagnostics.get("contraction", math.nan),
    )


def write_outputs(run: Run, spec: LatticeSpec, solution: WaveSolution, row: SolveSummaryRow) -> None:
    stem = job_stem("solution", solution.alpha, solution.eps)
    run.record(write_solution(run.path(f"{stem}.csv"), solution, spec.name, row.residual))
    if run.plots:
        grid = solution.profile.grid
        title = f"{spec.name}, alpha={solution.alpha:.4f}, eps={solution.eps:g}"
        run.record(plot_solution(run.path(f"{stem}.svg"), grid.nodes, solution.profile.values,
                                 solution.leading.values, title))


def solve_direction(run: Run, spec: LatticeSpec, alpha: float, workers: int,
                    rows: List[SolveSummaryRow]) -> List[WaveSolution]:
    """
    Continuation for one angle; every finished solve is summarised and written at once

    Args:
        run: current run
        spec: lattice
        alpha: propagation angle
        workers: FFT threads
        rows: receives one summary row per finished solve

    Raises:
        FPU2DError: The first failing solve, tagged with its eps
    """
    def finished(solution: WaveSolution) -> None:
        row = summarize(spec, solution)
        write_outputs(run, spec, solution, row)
        rows.append(row)

    grid = configured_grid(run, spec, alpha)
    return SolverService.continuation(spec, alpha, run.config.solve.eps, run.config.solve, grid,
                                      workers, callback=finished)


def _solve(run: Run) -> None:
    alphas = run.config.solve.alphas
    spec = LatticeService.lattice_from_config(run.config.lattice)
    workers = fft_workers(run, len(alphas))
    rows_by_alpha = {alpha: [] for alpha in alphas}

    outcomes = fan_out(run, [(alpha, None,
                              lambda a=alpha: solve_direction(run, spec, a, workers, rows_by_alpha[a]))
                             for alpha in alphas])
    rows: List[SolveSummaryRow] = []
    for outcome in outcomes:
        rows.extend(rows_by_alpha[outcome.alpha])
        if outcome.ok:
            continue
        error: FPU2DError = outcome.error
        outcome.eps = getattr(error, "eps", None)
        run.fail(outcome)
        rows.append(SolveSummaryRow(alpha=outcome.alpha,
                                    eps=math.nan if outcome.eps is None else outcome.eps,
                                    converged=False, error=f"{type(error).__name__}: {error.message}"))
    run.record(write_table(run.path("solve_summary.csv"), rows, SUMMARY_COLUMNS))
    for row in rows:
        if row.converged:
            click.echo(f"alpha={row.alpha:.6f} eps={row.eps:g}: c={row.speed:.10f} "
                       f"|V|={row.corrector_norm:.4e} residual={row.residual:.2e}")
        else:
            click.echo(f"alpha={row.alpha:.6f} eps={row.eps:g}: FAILED ({row.error})")
