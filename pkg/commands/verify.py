"""
verify command - eps^2 rate study and the direct lattice cross-check

Writes:
- rate.csv / rate.txt / rate.svg: |W_eps - W0|_2 per eps and successive ratios
- solution_alpha<a>_eps<e>.csv/.svg for every solve of the rate study
- dynamics.csv / dynamics.txt / dynamics.svg when ``verify.dynamics`` is set

With ``--solutions DIR`` the rate table is computed from solution files of an
earlier run and nothing is re-solved. A ratio outside the window exits with 4.
"""

import logging

import click

from commands.common import Run, execute, fan_out, fft_workers, open_run, run_options
from commands.solve import configured_grid, summarize, write_outputs
from middleware import EXIT_NUMERIC, handle_errors
from models import LatticeSpec
from schemas import DynamicsReport, RateRow, RateStudyReport
from services import DynamicsService, LatticeService, SolverService, VerificationService
from utils.io import DYNAMICS_COLUMNS, format_report, read_solutions, write_table, write_text
from utils.plots import plot_dynamics, plot_rate

logger = logging.getLogger(__name__)

RATE_COLUMNS = list(RateRow.model_fields)


@click.command("verify")
@run_options
@click.option("--solutions", "solutions_dir", type=click.Path(file_okay=False), default=None,
              help="Directory of solution CSVs; computes the rate table without re-solving.")
@handle_errors
def verify(config_path, out_dir, threads, solutions_dir):
    """Check the eps^2 convergence rate and, optionally, the lattice dynamics."""
    run = open_run("verify", config_path, out_dir, threads)
    if solutions_dir:
        run.config.verify.solutions_dir = solutions_dir
    execute(run, _verify)


def rate_from_files(run: Run, spec: LatticeSpec) -> RateStudyReport:
    """Rate table of previously written solutions for the configured angle"""
    cfg = run.config.verify
    records = read_solutions(cfg.solutions_dir, alpha=cfg.alpha)
    lattice = records[0].metadata.get("lattice", spec.name)
    logger.info("Rate study from %d solution files in %s", len(records), cfg.solutions_dir)
    return VerificationService.rate_from_norms([r.eps for r in records],
                                               [r.deviation_norm for r in records],
                                               cfg.alpha, lattice, tuple(cfg.window))


def rate_by_solving(run: Run, spec: LatticeSpec, workers: int) -> RateStudyReport:
    cfg = run.config.verify
    report, _ = VerificationService.rate_study(
        spec, cfg.alpha, cfg.eps, run.config.solve, configured_grid(run, spec, cfg.alpha), workers,
        callback=lambda solution: write_outputs(run, spec, solution, summarize(spec, solution)),
        window=tuple(cfg.window))
    return report


def run_dynamics(run: Run, spec: LatticeSpec, workers: int) -> DynamicsReport:
    """Solve at the dynamics (alpha, eps) and integrate the lattice from that wave"""
    cfg = run.config.dynamics
    # fails fast on incommensurate directions, before the solve
    DynamicsService.periodic_box(spec, cfg.alpha, cfg.box)
    solution = SolverService.solve(spec, cfg.alpha, cfg.eps, run.config.solve,
                                   configured_grid(run, spec, cfg.alpha), workers)
    return DynamicsService.lattice_dynamics(spec, cfg.alpha, solution, cfg)


def _verify(run: Run) -> None:
    cfg = run.config.verify
    spec = LatticeService.lattice_from_config(run.config.lattice)
    workers = fft_workers(run, 1 + int(cfg.dynamics))
    jobs = []
    if cfg.solutions_dir:
        jobs.append((cfg.alpha, None, lambda: rate_from_files(run, spec)))
    else:
        jobs.append((cfg.alpha, None, lambda: rate_by_solving(run, spec, workers)))
    if cfg.dynamics:
        jobs.append((run.config.dynamics.alpha, run.config.dynamics.eps,
                     lambda: run_dynamics(run, spec, workers)))

    outcomes = fan_out(run, jobs)
    rate = outcomes[0]
    if rate.ok:
        write_rate(run, rate.value)
    else:
        run.fail(rate)
    if cfg.dynamics:
        dynamics = outcomes[1]
        if dynamics.ok:
            write_dynamics(run, dynamics.value)
        else:
            run.fail(dynamics)


def write_rate(run: Run, report: RateStudyReport) -> None:
    run.record(write_table(run.path("rate.csv"), report.rows, RATE_COLUMNS))
    run.record(write_text(run.path("rate.txt"), format_report(
        f"Rate study, {report.lattice}, alpha={report.alpha:.6f}", report)))
    if run.plots:
        run.record(plot_rate(run.path("rate.svg"), [r.eps for r in report.rows],
                             [r.deviation_norm for r in report.rows],
                             f"{report.lattice}, alpha={report.alpha:.4f}"))
    for row in report.rows:
        ratio = "-" if row.ratio is None else f"{row.ratio:.4f}"
        click.echo(f"eps={row.eps:g}: |W - W0|={row.deviation_norm:.6e} ratio={ratio}")
    if not report.passed:
        logger.warning("Rate ratios leave the window [%g, %g]", *report.window)
        click.echo(f"rate ratios outside [{report.window[0]:g}, {report.window[1]:g}]")
        run.flag(EXIT_NUMERIC)


def write_dynamics(run: Run, report: DynamicsReport) -> None:
    rows = [dict(zip(DYNAMICS_COLUMNS, values))
            for values in zip(report.times, report.positions, report.shape_errors)]
    run.record(write_table(run.path("dynamics.csv"), rows, DYNAMICS_COLUMNS))
    run.record(write_text(run.path("dynamics.txt"), format_report(
        f"Lattice dynamics, alpha={report.alpha:.6f}, eps={report.eps:g}", report,
        skip=("times", "positions", "shape_errors"))))
    if run.plots:
        run.record(plot_dynamics(run.path("dynamics.svg"), report))
    click.echo(f"dynamics: speed {report.speed_measured:.6f} vs c_eps {report.speed_expected:.6f} "
               f"(error {report.speed_error:.2e}), energy drift {report.energy_drift:.2e}")
