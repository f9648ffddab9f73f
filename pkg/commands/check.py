"""
check command - Assumptions 1, 2 and 4 per requested angle

Writes:
- assumption1.txt, remainder.txt: lattice-wide Taylor checks
- check_summary.csv: one row per alpha
- assumptions_alpha<a>.txt: Assumption-2 and Assumption-4 reports
- tcurve_alpha<a>.csv/.svg: T(z), the delta0 comparison curve and the mu curves
- det_alpha<a>.csv/.svg: det B_eps(z) per configured eps with its lower bound

Exits with 3 when any assumption fails.
"""

import logging
import math

import click
import numpy as np

from commands.common import Run, execute, fan_out, open_run, run_options
from middleware import EXIT_ASSUMPTION, handle_errors
from services import KdVService, LatticeService, VerificationService
from utils.io import DET_COLUMNS, T_COLUMNS, format_report, job_stem, write_table, write_text
from utils.plots import plot_det_curves, plot_dispersion, plot_t_curve

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["alpha", "branch", "assumption2", "assumption4", "sigma0", "gap", "min_margin",
                   "worst_z", "tau", "tau_displayed", "oracle_max_rel_error", "min_det"]


@click.command("check")
@run_options
@handle_errors
def check(config_path, out_dir, threads):
    """Check the structural assumptions for the configured lattice and angles."""
    run = open_run("check", config_path, out_dir, threads)
    execute(run, _check)


def _check(run: Run) -> None:
    cfg = run.config.check
    spec = LatticeService.lattice_from_config(run.config.lattice)
    taylor = LatticeService.extract_taylor(spec, remainder_radius=cfg.remainder_radius)

    assumption1 = LatticeService.check_assumption1(taylor)
    run.record(write_text(run.path("assumption1.txt"), format_report("Assumption 1", assumption1)))
    if not assumption1.passed:
        logger.warning("Assumption 1 fails on the %s lattice (deviation %.3e)", spec.name,
                       assumption1.max_deviation)
        run.flag(EXIT_ASSUMPTION)
    remainder = LatticeService.remainder_bound_check(taylor, cfg.remainder_radius)
    run.record(write_text(run.path("remainder.txt"), format_report("Remainder Lipschitz estimates",
                                                                   remainder)))

    z = VerificationService.default_z_grid(cfg)
    outcomes = fan_out(run, [(alpha, None, lambda a=alpha: _check_angle(run, spec, taylor, a, z))
                             for alpha in cfg.alphas])
    rows = []
    for outcome in outcomes:
        if not outcome.ok:
            run.fail(outcome)
            continue
        row = outcome.value
        rows.append(row)
        if not (row["assumption2"] and row["assumption4"]):
            run.flag(EXIT_ASSUMPTION)
        status = "pass" if row["assumption2"] and row["assumption4"] else "FAIL"
        click.echo(f"alpha={row['alpha']:.6f}: {status} (min margin {row['min_margin']:.3e})")
    run.record(write_table(run.path("check_summary.csv"), rows, SUMMARY_COLUMNS))


def _check_angle(run: Run, spec, taylor, alpha: float, z: np.ndarray) -> dict:
    cfg = run.config.check
    direction = LatticeService.couplings(spec, alpha)
    macro = KdVService.macro_coefficients(taylor, direction.k, strict=False)
    assumption2 = KdVService.check_assumption2(macro, alpha)
    branch_macro = VerificationService.macro_for_branch(macro, cfg.branch)
    assumption4 = VerificationService.check_assumption4(taylor, branch_macro, direction.k, z, cfg.delta0,
                                                        alpha, cfg.branch)
    spectrum = VerificationService.dispersion_spectrum(taylor, direction.k, z)

    stem = job_stem("assumptions", alpha)
    text = "\n\n".join([format_report(f"Assumption 2, alpha={alpha:.6f}", assumption2),
                        format_report(f"Assumption 4, alpha={alpha:.6f}", assumption4, skip=("z_grid",))])
    run.record(write_text(run.path(f"{stem}.txt"), text))

    t = VerificationService.t_function(taylor, branch_macro, direction.k, z)
    bound = cfg.delta0 * np.minimum(np.abs(z), 2.0) ** 2
    tcurve = [dict(zip(T_COLUMNS, values)) for values in zip(z, t, bound, spectrum.mu1, spectrum.mu2)]
    run.record(write_table(run.path(f"{job_stem('tcurve', alpha)}.csv"), tcurve, T_COLUMNS))

    min_det = math.nan
    curves = {}
    if assumption2.passed and cfg.branch == "upper":
        det_rows = []
        for eps in cfg.det_eps:
            det = VerificationService.det_curve(taylor, macro, direction.k, eps, z)
            curves[eps] = (z, det)
            lowest = float(det.min())
            min_det = lowest if math.isnan(min_det) else min(min_det, lowest)
            det_rows.extend({"eps": eps, "z": zz, "det": dd, "lower_bound": macro.gap}
                            for zz, dd in zip(z, det))
        run.record(write_table(run.path(f"{job_stem('det', alpha)}.csv"), det_rows, DET_COLUMNS))

    if run.plots:
        title = f"{spec.name}, alpha={alpha:.4f}"
        run.record(plot_t_curve(run.path(f"{job_stem('tcurve', alpha)}.svg"), z, t, bound, title))
        run.record(plot_dispersion(run.path(f"{job_stem('dispersion', alpha)}.svg"), z,
                                   np.asarray(spectrum.mu1), np.asarray(spectrum.mu2),
                                   branch_macro.sigma0, title))
        if curves:
            run.record(plot_det_curves(run.path(f"{job_stem('det', alpha)}.svg"), curves, macro.gap,
                                       title))

    return {
        "alpha": alpha,
        "branch": cfg.branch,
        "assumption2": assumption2.passed,
        "assumption4": assumption4.passed,
        "sigma0": branch_macro.sigma0,
        "gap": branch_macro.gap,
        "min_margin": assumption4.min_margin,
        "worst_z": assumption4.worst_z,
        "tau": assumption4.tau,
        "tau_displayed": assumption4.tau_displayed,
        "oracle_max_rel_error": assumption4.oracle_max_rel_error,
        "min_det": min_det,
    }
