"""
analyze command - KdV-limit constants over an alpha grid

Writes:
- sweep.csv: alpha, c1, c2, c3, sigma0, lam, d1, d2, p1, p2, assumption2, flags
- sweep.svg: sigma0/lambda, d1/d2 and p1/p2 against alpha
- profiles.csv / profiles.svg: W0 for ``sweep.profile_angles``
"""

import logging

import click
import numpy as np

from commands.common import Run, alpha_grid, execute, fan_out, open_run, run_options
from config import GenericityError
from middleware import handle_errors
from schemas import SweepRow
from services import KdVService, LatticeService
from utils.io import write_field, write_table
from utils.plots import plot_profiles, plot_sweep

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = list(SweepRow.model_fields)


@click.command("analyze")
@run_options
@handle_errors
def analyze(config_path, out_dir, threads):
    """Sweep sigma0, lambda, d1, d2, p1 and p2 over the propagation angle."""
    run = open_run("analyze", config_path, out_dir, threads)
    execute(run, _analyze)


def _analyze(run: Run) -> None:
    spec = LatticeService.lattice_from_config(run.config.lattice)
    taylor = LatticeService.extract_taylor(spec, remainder_radius=None)
    alphas = alpha_grid(run, spec.name)

    chunks = [c for c in np.array_split(alphas, max(1, run.threads)) if c.size]
    outcomes = fan_out(run, [(float(c[0]), None, lambda c=c: KdVService.sweep_alpha(spec, c, taylor))
                             for c in chunks])
    rows = []
    for outcome in outcomes:
        if outcome.ok:
            rows.extend(outcome.value)
        else:
            run.fail(outcome)

    run.record(write_table(run.path("sweep.csv"), rows, SWEEP_COLUMNS))
    singular = sum(not r.assumption2 for r in rows)
    click.echo(f"{spec.name}: {len(rows)} angles, {singular} singular")
    if run.plots and rows:
        run.record(plot_sweep(run.path("sweep.svg"), rows, spec.name))

    profile_angles = run.config.sweep.profile_angles
    if not profile_angles:
        return
    profiles = {}
    grid = None
    for alpha in profile_angles:
        direction = LatticeService.couplings(spec, alpha)
        try:
            macro = KdVService.macro_coefficients(taylor, direction.k)
            KdVService.require_assumption2(macro, alpha)
        except GenericityError as e:
            logger.warning("No KdV profile at alpha=%.6f: %s", alpha, e.message)
            continue
        if grid is None:
            grid = KdVService.default_grid(macro.d1, run.config.grid.size, run.config.grid.half_length)
        profile = KdVService.kdv_profile(macro.d1, macro.d2, grid)
        profiles[f"alpha={alpha:.4f}"] = np.vstack([profile.values, macro.lam * profile.values])
    if not profiles:
        return
    columns = {"xi": grid.nodes}
    for label, values in profiles.items():
        columns[f"W1[{label}]"] = values[0]
        columns[f"W2[{label}]"] = values[1]
    run.record(write_field(run.path("profiles.csv"), columns, {"lattice": spec.name}))
    if run.plots:
        run.record(plot_profiles(run.path("profiles.svg"), grid.nodes, profiles,
                                 f"KdV-limit profiles, {spec.name} lattice"))
