"""
fpu2d - KdV-type solitary waves in two-dimensional FPU lattices

A command-line toolkit featuring:
- KdV-limit constants and profiles over the propagation angle (analyze)
- Structural assumption checks with T(z) and det curves (check)
- Fixed-point construction of W_eps = W0 + eps^2 V (solve)
- eps^2 rate study and direct lattice dynamics (verify)

Every run writes CSV tables, SVG figures and a MANIFEST.yaml into one directory.
"""

import click

from commands import register_commands
from config import init_logging


def create_cli() -> click.Group:
    """
    CLI factory

    Builds the ``fpu2d`` group, configures logging from ``-v`` and attaches
    every command.

    Returns:
        The click group
    """
    @click.group(name="fpu2d")
    @click.option("-v", "--verbose", count=True, help="-v for progress, -vv for iteration detail.")
    def cli(verbose):
        """Solitary waves in 2D FPU lattices from their KdV limit."""
        init_logging(verbose)

    register_commands(cli)
    return cli


cli = create_cli()


if __name__ == '__main__':
    cli()
