"""
Error middleware - maps the fpu2d error hierarchy to process exit codes

Provides:
- @handle_errors decorator for CLI commands
"""

import logging
from functools import wraps

import click

from config import FPU2DError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3
EXIT_NUMERIC = 4


def handle_errors(f):
    """
    Decorator turning fpu2d errors into a message on stderr and an exit code

    Errors outside the hierarchy propagate unchanged.

    Usage:
        @click.command()
        @handle_errors
        def solve():
            ...
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except FPU2DError as e:
            logger.error("%s: %s", type(e).__name__, e.message)
            click.echo(f"Error: {e.message}", err=True)
            raise SystemExit(e.exit_code)

    return decorated_function
