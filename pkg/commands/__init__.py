"""
Commands package - click commands of the fpu2d CLI
"""

from .analyze import analyze
from .check import check
from .solve import solve
from .verify import verify

__all__ = ['analyze', 'check', 'solve', 'verify', 'register_commands']


def register_commands(group):
    """Attach every command to a click group"""
    for command in (analyze, check, solve, verify):
        group.add_command(command)
