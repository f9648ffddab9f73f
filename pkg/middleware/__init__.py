"""
Middleware package - Cross-cutting decorators for the command surface
"""

from .errors import handle_errors, EXIT_OK, EXIT_CONFIG, EXIT_ASSUMPTION, EXIT_NUMERIC

__all__ = ['handle_errors', 'EXIT_OK', 'EXIT_CONFIG', 'EXIT_ASSUMPTION', 'EXIT_NUMERIC']
