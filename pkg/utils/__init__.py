"""
Utilities package - file formats (io), figures (plots), run manifest and validators

Only the validators are re-exported here: io and manifest depend on the schemas,
which in turn use the validators.
"""

from .validators import bezout, parse_angle, rational_direction, validate_eps_list, validate_halving

__all__ = [
    'bezout',
    'parse_angle',
    'rational_direction',
    'validate_eps_list',
    'validate_halving',
]
