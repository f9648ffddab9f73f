"""
Unit tests for validation utilities
"""

import math

import pytest

from config import ConfigurationError
from utils.validators import bezout, parse_angle, rational_direction, validate_eps_list, validate_halving


@pytest.mark.unit
class TestParseAngle:
    """Test angle parsing"""

    @pytest.mark.parametrize('text, expected', [
        ('pi', math.pi),
        ('-pi/2', -math.pi / 2),
        ('3pi/8', 3 * math.pi / 8),
        ('3*pi/8', 3 * math.pi / 8),
        ('0.25', 0.25),
        (0.5, 0.5),
        (1, 1.0),
    ])
    def test_valid(self, text, expected):
        assert parse_angle(text) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize('text', ['tau', 'pi/0', '', 'pi pi'])
    def test_invalid(self, text):
        with pytest.raises(ConfigurationError):
            parse_angle(text)


@pytest.mark.unit
class TestEpsLists:
    """Test continuation and rate-study eps lists"""

    def test_descending(self):
        assert validate_eps_list([0.2, 0.1]) == [0.2, 0.1]

    def test_not_descending(self):
        with pytest.raises(ConfigurationError):
            validate_eps_list([0.1, 0.1])

    def test_non_positive(self):
        with pytest.raises(ConfigurationError):
            validate_eps_list([0.1, 0.0])

    def test_halving(self):
        assert validate_halving([0.2, 0.1, 0.05]) == [0.2, 0.1, 0.05]

    def test_halving_needs_three(self):
        with pytest.raises(ConfigurationError):
            validate_halving([0.2, 0.1])

    def test_not_halving(self):
        with pytest.raises(ConfigurationError):
            validate_halving([0.2, 0.1, 0.04])


@pytest.mark.unit
class TestDirections:
    """Test rational directions and the Bezout pair"""

    @pytest.mark.parametrize('alpha, expected', [
        (0.0, (1, 0)),
        (math.pi / 4, (1, 1)),
        (math.pi / 2, (0, 1)),
        (math.atan2(1, 2), (2, 1)),
        (-math.pi / 4, (1, -1)),
    ])
    def test_rational(self, alpha, expected):
        assert rational_direction(alpha, 12) == expected

    def test_incommensurate(self):
        """Test an angle without a small integer direction"""
        assert rational_direction(0.3, 12) is None

    @pytest.mark.parametrize('p, q', [(1, 0), (0, 1), (2, 1), (3, 5), (-4, 7), (1, -1)])
    def test_bezout(self, p, q):
        r, s = bezout(p, q)
        assert p * r + q * s == 1
