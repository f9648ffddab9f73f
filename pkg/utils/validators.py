"""
Validation utilities - Helper functions for input validation
"""

import math
import re
from typing import Iterable, List, Optional, Tuple, Union

from config import ConfigurationError

_ANGLE_PATTERN = re.compile(
    r"^\s*(?P<sign>[-+])?\s*(?P<num>\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(?P<den>\d+(?:\.\d*)?))?\s*$"
)


def parse_angle(value: Union[str, float, int], field: str = "alpha") -> float:
    """
    Parse an angle given as a number or as a multiple of pi

    Accepted strings: "pi", "-pi/2", "3pi/8", "3*pi/8", "0.25", ...

    Raises:
        ConfigurationError: If the value cannot be parsed
    """
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip().lower()
    try:
        return float(text)
    except ValueError:
        pass
    match = _ANGLE_PATTERN.match(text)
    if not match:
        raise ConfigurationError(f"cannot parse angle {value!r}", field=field)
    num = float(match.group("num")) if match.group("num") else 1.0
    den = float(match.group("den")) if match.group("den") else 1.0
    if den == 0:
        raise ConfigurationError(f"zero denominator in {value!r}", field=field)
    sign = -1.0 if match.group("sign") == "-" else 1.0
    return sign * num * math.pi / den


def validate_eps_list(eps: Iterable[float], field: str = "eps") -> List[float]:
    """
    Validate a continuation list: positive and strictly descending

    Raises:
        ConfigurationError: If an entry is non-positive or the order is wrong
    """
    values = [float(e) for e in eps]
    for e in values:
        if not e > 0:
            raise ConfigurationError(f"eps must be positive, got {e}", field=field)
    for prev, nxt in zip(values, values[1:]):
        if not nxt < prev:
            raise ConfigurationError("eps list must be strictly descending", field=field)
    return values


def validate_halving(eps: List[float], field: str = "eps", rel_tol: float = 1e-9) -> List[float]:
    """Require at least three values, each half the previous one"""
    if len(eps) < 3:
        raise ConfigurationError("rate study needs at least three eps values", field=field)
    for prev, nxt in zip(eps, eps[1:]):
        if abs(nxt - prev / 2.0) > rel_tol * prev:
            raise ConfigurationError(f"{nxt} is not half of {prev}", field=field)
    return eps


def rational_direction(alpha: float, max_index: int, tol: float = 1e-12) -> Optional[Tuple[int, int]]:
    """
    Primitive integer vector (p, q) with atan2(q, p) == alpha, if one exists

    Only vectors with |p|, |q| <= max_index are considered.
    """
    c, s = math.cos(alpha), math.sin(alpha)
    for p in range(-max_index, max_index + 1):
        for q in range(-max_index, max_index + 1):
            if (p, q) == (0, 0) or math.gcd(p, q) != 1:
                continue
            norm = math.hypot(p, q)
            if abs(p / norm - c) < tol and abs(q / norm - s) < tol:
                return p, q
    return None


def bezout(p: int, q: int) -> Tuple[int, int]:
    """(r, s) with p*r + q*s == 1 for coprime p, q"""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quotient = old_r // r
        old_r, r = r, old_r - quotient * r
        old_s, s = s, old_s - quotient * s
        old_t, t = t, old_t - quotient * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t

