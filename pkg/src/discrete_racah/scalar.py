"""Exact rational scalars, Pochhammer symbols and a float log-gamma path.

Exact values are :class:`fractions.Fraction` throughout; they are always in
lowest terms with a positive denominator, and never rounded.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

ExactScalar = Fraction

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def to_exact(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` literals to a Fraction.

    Floats are refused: a float literal almost always means a config typo,
    and silently taking its binary expansion would poison exact checks.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rational literals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot use {value!r} ({type(value).__name__}) as an exact scalar")


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not a rational literal 'p/q' or 'p': {text!r}")
    num, den = m.group(1), m.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value) -> str:
    value = to_exact(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def pochhammer(a, m: int) -> Fraction:
    """Rising factorial (a)_m = a (a+1) ... (a+m-1); (a)_0 = 1."""
    if m < 0:
        raise ValueError("pochhammer order must be nonnegative")
    a = to_exact(a)
    result = Fraction(1)
    for i in range(m):
        result *= a + i
    return result


def log_gamma_float(a: float) -> float:
    """Natural log of Gamma(a) for a > 0, in double precision."""
    a = float(a)
    if not a > 0:
        raise ValueError(f"log_gamma_float requires a > 0, got {a}")
    return math.lgamma(a)


def log_abs_exact(value) -> float:
    """log|value| for a nonzero Fraction, safe for huge numerators/denominators."""
    value = to_exact(value)
    if value == 0:
        raise ValueError("log of zero")
    return math.log(abs(value.numerator)) - math.log(value.denominator)


@dataclass(frozen=True, order=True)
class GammaBase:
    """Argument ``value`` of a Gamma factor Gamma(value).

    Weight bookkeeping keeps these symbolic; every Gamma(a) is rewritten as
    Gamma(b) times a rational Pochhammer factor with b in (0, 1].
    """

    value: Fraction

    def __post_init__(self):
        v = to_exact(self.value)
        object.__setattr__(self, "value", v)
        if v.denominator == 1 and v <= 0:
            from .errors import PoleError

            raise PoleError(f"Gamma has a pole at the nonpositive integer {v}")

    def log_gamma(self) -> float:
        return log_gamma_float(self.value)


def split_gamma(a) -> tuple[GammaBase, Fraction]:
    """Return ``(base, factor)`` with Gamma(a) = Gamma(base.value) * factor.

    ``base.value`` is the unique number in (0, 1] congruent to ``a`` mod 1.
    """
    a = to_exact(a)
    base = GammaBase(a)  # raises on poles
    offset = math.ceil(a) - 1
    b = a - offset
    if offset >= 0:
        return GammaBase(b), pochhammer(b, offset)
    # Gamma(a) = Gamma(b) / (a)_{-offset}
    return GammaBase(b), 1 / pochhammer(base.value, -offset)
