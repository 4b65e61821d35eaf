"""Angle expressions: rational multiples of pi plus decimal literals.

``Angle`` keeps both parts exactly (``pi_coeff * pi + offset`` with rational
coefficients) so the relation search can evaluate it at any precision and
recognise exact multiples of pi/4.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath

_TERM = re.compile(
    r"""
    (?P<sign>[+-]?)\s*
    (?:
        (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)\s*(?:\*\s*)?(?P<pi1>pi)?
      | (?P<pi2>pi)
    )
    (?:\s*/\s*(?P<den>\d+(?:\s*\^\s*\d+)?))?
    """,
    re.VERBOSE,
)


class AngleParseError(ValueError):
    pass


@dataclass(frozen=True)
class Angle:
    pi_coeff: Fraction = Fraction(0)
    offset: Fraction = Fraction(0)
    text: str = ""

    @classmethod
    def parse(cls, text: str) -> Angle:
        s = text.strip().replace("π", "pi").replace("**", "^")
        if not s:
            raise AngleParseError("empty angle expression")
        pos = 0
        pi_coeff = Fraction(0)
        offset = Fraction(0)
        first = True
        while pos < len(s):
            while pos < len(s) and s[pos].isspace():
                pos += 1
            if pos >= len(s):
                break
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or (not first and not m.group("sign")):
                raise AngleParseError(f"cannot parse angle expression {text!r}")
            first = False
            sign = -1 if m.group("sign") == "-" else 1
            value = Fraction(m.group("num")) if m.group("num") else Fraction(1)
            den = m.group("den")
            if den:
                den = den.replace(" ", "")
                if "^" in den:
                    base, exp = den.split("^")
                    value /= Fraction(int(base)) ** int(exp)
                else:
                    value /= int(den)
            if m.group("pi1") or m.group("pi2"):
                pi_coeff += sign * value
            else:
                offset += sign * value
            pos = m.end()
        return cls(pi_coeff, offset, text.strip())

    @classmethod
    def from_float(cls, x: float) -> Angle:
        return cls(Fraction(0), Fraction(x), repr(x))

    @classmethod
    def coerce(cls, value) -> Angle:
        if isinstance(value, Angle):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls.from_float(float(value))

    def __float__(self) -> float:
        return float(self.pi_coeff) * math.pi + float(self.offset)

    def mp(self) -> mpmath.mpf:
        """Value at the current mpmath precision."""
        p, o = self.pi_coeff, self.offset
        return mpmath.mpf(p.numerator) * mpmath.pi / p.denominator + mpmath.mpf(o.numerator) / o.denominator

    def interval(self):
        iv = mpmath.iv
        p, o = self.pi_coeff, self.offset
        return iv.mpf(p.numerator) * iv.pi / p.denominator + iv.mpf(o.numerator) / o.denominator

    def eighth_turns(self) -> int | None:
        """k if the angle is exactly k*pi/4, else None."""
        if self.offset != 0:
            return None
        q = self.pi_coeff * 4
        return int(q) if q.denominator == 1 else None

    def __str__(self) -> str:
        return self.text or f"{float(self)!r}"
