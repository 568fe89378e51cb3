"""Closed intervals with exact rational endpoints.

Arithmetic is exact (no rounding), so every operation is inclusion monotone:
shrinking the inputs can only shrink the output.  That property is what makes
successive embeddings nest.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = _q(lo)
        hi = lo if hi is None else _q(hi)
        if hi < lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def coerce(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def sign(self) -> int | None:
        """+1/-1 when the interval excludes zero, 0 for [0,0], else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            c = _q(other)
            return Interval(self.lo * c, self.hi * c) if c >= 0 else Interval(self.hi * c, self.lo * c)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def inverse(self) -> "Interval":
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        if not isinstance(other, Interval):
            return self * (1 / _q(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Interval.coerce(other) * self.inverse()

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return Interval(self.hi * self.hi, self.lo * self.lo)
        return Interval(0, max(self.lo * self.lo, self.hi * self.hi))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi))

    def sqrt(self, bits: int) -> "Interval":
        """Enclosure of the square root, endpoints on the 2^-bits grid."""
        if self.lo < 0:
            raise ValueError("square root of an interval reaching below zero")
        return Interval(sqrt_floor(self.lo, bits), sqrt_ceil(self.hi, bits))

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"

    def to_json(self) -> list[str]:
        return [str(self.lo), str(self.hi)]


def sqrt_floor(q: Fraction, bits: int) -> Fraction:
    """Largest multiple of 2^-bits whose square is <= q (q >= 0)."""
    q = _q(q)
    scale = 1 << bits
    # floor(sqrt(q) * scale) = isqrt(floor(q * scale^2))
    return Fraction(isqrt((q.numerator * scale * scale) // q.denominator), scale)


def sqrt_ceil(q: Fraction, bits: int) -> Fraction:
    q = _q(q)
    lo = sqrt_floor(q, bits)
    if lo * lo == q:
        return lo
    return lo + Fraction(1, 1 << bits)


def round_out(iv: Interval, bits: int) -> Interval:
    """Outward rounding of the endpoints to the 2^-bits grid."""
    scale = 1 << bits
    lo = Fraction((iv.lo * scale).__floor__(), scale)
    hi = Fraction((iv.hi * scale).__ceil__(), scale)
    return Interval(lo, hi)


def to_iv(x, ctx):
    """Convert an Interval (or rational) to an mpmath interval in context ``ctx``."""
    if isinstance(x, Interval):
        lo = ctx.mpf(x.lo.numerator) / x.lo.denominator
        hi = ctx.mpf(x.hi.numerator) / x.hi.denominator
        return ctx.mpf([lo.a, hi.b])
    x = _q(x)
    return ctx.mpf(x.numerator) / x.denominator
