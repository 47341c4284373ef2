"""Certified rational interval arithmetic with dyadic outward rounding.

Deep Euler-product truncations need values like L^c with c ~ q^n / n; exact
fractions would carry tens of millions of digits, so products are tracked
as intervals whose endpoints are dyadic rationals num / 2^bits, rounded
outward after every operation.  Everything is integer arithmetic: no binary
floats appear anywhere, and every reported comparison is certified by the
enclosure.  The precision must comfortably exceed the bit length of the
largest integer exponent used, or the rounding slack itself would blow up
under exponentiation; callers size it accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_BITS = 192


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class Interval:
    """A closed interval [nlo, nhi] / 2^bits with integer endpoints."""

    nlo: int
    nhi: int
    bits: int = DEFAULT_BITS

    def __post_init__(self):
        assert self.nlo <= self.nhi

    @staticmethod
    def exact(x, bits: int = DEFAULT_BITS) -> "Interval":
        x = Fraction(x)
        scaled_num = x.numerator << bits
        return Interval(_floor_div(scaled_num, x.denominator),
                        _ceil_div(scaled_num, x.denominator), bits)

    point = exact

    @staticmethod
    def from_bounds(lo, hi, bits: int = DEFAULT_BITS) -> "Interval":
        lo, hi = Fraction(lo), Fraction(hi)
        return Interval(_floor_div(lo.numerator << bits, lo.denominator),
                        _ceil_div(hi.numerator << bits, hi.denominator), bits)

    @property
    def lo(self) -> Fraction:
        return Fraction(self.nlo, 1 << self.bits)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.nhi, 1 << self.bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.nhi - self.nlo, 1 << self.bits)

    @property
    def mid(self) -> Fraction:
        return Fraction(self.nlo + self.nhi, 1 << (self.bits + 1))

    def __add__(self, other) -> "Interval":
        other = _coerce(other, self.bits)
        return Interval(self.nlo + other.nlo, self.nhi + other.nhi, self.bits)

    def __sub__(self, other) -> "Interval":
        other = _coerce(other, self.bits)
        return Interval(self.nlo - other.nhi, self.nhi - other.nlo, self.bits)

    def __mul__(self, other) -> "Interval":
        other = _coerce(other, self.bits)
        cands = (self.nlo * other.nlo, self.nlo * other.nhi,
                 self.nhi * other.nlo, self.nhi * other.nhi)
        return Interval(min(cands) >> self.bits,             # floor shift
                        _ceil_div(max(cands), 1 << self.bits),
                        self.bits)

    def __truediv__(self, other) -> "Interval":
        other = _coerce(other, self.bits)
        if other.nlo <= 0 <= other.nhi:
            raise ZeroDivisionError("interval straddles zero")
        shifted_lo, shifted_hi = self.nlo << self.bits, self.nhi << self.bits
        cands_lo = (_floor_div(shifted_lo, other.nlo), _floor_div(shifted_lo, other.nhi),
                    _floor_div(shifted_hi, other.nlo), _floor_div(shifted_hi, other.nhi))
        cands_hi = (_ceil_div(shifted_lo, other.nlo), _ceil_div(shifted_lo, other.nhi),
                    _ceil_div(shifted_hi, other.nlo), _ceil_div(shifted_hi, other.nhi))
        return Interval(min(cands_lo), max(cands_hi), self.bits)

    def power(self, e: int) -> "Interval":
        """Integer power by squaring; exponent may be astronomically large."""
        assert e >= 0
        result = Interval(1 << self.bits, 1 << self.bits, self.bits)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def abs(self) -> "Interval":
        if self.nlo >= 0:
            return self
        if self.nhi <= 0:
            return Interval(-self.nhi, -self.nlo, self.bits)
        return Interval(0, max(-self.nlo, self.nhi), self.bits)

    def certainly_less(self, other) -> bool:
        other = _coerce(other, self.bits)
        return self.nhi < other.nlo

    def certainly_positive(self) -> bool:
        return self.nlo > 0

    def __repr__(self):
        return f"Interval({float(self.lo):.12g}, {float(self.hi):.12g})"


def _coerce(x, bits: int) -> Interval:
    if isinstance(x, Interval):
        if x.bits == bits:
            return x
        if x.bits < bits:
            shift = bits - x.bits
            return Interval(x.nlo << shift, x.nhi << shift, bits)
        shift = x.bits - bits
        return Interval(x.nlo >> shift, _ceil_div(x.nhi, 1 << shift), bits)
    return Interval.exact(x, bits)


def product(intervals, bits: int = DEFAULT_BITS) -> Interval:
    acc = Interval.exact(1, bits)
    for iv in intervals:
        acc = acc * iv
    return acc
