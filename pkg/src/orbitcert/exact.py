"""Gaussian-rational scalar arithmetic.

The scalar field for every certificate is Q(i): complex numbers whose real
and imaginary parts are arbitrary-precision rationals.  Magnitudes are only
ever handled squared (abs2) so everything stays inside exact rational
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction


def rational_to_str(q: Fraction) -> str:
    """Render num/den, omitting the denominator when it is 1."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def rational_from_str(s: str) -> Fraction:
    return Fraction(s)


def rational_height(q: Fraction) -> int:
    """max(|numerator|, denominator) of the reduced fraction."""
    return max(abs(q.numerator), q.denominator)


@dataclass(frozen=True)
class ComplexRational:
    re: Fraction
    im: Fraction

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    # -- field arithmetic ---------------------------------------------------

    def __add__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other) -> "ComplexRational":
        other = _coerce(other)
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other) -> "ComplexRational":
        other = _coerce(other)
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return ComplexRational(
            (self.re * other.re + self.im * other.im) / d,
            (self.im * other.re - self.re * other.im) / d,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "ComplexRational":
        return _coerce(other) - self

    def __rtruediv__(self, other) -> "ComplexRational":
        return _coerce(other) / self

    def __pow__(self, n: int) -> "ComplexRational":
        """Exact integer power; 0**0 = 1, negative powers require a non-zero base."""
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n == 0:
            return ONE
        base = self
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("0 to a negative power")
            base = ONE / self
            n = -n
        out = ONE
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared magnitude re**2 + im**2, exact."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"re": rational_to_str(self.re), "im": rational_to_str(self.im)}

    @staticmethod
    def from_json(obj: dict) -> "ComplexRational":
        return ComplexRational(rational_from_str(obj["re"]), rational_from_str(obj["im"]))

    def __repr__(self) -> str:
        return f"CR({rational_to_str(self.re)}, {rational_to_str(self.im)})"


def _coerce(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ComplexRational")


def CR(re=0, im=0) -> ComplexRational:
    """Shorthand constructor."""
    return ComplexRational(re, im)


ZERO = ComplexRational(0, 0)
ONE = ComplexRational(1, 0)
I = ComplexRational(0, 1)


def gaussian_height(z: ComplexRational) -> int:
    """Height of a Gaussian rational: max of the heights of its two parts."""
    return max(rational_height(z.re), rational_height(z.im))
