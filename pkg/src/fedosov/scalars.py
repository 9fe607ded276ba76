"""Exact scalar arithmetic: Gaussian rationals a + b*i built on Fraction."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts.

    Both parts are stored as Fraction, i.e. in lowest terms with positive
    denominator.  The type is a field: every nonzero element is invertible.
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(value) -> "GaussianRational":
        """Coerce int, Fraction or GaussianRational."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(Fraction(value))
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero GaussianRational")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * GaussianRational.of(other).inverse()

    def __rtruediv__(self, other):
        return GaussianRational.of(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GaussianRational(Fraction(other))
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))
I = GaussianRational(Fraction(0), Fraction(1))


def i_power(t: int) -> GaussianRational:
    """i**t without repeated multiplication."""
    return (ONE, I, -ONE, -I)[t % 4]


def format_scalar(v: GaussianRational) -> str:
    """Canonical literal: '0', '3/4', 'i', '-1/2*i', '1+1/2*i', '2-i'."""

    def imag(f: Fraction, lead: bool) -> str:
        sign = "-" if f < 0 else ("" if lead else "+")
        mag = -f if f < 0 else f
        return sign + ("i" if mag == 1 else f"{mag}*i")

    if not v:
        return "0"
    if not v.im:
        return str(v.re)
    if not v.re:
        return imag(v.im, lead=True)
    return str(v.re) + imag(v.im, lead=False)


def factorial_ratio(numerators, denominators) -> Fraction:
    """Exact product(n_i!) / product(d_j!); arguments must be >= 0."""
    num = 1
    for n in numerators:
        if n < 0:
            raise ValueError(f"factorial of negative argument {n}")
        num *= factorial(n)
    den = 1
    for d in denominators:
        if d < 0:
            raise ValueError(f"factorial of negative argument {d}")
        den *= factorial(d)
    return Fraction(num, den)
