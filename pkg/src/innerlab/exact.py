"""Exact Gaussian-rational arithmetic.

The float backend of the jet machinery uses ordinary ``complex`` numbers.
For identity-level checks (derivative identities, Cramer recovery) we want
bit-for-bit exactness, so this module provides complex numbers whose real
and imaginary parts are ``fractions.Fraction`` instances.  Only field
operations are supported; anything transcendental (exp, non-integer powers)
stays on the float path by design.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # exact: every float is a dyadic rational
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


class QComplex:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("QComplex is immutable")

    # -- helpers ------------------------------------------------------------

    @staticmethod
    def coerce(x) -> "QComplex":
        if isinstance(x, QComplex):
            return x
        if isinstance(x, (int, Fraction)):
            return QComplex(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to QComplex")

    def conjugate(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """|z|^2, exactly."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    # -- field operations ----------------------------------------------------

    def __add__(self, other):
        other = QComplex.coerce(other)
        return QComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return QComplex(-self.re, -self.im)

    def __sub__(self, other):
        other = QComplex.coerce(other)
        return QComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return QComplex.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QComplex(self.re * other, self.im * other)
        other = QComplex.coerce(other)
        return QComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QComplex(self.re / other, self.im / other)
        other = QComplex.coerce(other)
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero")
        num = self * other.conjugate()
        return QComplex(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return QComplex.coerce(other) / self

    def __pow__(self, p: int):
        if not isinstance(p, int) or p < 0:
            raise TypeError("QComplex only supports nonnegative integer powers")
        out = QComplex(1)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, QComplex)):
            other = QComplex.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"QComplex({self.re!r}, {self.im!r})"


def is_exact(value) -> bool:
    """True when ``value`` belongs to the exact-rational backend."""
    return isinstance(value, (QComplex, Fraction, int))
