"""Exact Gaussian-rational scalars and the float fallback.

Exact values are :class:`GaussianRational` instances ``(re + im*i) / den``
held as Python integers.  Approximate values are plain ``complex``.  Mixing
the two coerces to ``complex``; :func:`is_exact` tells the caller which one
it got.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

__all__ = [
    "GaussianRational",
    "Scalar",
    "ZERO",
    "ONE",
    "I",
    "exact",
    "is_exact",
    "to_complex",
    "is_zero",
    "format_scalar",
    "parse_scalar",
]


def _gcd3(a: int, b: int, c: int) -> int:
    return gcd(gcd(a, b), c)


class GaussianRational:
    """An element of Q(i), stored as ``(a + b i) / d`` with ``d > 0``."""

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._a = re.numerator * (d // re.denominator)
        self._b = im.numerator * (d // im.denominator)
        self._d = d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        if d < 0:
            a, b, d = -a, -b, -d
        g = _gcd3(a, b, d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._d = d
        return obj

    @property
    def real(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def imag(self) -> Fraction:
        return Fraction(self._b, self._d)

    def is_real(self) -> bool:
        return self._b == 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __complex__(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Rational)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, int):
            return GaussianRational._raw(other, 0, 1)
        if isinstance(other, Rational):
            return GaussianRational._raw(other.numerator, 0, other.denominator)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(
            self._a * o._d + o._a * self._d,
            self._b * o._d + o._b * self._d,
            self._d * o._d,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        if self._b == 0 and o._b == 0:
            return GaussianRational._raw(self._a * o._a, 0, self._d * o._d)
        return GaussianRational._raw(
            self._a * o._a - self._b * o._b,
            self._a * o._b + self._b * o._a,
            self._d * o._d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._raw(self._d * self._a, -self._d * self._b, n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return complex(self) ** n
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


Scalar = Union[GaussianRational, complex]

ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)


def exact(value) -> GaussianRational:
    """Coerce ints, Fractions, ``"p/q"`` strings and (re, im) pairs to exact."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (tuple, list)):
        re, im = value
        return GaussianRational(Fraction(re), Fraction(im))
    if isinstance(value, (float, complex)):
        raise TypeError(f"refusing to treat float {value!r} as exact")
    return GaussianRational(Fraction(value))


def is_exact(value) -> bool:
    return isinstance(value, GaussianRational)


def to_complex(value) -> complex:
    return complex(value)


def is_zero(value, tol: float = 0.0) -> bool:
    if isinstance(value, GaussianRational):
        return not value
    return abs(value) <= tol


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(value) -> str:
    """Render exact values as ``"p/q"`` / ``"a+bi"``; floats via ``repr``."""
    if isinstance(value, GaussianRational):
        re, im = value.real, value.imag
        if im == 0:
            return _frac_str(re)
        im_abs = _frac_str(abs(im))
        im_part = "i" if abs(im) == 1 else f"{im_abs}*i"
        if re == 0:
            return ("-" if im < 0 else "") + im_part
        return f"{_frac_str(re)}{'-' if im < 0 else '+'}{im_part}"
    z = complex(value)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'-' if z.imag < 0 else '+'}{abs(z.imag)!r}*i"


def parse_scalar(token):
    """Parse a wire value: number, ``"p/q"`` string, or ``[re, im]`` pair.

    Strings and ints give exact scalars; JSON floats give ``complex``.
    """
    if isinstance(token, (list, tuple)):
        if len(token) != 2:
            raise ValueError(f"complex pair must have two entries, got {token!r}")
        re, im = (parse_scalar(t) for t in token)
        if is_exact(re) and is_exact(im):
            return re + im * I
        return complex(re) + 1j * complex(im)
    if isinstance(token, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(token, int):
        return GaussianRational._raw(token, 0, 1)
    if isinstance(token, float):
        return complex(token)
    if isinstance(token, str):
        try:
            return exact(Fraction(token.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {token!r}") from exc
    raise ValueError(f"cannot parse scalar from {token!r}")
