"""Exact numbers in the field Q(i, sqrt 2).

A :class:`Num` stores ``p + q*sqrt(2)`` where ``p`` and ``q`` are Gaussian
rationals. Everything downstream (multivector coefficients, polynomial
coefficients, block entries) is built on this type so that identities can
be checked by plain equality.

Example:
    >>> half = Num(1, 0) / 2
    >>> (SQRT2 * SQRT2) == Num(2)
    True
    >>> (I * I) == -ONE
    True
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

_ZERO = mpq(0)

Scalar = Union["Num", int, Fraction]


def _q(x) -> mpq:
    if isinstance(x, mpq):
        return x
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or string")
    return mpq(x)


class Num:
    """Element ``(re + i*im) + (re2 + i*im2)*sqrt(2)`` with rational parts."""

    __slots__ = ("re", "im", "re2", "im2")

    def __init__(self, re=0, im=0, re2=0, im2=0):
        self.re = _q(re)
        self.im = _q(im)
        self.re2 = _q(re2)
        self.im2 = _q(im2)

    @staticmethod
    def _raw(re, im, re2, im2) -> Num:
        n = Num.__new__(Num)
        n.re = re
        n.im = im
        n.re2 = re2
        n.im2 = im2
        return n

    @staticmethod
    def coerce(x) -> Num:
        if isinstance(x, Num):
            return x
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise TypeError(f"inexact complex {x!r}")
            return Num(int(x.real), int(x.imag))
        return Num(x)

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im) or bool(self.re2) or bool(self.im2)

    @property
    def is_gaussian(self) -> bool:
        """True when the sqrt(2) part vanishes."""
        return not self.re2 and not self.im2

    @property
    def is_rational(self) -> bool:
        return not self.im and not self.re2 and not self.im2

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> Num:
        if not isinstance(other, Num):
            if isinstance(other, int):
                return Num._raw(self.re + other, self.im, self.re2, self.im2)
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return Num._raw(
            self.re + other.re,
            self.im + other.im,
            self.re2 + other.re2,
            self.im2 + other.im2,
        )

    __radd__ = __add__

    def __neg__(self) -> Num:
        return Num._raw(-self.re, -self.im, -self.re2, -self.im2)

    def __sub__(self, other) -> Num:
        if not isinstance(other, Num):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return Num._raw(
            self.re - other.re,
            self.im - other.im,
            self.re2 - other.re2,
            self.im2 - other.im2,
        )

    def __rsub__(self, other) -> Num:
        other = _maybe(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other) -> Num:
        if not isinstance(other, Num):
            if isinstance(other, int):
                return Num._raw(self.re * other, self.im * other, self.re2 * other, self.im2 * other)
            if isinstance(other, (Fraction, mpq)):
                o = _q(other)
                return Num._raw(self.re * o, self.im * o, self.re2 * o, self.im2 * o)
            other = _maybe(other)
            if other is None:
                return NotImplemented
        a, b, c, d = self.re, self.im, self.re2, self.im2
        e, f, g, h = other.re, other.im, other.re2, other.im2
        if not c and not d and not g and not h:
            return Num._raw(a * e - b * f, a * f + b * e, _ZERO, _ZERO)
        # (p + q r)(s + t r) = p s + 2 q t + (p t + q s) r
        re = a * e - b * f + 2 * (c * g - d * h)
        im = a * f + b * e + 2 * (c * h + d * g)
        re2 = a * g - b * h + c * e - d * f
        im2 = a * h + b * g + c * f + d * e
        return Num._raw(re, im, re2, im2)

    __rmul__ = __mul__

    def conjugate(self) -> Num:
        """Complex conjugate (sqrt 2 is real)."""
        return Num._raw(self.re, -self.im, self.re2, -self.im2)

    def _surd_conjugate(self) -> Num:
        return Num._raw(self.re, self.im, -self.re2, -self.im2)

    def inverse(self) -> Num:
        if not self:
            raise ZeroDivisionError("Num division by zero")
        if self.is_gaussian:
            n = self.re * self.re + self.im * self.im
            return Num._raw(self.re / n, -self.im / n, _ZERO, _ZERO)
        # multiply by the surd conjugate to land in Q(i)
        s = self._surd_conjugate()
        return s * (self * s).inverse()

    def __truediv__(self, other) -> Num:
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("Num division by zero")
            o = mpq(1, other)
            return Num._raw(self.re * o, self.im * o, self.re2 * o, self.im2 * o)
        return self * Num.coerce(other).inverse()

    def __rtruediv__(self, other) -> Num:
        return Num.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> Num:
        if k < 0:
            return self.inverse() ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / conversion -------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Num):
            other = _maybe(other)
            if other is None:
                return NotImplemented
        return (
            self.re == other.re
            and self.im == other.im
            and self.re2 == other.re2
            and self.im2 == other.im2
        )

    def __hash__(self) -> int:
        return hash((self.re, self.im, self.re2, self.im2))

    def __complex__(self) -> complex:
        r = math.sqrt(2.0)
        return complex(float(self.re) + r * float(self.re2), float(self.im) + r * float(self.im2))

    def _sympy_(self):
        # lets sympy expressions absorb Num coefficients
        import sympy as sp

        def r(x):
            return sp.Rational(int(x.numerator), int(x.denominator))

        return r(self.re) + sp.I * r(self.im) + sp.sqrt(2) * (r(self.re2) + sp.I * r(self.im2))

    def gaussian_parts(self) -> tuple[Fraction, Fraction]:
        """Return (re, im) as Fractions; fails if a sqrt(2) part is present."""
        if not self.is_gaussian:
            raise ValueError(f"{self} is not a Gaussian rational")
        return (
            Fraction(int(self.re.numerator), int(self.re.denominator)),
            Fraction(int(self.im.numerator), int(self.im.denominator)),
        )

    def __repr__(self) -> str:
        return f"Num({self})"

    def __str__(self) -> str:
        parts = []
        for val, tag in ((self.re, ""), (self.im, "i"), (self.re2, "r2"), (self.im2, "i*r2")):
            if not val:
                continue
            txt = str(val)
            if tag:
                txt = tag if val == 1 else ("-" + tag if val == -1 else f"{txt}*{tag}")
            parts.append(txt)
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out


def _maybe(x) -> Num | None:
    if isinstance(x, (int, Fraction, mpq, complex, Num)):
        try:
            return Num.coerce(x)
        except TypeError:
            return None
    return None


ZERO = Num(0)
ONE = Num(1)
I = Num(0, 1)
SQRT2 = Num(0, 0, 1)
HALF = Num(mpq(1, 2))


def num(x) -> Num:
    """Coerce ints, Fractions, strings like ``"3/4"`` or Nums."""
    return Num.coerce(x)


def rational(p: int, q: int = 1) -> Num:
    return Num(mpq(p, q))
