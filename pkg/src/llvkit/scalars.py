"""Exact scalar arithmetic: rationals and Gaussian rationals.

Every computation in this package runs over Q or Q(i) -- no floats.
Rationals are plain ``fractions.Fraction``; Gaussian rationals are a
small immutable pair type with componentwise Fraction arithmetic.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

FIELD_RATIONAL = "rational"
FIELD_GAUSSIAN = "gaussian"

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class Gauss:
    """A Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gauss values are immutable")

    # -- arithmetic -------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, Gauss):
            return x
        if isinstance(x, (int, Fraction)):
            return Gauss(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return Gauss(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Gauss(self.re * o.re - self.im * o.im,
                     self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return Gauss((self.re * o.re + self.im * o.im) / n,
                     (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Gauss(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- structure --------------------------------------------------

    def conjugate(self) -> "Gauss":
        return Gauss(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def is_rational(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Gauss):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gauss({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


I = Gauss(0, 1)


def conj(x):
    """Complex conjugation; identity on rationals, i -> -i on Gauss."""
    if isinstance(x, Gauss):
        return x.conjugate()
    return x


def as_fraction(x) -> Fraction:
    """Demand a real value and return it as a Fraction."""
    if isinstance(x, Gauss):
        if x.im != 0:
            raise ValueError(f"expected a real scalar, got {x}")
        return x.re
    return Fraction(x)


def to_field(x, field: str):
    """Coerce a scalar into the given field."""
    if field == FIELD_GAUSSIAN:
        return x if isinstance(x, Gauss) else Gauss(x)
    if isinstance(x, Gauss):
        return as_fraction(x)
    return Fraction(x)


def rat_sqrt(x: Fraction):
    """Exact rational square root, or None when x is not a perfect square."""
    x = Fraction(x)
    if x < 0:
        return None
    if x == 0:
        return Fraction(0)
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


# -- coefficient strings -------------------------------------------
#
# Ring files carry coefficients as exact strings: "num/den" for
# rationals and "a/b+c/d i" style for Gaussian values.  No floats.

_RAT_RE = r"[+-]?\d+(?:/\d+)?"
_PURE_RAT = re.compile(rf"^({_RAT_RE})$")
_PURE_IMAG = re.compile(rf"^({_RAT_RE})\s*\*?\s*i$|^([+-]?)i$")
_FULL = re.compile(rf"^({_RAT_RE})\s*([+-])\s*(\d+(?:/\d+)?)?\s*\*?\s*i$")


def parse_scalar(text: str, field: str = FIELD_RATIONAL):
    """Parse an exact coefficient string; rejects anything float-like."""
    s = text.strip()
    if not s:
        raise ValueError("empty coefficient string")
    m = _PURE_RAT.match(s)
    if m:
        val = Fraction(m.group(1))
        return to_field(val, field)
    m = _PURE_IMAG.match(s)
    if m:
        if field != FIELD_GAUSSIAN:
            raise ValueError(f"imaginary coefficient {text!r} in a rational ring")
        if m.group(1) is not None:
            return Gauss(0, Fraction(m.group(1)))
        return Gauss(0, -1 if m.group(2) == "-" else 1)
    m = _FULL.match(s)
    if m:
        if field != FIELD_GAUSSIAN:
            raise ValueError(f"imaginary coefficient {text!r} in a rational ring")
        re_part = Fraction(m.group(1))
        im_part = Fraction(m.group(3)) if m.group(3) else Fraction(1)
        if m.group(2) == "-":
            im_part = -im_part
        return Gauss(re_part, im_part)
    raise ValueError(f"malformed exact coefficient: {text!r}")


def format_scalar(x) -> str:
    """Canonical exact string form, inverse to parse_scalar."""
    if isinstance(x, Gauss):
        if x.im == 0:
            return str(x.re)
        im = x.im
        sign = "+" if im > 0 else "-"
        mag = -im if im < 0 else im
        im_txt = "i" if mag == 1 else f"{mag}i"
        if x.re == 0 and sign == "+":
            return im_txt
        if x.re == 0:
            return f"-{im_txt}"
        return f"{x.re}{sign}{im_txt}"
    return str(Fraction(x))
