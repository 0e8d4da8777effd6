"""Exact arithmetic in the field Q(i, sqrt 2).

Elements are stored as four rational components ``a + b*i + c*s2 + d*i*s2``
where ``s2`` is the positive square root of 2.  Rationals are ``gmpy2.mpq``
values, which are always kept in lowest terms with a positive denominator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from gmpy2 import mpq

Rational = type(mpq(0))

_ZERO = mpq(0)
_ONE = mpq(1)

ScalarLike = Union["CyclotomicScalar", int, Fraction, "Rational", str]


def to_rational(x) -> Rational:
    """Convert ints, Fractions, mpq values or ``"p/q"`` strings to mpq."""
    if isinstance(x, Rational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _fmt_q(q: Rational) -> str:
    return str(q)


class CyclotomicScalar:
    """An immutable element ``a + b i + c sqrt2 + d i sqrt2`` of Q(i, sqrt 2)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", to_rational(a))
        object.__setattr__(self, "b", to_rational(b))
        object.__setattr__(self, "c", to_rational(c))
        object.__setattr__(self, "d", to_rational(d))

    @classmethod
    def _raw(cls, a, b, c, d) -> "CyclotomicScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", a)
        object.__setattr__(obj, "b", b)
        object.__setattr__(obj, "c", c)
        object.__setattr__(obj, "d", d)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicScalar is immutable")

    # -- coercion ---------------------------------------------------------
    @classmethod
    def coerce(cls, x: ScalarLike) -> "CyclotomicScalar":
        if isinstance(x, CyclotomicScalar):
            return x
        if isinstance(x, str):
            return parse_scalar(x)
        return cls._raw(to_rational(x), _ZERO, _ZERO, _ZERO)

    def components(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    # -- predicates -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.a or self.b or self.c or self.d)

    def is_zero(self) -> bool:
        return not self

    def is_one(self) -> bool:
        return self.a == 1 and not (self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                other = CyclotomicScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return CyclotomicScalar._raw(self.a + other.a, self.b + other.b,
                                     self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicScalar._raw(-self.a, -self.b, -self.c, -self.d)

    def __sub__(self, other):
        if not isinstance(other, CyclotomicScalar):
            try:
                other = CyclotomicScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return CyclotomicScalar._raw(self.a - other.a, self.b - other.b,
                                     self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CyclotomicScalar):
            if isinstance(other, (int, Rational, Fraction)) and not isinstance(other, bool):
                q = to_rational(other)
                return CyclotomicScalar._raw(self.a * q, self.b * q, self.c * q, self.d * q)
            try:
                other = CyclotomicScalar.coerce(other)
            except TypeError:
                return NotImplemented
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        # Fast path for the very common purely rational operand.
        if not (f or g or h):
            return CyclotomicScalar._raw(a * e, b * e, c * e, d * e)
        if not (b or c or d):
            return CyclotomicScalar._raw(a * e, a * f, a * g, a * h)
        return CyclotomicScalar._raw(
            a * e - b * f + 2 * (c * g - d * h),
            a * f + b * e + 2 * (c * h + d * g),
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicScalar":
        """Complex conjugation: negates the i and i*sqrt2 components."""
        return CyclotomicScalar._raw(self.a, -self.b, self.c, -self.d)

    def inv(self) -> "CyclotomicScalar":
        """Multiplicative inverse.

        Writing x = u + v*sqrt2 with u, v Gaussian rationals, the product
        x * (u - v*sqrt2) = u^2 - 2 v^2 = g is a Gaussian rational and
        g * conj(g) is a positive rational.
        """
        if not self:
            raise ZeroDivisionError("inversion of zero in Q(i, sqrt2)")
        a, b, c, d = self.a, self.b, self.c, self.d
        if not (b or c or d):
            return CyclotomicScalar._raw(1 / a, _ZERO, _ZERO, _ZERO)
        # g = u^2 - 2 v^2 with u = a + b i, v = c + d i
        gr = a * a - b * b - 2 * (c * c - d * d)
        gi = 2 * a * b - 4 * c * d
        nrm = gr * gr + gi * gi
        # (u - v sqrt2) * conj(g) / nrm
        ur, ui, vr, vi = a, b, -c, -d
        cr, ci = gr / nrm, -gi / nrm
        return CyclotomicScalar._raw(
            ur * cr - ui * ci,
            ur * ci + ui * cr,
            vr * cr - vi * ci,
            vr * ci + vi * cr,
        )

    def __truediv__(self, other):
        if not isinstance(other, CyclotomicScalar):
            if isinstance(other, (int, Rational, Fraction)) and not isinstance(other, bool):
                if other == 0:
                    raise ZeroDivisionError("division by zero")
                q = 1 / to_rational(other)
                return CyclotomicScalar._raw(self.a * q, self.b * q, self.c * q, self.d * q)
            other = CyclotomicScalar.coerce(other)
        return self * other.inv()

    def __rtruediv__(self, other):
        return CyclotomicScalar.coerce(other) * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison and hashing -------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, CyclotomicScalar):
            if isinstance(other, (int, Rational, Fraction)) and not isinstance(other, bool):
                return self.a == other and not (self.b or self.c or self.d)
            return NotImplemented
        return (self.a == other.a and self.b == other.b
                and self.c == other.c and self.d == other.d)

    def __hash__(self):
        if not (self.b or self.c or self.d):
            return hash(self.a)
        return hash((self.a, self.b, self.c, self.d))

    # -- rendering --------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for q, unit in ((self.a, ""), (self.b, "i"), (self.c, "s2"), (self.d, "i*s2")):
            if not q:
                continue
            neg = q < 0
            mag = -q if neg else q
            if unit == "":
                body = _fmt_q(mag)
            elif mag == 1:
                body = unit
            else:
                body = f"{_fmt_q(mag)}*{unit}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CyclotomicScalar({str(self)!r})"

    def n_terms(self) -> int:
        return sum(1 for q in (self.a, self.b, self.c, self.d) if q)


ZERO = CyclotomicScalar._raw(_ZERO, _ZERO, _ZERO, _ZERO)
ONE = CyclotomicScalar._raw(_ONE, _ZERO, _ZERO, _ZERO)
I = CyclotomicScalar._raw(_ZERO, _ONE, _ZERO, _ZERO)
SQRT2 = CyclotomicScalar._raw(_ZERO, _ZERO, _ONE, _ZERO)
I_SQRT2 = CyclotomicScalar._raw(_ZERO, _ZERO, _ZERO, _ONE)
HALF = CyclotomicScalar._raw(mpq(1, 2), _ZERO, _ZERO, _ZERO)

_UNITS = {"": 0, "i": 1, "s2": 2, "i*s2": 3, "s2*i": 3}
_TERM_RE = re.compile(
    r"^(?:(?P<coef>\d+(?:/\d+)?)(?:\*(?P<u1>i\*s2|s2\*i|i|s2))?|(?P<u2>i\*s2|s2\*i|i|s2))$"
)


def parse_scalar(text: str) -> CyclotomicScalar:
    """Parse ``"a + b*i + c*s2 + d*i*s2"``; terms may appear in any order."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty scalar")
    comps = [_ZERO, _ZERO, _ZERO, _ZERO]
    pos = 0
    if src[0] not in "+-":
        src = "+" + src
    for m in re.finditer(r"([+-])([^+-]+)", src):
        if m.start() != pos:
            raise ValueError(f"malformed scalar {text!r}")
        pos = m.end()
        sign, term = m.group(1), m.group(2)
        tm = _TERM_RE.match(term)
        if not tm:
            raise ValueError(f"malformed scalar term {term!r} in {text!r}")
        coef = mpq(tm.group("coef")) if tm.group("coef") else _ONE
        unit = tm.group("u1") or tm.group("u2") or ""
        k = _UNITS[unit]
        comps[k] += -coef if sign == "-" else coef
    if pos != len(src):
        raise ValueError(f"malformed scalar {text!r}")
    return CyclotomicScalar._raw(*comps)


def scalar(x: ScalarLike) -> CyclotomicScalar:
    """Coerce an int, Fraction, mpq, string or scalar to a CyclotomicScalar."""
    return CyclotomicScalar.coerce(x)


def scalar_add(x: CyclotomicScalar, y: CyclotomicScalar) -> CyclotomicScalar:
    return scalar(x) + scalar(y)


def scalar_mul(x: CyclotomicScalar, y: CyclotomicScalar) -> CyclotomicScalar:
    return scalar(x) * scalar(y)


def scalar_neg(x: CyclotomicScalar) -> CyclotomicScalar:
    return -scalar(x)


def scalar_inv(x: CyclotomicScalar) -> CyclotomicScalar:
    return scalar(x).inv()


def scalar_conj(x: CyclotomicScalar) -> CyclotomicScalar:
    return scalar(x).conj()
