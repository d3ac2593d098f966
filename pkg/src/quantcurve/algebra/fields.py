r"""Exact coefficient fields, organized as a small run-time tower.

Four towers are supported, which is exactly what rank-2 spectral curve
computations on the line require:

* ``QQ``                          rationals (elements are ``fractions.Fraction``)
* ``QuadExtField(QQ, d)``         a quadratic extension ``QQ(sqrt(d))``
* ``FractionField(QQ, "h")``      rational functions in one generator
* ``QuadExtField(FractionField(QQ, "h"), p)``   square roots of a rational function

Elements of ``QuadExtField`` and ``FractionField`` overload the usual
arithmetic operators, so polynomial and series code is generic over the
tower.  Everything is exact; there is no floating point anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction


def _fraction_sqrt(q):
    """Exact square root of a Fraction, or None if not a perfect square."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


class RationalField:
    """The field of rational numbers; elements are ``Fraction`` objects."""

    name = "QQ"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def of(self, v):
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            return Fraction(v)
        raise TypeError(f"cannot coerce {v!r} into QQ")

    def is_zero(self, v):
        return v == 0

    def is_square(self, v):
        return _fraction_sqrt(v) is not None

    def sqrt(self, v):
        return _fraction_sqrt(v)

    def to_str(self, v):
        return str(v)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class QuadExtElement:
    """a + b*s with s**2 = d in the base field."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field, a, b):
        self.field = field
        self.a = a
        self.b = b

    def _coerce(self, other):
        if isinstance(other, QuadExtElement) and other.field is self.field:
            return other
        if isinstance(other, (int, Fraction)) or type(other) is type(self.a):
            return QuadExtElement(self.field, self.field.base_of(other), self.field.base.zero())
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExtElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self.field.d
        return QuadExtElement(
            self.field, self.a * o.a + d * self.b * o.b, self.a * o.b + self.b * o.a
        )

    __rmul__ = __mul__

    def inverse(self):
        d = self.field.d
        nrm = self.a * self.a - d * self.b * self.b
        if nrm == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        return QuadExtElement(self.field, self.a / nrm, -self.b / nrm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((id(self.field), self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt({self.field.d}))"


class QuadExtField:
    """Quadratic extension base(sqrt(d)); d must not be a square in the base."""

    def __init__(self, base, d):
        d = base.of(d)
        if base.is_zero(d):
            raise ValueError("cannot adjoin sqrt(0)")
        if base.is_square(d):
            raise ValueError(f"{d} is already a square in {base}")
        self.base = base
        self.d = d
        self.name = f"{base.name}(sqrt({base.to_str(d)}))"
        self.gen = QuadExtElement(self, base.zero(), base.one())

    def base_of(self, v):
        return self.base.of(v)

    def zero(self):
        return QuadExtElement(self, self.base.zero(), self.base.zero())

    def one(self):
        return QuadExtElement(self, self.base.one(), self.base.zero())

    def of(self, v):
        if isinstance(v, QuadExtElement) and v.field is self:
            return v
        return QuadExtElement(self, self.base.of(v), self.base.zero())

    def make(self, a, b):
        return QuadExtElement(self, self.base.of(a), self.base.of(b))

    def is_zero(self, v):
        return not self.of(v)

    def is_square(self, v):
        return self.sqrt(v) is not None

    def sqrt(self, v):
        # Only pure base elements are handled: a = r**2 or a = d*r**2.
        # That covers every square root a rank-2 tower construction asks for.
        v = self.of(v)
        if not self.base.is_zero(v.b):
            return None
        r = self.base.sqrt(v.a)
        if r is not None:
            return self.of(r)
        r = self.base.sqrt(v.a / self.d)
        if r is not None:
            return QuadExtElement(self, self.base.zero(), r)
        return None

    def to_str(self, v):
        v = self.of(v)
        return f"[{self.base.to_str(v.a)},{self.base.to_str(v.b)}]"

    def __repr__(self):
        return self.name
