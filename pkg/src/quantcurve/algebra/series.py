r"""Truncated Laurent and Puiseux series with explicit order tracking.

A ``TruncSeries`` holds coefficients of ``tau^k`` for ``k`` from its
valuation up to a guaranteed order (inclusive).  The local parameter ``tau``
satisfies ``tau**e = w`` for the uniformizer ``w`` of the expansion place, so
e = 2 supports half-integer exponents in the uniformizer at branch points.
Every operation returns the minimum order it can actually guarantee; nothing
is silently padded with zeros.

``LogSeries`` carries one extra logarithmic term ``lam * log(w)`` on top of a
series body; antiderivatives produce it, derivatives fold it back.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "inf"


#: the place at infinity (uniformizer 1/x)
INF = _Infinity()


class TruncSeries:
    __slots__ = ("field", "val", "coeffs", "order", "e", "var")

    def __init__(self, field, val, coeffs, order, e=1, var="t"):
        coeffs = [field.of(c) for c in coeffs]
        # strip leading zeros, clip to order
        while coeffs and field.is_zero(coeffs[0]):
            coeffs.pop(0)
            val += 1
        if val + len(coeffs) - 1 > order:
            coeffs = coeffs[: order - val + 1]
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            val = order + 1
        self.field = field
        self.val = val
        self.coeffs = coeffs
        self.order = order
        self.e = e
        self.var = var

    @staticmethod
    def zero(field, order, e=1, var="t"):
        return TruncSeries(field, order + 1, [], order, e=e, var=var)

    @staticmethod
    def const(field, c, order, e=1, var="t"):
        return TruncSeries(field, 0, [c], order, e=e, var=var)

    @staticmethod
    def uniformizer(field, order, e=1, var="t"):
        """The series tau itself."""
        return TruncSeries(field, 1, [field.one()], order, e=e, var=var)

    def is_zero(self):
        return not self.coeffs

    def copy(self, **kw):
        out = TruncSeries.__new__(TruncSeries)
        out.field = kw.get("field", self.field)
        out.val = kw.get("val", self.val)
        out.coeffs = kw.get("coeffs", list(self.coeffs))
        out.order = kw.get("order", self.order)
        out.e = kw.get("e", self.e)
        out.var = kw.get("var", self.var)
        return out

    def coefficient(self, k):
        if k > self.order:
            raise ValueError(f"coefficient {k} beyond guaranteed order {self.order}")
        if k < self.val or k >= self.val + len(self.coeffs):
            return self.field.zero()
        return self.coeffs[k - self.val]

    def items(self):
        for i, c in enumerate(self.coeffs):
            if not self.field.is_zero(c):
                yield self.val + i, c

    def truncate(self, order):
        if order >= self.order:
            return self
        return TruncSeries(self.field, self.val, self.coeffs, order, e=self.e, var=self.var)

    def map_coeffs(self, fn, field=None):
        field = field or self.field
        return TruncSeries(field, self.val, [fn(c) for c in self.coeffs], self.order, e=self.e, var=self.var)

    def scale_exponents(self, k):
        """Substitute tau -> tau^k (exponent dilation)."""
        if self.is_zero():
            return TruncSeries.zero(self.field, self.order * k, e=self.e, var=self.var)
        coeffs = []
        for i, c in enumerate(self.coeffs):
            coeffs.append(c)
            if i < len(self.coeffs) - 1:
                coeffs.extend([self.field.zero()] * (k - 1))
        return TruncSeries(self.field, self.val * k, coeffs, self.order * k, e=self.e, var=self.var)

    def shift(self, k):
        """Multiply by tau^k."""
        return TruncSeries(self.field, self.val + k, self.coeffs, self.order + k, e=self.e, var=self.var)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)) or not isinstance(other, TruncSeries):
            other = TruncSeries.const(self.field, self.field.of(other), self.order, e=self.e, var=self.var)
        f = self.field
        order = min(self.order, other.order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        val = min(self.val, other.val)
        n = order - val + 1
        out = [f.zero()] * n
        for k, c in self.items():
            if k <= order:
                out[k - val] = out[k - val] + c
        for k, c in other.items():
            if k <= order:
                out[k - val] = out[k - val] + c
        return TruncSeries(f, val, out, order, e=self.e, var=self.var)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        if not isinstance(other, TruncSeries):
            other = TruncSeries.const(self.field, self.field.of(other), self.order, e=self.e, var=self.var)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        f = self.field
        if not isinstance(other, TruncSeries):
            c = f.of(other)
            if f.is_zero(c):
                return TruncSeries.zero(f, self.order, e=self.e, var=self.var)
            return self.map_coeffs(lambda x: x * c)
        if self.is_zero() or other.is_zero():
            order = min(self.order + other.val, other.order + self.val)
            return TruncSeries.zero(f, order, e=self.e, var=self.var)
        order = min(self.order + other.val, other.order + self.val)
        val = self.val + other.val
        n = order - val + 1
        out = [f.zero()] * n
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            ka = self.val + i
            jmax = min(len(other.coeffs), order - ka - other.val + 1)
            for j in range(jmax):
                b = other.coeffs[j]
                if f.is_zero(b):
                    continue
                out[ka + other.val + j - val] = out[ka + other.val + j - val] + a * b
        return TruncSeries(f, val, out, order, e=self.e, var=self.var)

    __rmul__ = __mul__

    def inverse(self):
        f = self.field
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero series")
        v = self.val
        unit = self.shift(-v)  # valuation 0, known through order - v
        n = unit.order + 1
        a = [unit.coefficient(k) for k in range(n)]
        inv0 = f.one() / a[0]
        out = [f.zero()] * n
        out[0] = inv0
        for k in range(1, n):
            acc = f.zero()
            for j in range(1, k + 1):
                if j < len(a):
                    acc = acc + a[j] * out[k - j]
            out[k] = -inv0 * acc
        res = TruncSeries(f, 0, out, unit.order, e=self.e, var=self.var)
        return res.shift(-v)

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            return self * (self.field.one() / self.field.of(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def sqrt(self, root_of_leading=None):
        """Square root with prescribed leading coefficient root.

        Requires even valuation.  If ``root_of_leading`` is omitted the
        canonical field square root of the leading coefficient is used.
        """
        f = self.field
        if self.is_zero():
            raise ValueError("square root of zero truncated series")
        if self.val % 2 != 0:
            raise ValueError(f"odd valuation {self.val} has no series square root")
        lead = self.coeffs[0]
        if root_of_leading is None:
            root_of_leading = f.sqrt(lead)
            if root_of_leading is None:
                raise ValueError("leading coefficient is not a square in the field")
        root_of_leading = f.of(root_of_leading)
        if not f.is_zero(root_of_leading * root_of_leading - lead):
            raise ValueError("root_of_leading squared does not match the leading coefficient")
        v = self.val
        unit = self.shift(-v)
        n = unit.order + 1
        a = [unit.coefficient(k) for k in range(n)]
        out = [f.zero()] * n
        out[0] = root_of_leading
        twice = root_of_leading + root_of_leading
        for k in range(1, n):
            acc = a[k]
            for j in range(1, k):
                acc = acc - out[j] * out[k - j]
            out[k] = acc / twice
        res = TruncSeries(f, 0, out, unit.order, e=self.e, var=self.var)
        return res.shift(v // 2)

    def log1(self):
        """log of a series with leading term 1 at valuation 0."""
        f = self.field
        if self.val != 0 or not f.is_zero(self.coeffs[0] - f.one()):
            raise ValueError("log requires leading term 1 at valuation 0")
        u = self - TruncSeries.const(f, f.one(), self.order, e=self.e, var=self.var)
        out = TruncSeries.zero(f, self.order, e=self.e, var=self.var)
        if u.is_zero():
            return out
        k = 1
        sign = 1
        power = u
        while power.val <= self.order:
            out = out + power * (f.of(Fraction(sign, k)))
            power = power * u
            k += 1
            sign = -sign
        return out

    def exp(self):
        """exp of a series with valuation >= 1."""
        f = self.field
        if not self.is_zero() and self.val < 1:
            raise ValueError("exp requires valuation >= 1")
        out = TruncSeries.const(f, f.one(), self.order, e=self.e, var=self.var)
        term = TruncSeries.const(f, f.one(), self.order, e=self.e, var=self.var)
        k = 1
        while True:
            term = term * self
            if term.is_zero() or term.val > self.order:
                break
            out = out + term * f.of(Fraction(1, _factorial(k)))
            k += 1
        return out.truncate(self.order)

    def derivative(self):
        """d/dtau."""
        f = self.field
        out = []
        for i, c in enumerate(self.coeffs):
            k = self.val + i
            out.append(f.of(k) * c)
        return TruncSeries(f, self.val - 1, out, self.order - 1, e=self.e, var=self.var)

    def integrate(self):
        """Antiderivative in tau.  Returns (log_coefficient, series).

        The coefficient of tau^-1 cannot be integrated into a power and is
        returned separately as the coefficient of log(tau).
        """
        f = self.field
        logc = f.zero()
        out = []
        val = self.val + 1
        coeffs_out = {}
        for k, c in self.items():
            if k == -1:
                logc = c
            else:
                coeffs_out[k + 1] = c / f.of(k + 1)
        order = self.order + 1
        if coeffs_out:
            val = min(coeffs_out)
            out = [coeffs_out.get(k, f.zero()) for k in range(val, order + 1)]
        else:
            val, out = order + 1, []
        return logc, TruncSeries(f, val, out, order, e=self.e, var=self.var)

    def compose(self, inner):
        """self(inner) for an inner series of valuation >= 1."""
        f = self.field
        if not inner.is_zero() and inner.val < 1:
            raise ValueError("composition requires inner valuation >= 1")
        if self.val < 0:
            # split off the principal part via the inverse of inner powers
            inv = inner.inverse()
            out = TruncSeries.zero(f, inner.order, e=inner.e, var=inner.var)
            power = TruncSeries.const(f, f.one(), inner.order, e=inner.e, var=inner.var)
            powers = {0: power}
            p = power
            for k in range(1, -self.val + 1):
                p = p * inv
                powers[-k] = p
            q = TruncSeries.const(f, f.one(), inner.order, e=inner.e, var=inner.var)
            for k in range(1, self.order + 1):
                q = q * inner
                powers[k] = q
            for k, c in self.items():
                out = out + powers[k] * c
            return out
        # plain Horner from the top
        out = TruncSeries.zero(f, inner.order, e=inner.e, var=inner.var)
        for k in range(self.order, self.val - 1, -1):
            out = out * inner + self.coefficient(k)
        if self.val > 0:
            pw = TruncSeries.const(f, f.one(), inner.order, e=inner.e, var=inner.var)
            for _ in range(self.val):
                pw = pw * inner
            out = out * pw
        return out

    def reversion(self):
        """Compositional inverse.

        For valuation +1 the result g satisfies self(g(s)) = s.  For
        valuation -1 (a simple pole) the reciprocal is inverted, so the
        result g satisfies self(g(s)) = 1/s.
        """
        f = self.field
        if self.is_zero() or self.val not in (1, -1):
            raise ValueError("reversion requires valuation +1 or -1")
        if self.val == -1:
            return self.inverse().reversion()
        n = self.order
        c1 = self.coefficient(1)
        g = TruncSeries(f, 1, [f.one() / c1], n, e=self.e, var=self.var)
        for k in range(2, n + 1):
            fg = self.compose(g)
            delta = fg.coefficient(k) if k <= fg.order else f.zero()
            corr = TruncSeries(f, k, [-delta / c1], n, e=self.e, var=self.var)
            g = g + corr
        return g

    def eq_through(self, other, order=None):
        o = min(self.order, other.order)
        if order is not None:
            o = min(o, order)
        for k in range(min(self.val, other.val), o + 1):
            if not self.field.is_zero(self.coefficient(k) - other.coefficient(k)):
                return False
        return True

    def to_str(self):
        if self.is_zero():
            return f"O({self.var}^{self.order + 1})"
        parts = [f"({self.field.to_str(c)})*{self.var}^{k}" for k, c in self.items()]
        return " + ".join(parts) + f" + O({self.var}^{self.order + 1})"

    def __repr__(self):
        return f"TruncSeries({self.to_str()})"


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def expand_poly(p, place, order, var="t"):
    """Expansion of a polynomial at a finite point or at INF (in w = 1/x)."""
    f = p.field
    if place is INF:
        coeffs = {}
        for i, c in enumerate(p.coeffs):
            coeffs[-i] = c
        if not coeffs:
            return TruncSeries.zero(f, order, var=var)
        val = -p.degree
        cs = [coeffs.get(k, f.zero()) for k in range(val, order + 1)]
        return TruncSeries(f, val, cs, order, var=var)
    c = f.of(place)
    # Taylor coefficients via repeated synthetic division by (x - c)
    lin = Poly(f, [-c, f.one()])
    cs = []
    cur = p
    while not cur.is_zero():
        cur, r = cur.divrem(lin)
        cs.append(r.coeffs[0] if r.coeffs else f.zero())
    if not cs:
        return TruncSeries.zero(f, order, var=var)
    return TruncSeries(f, 0, cs, max(order, len(cs) - 1), var=var).truncate(order)


def expand_ratfunc(f, place, order, e=1, var="t"):
    """Laurent expansion of a rational function at a place.

    The result is a series in the local parameter tau with tau**e equal to
    the uniformizer (x - place, or 1/x at INF); rational functions only
    produce exponents divisible by e.
    """
    if f.is_zero():
        return TruncSeries.zero(f.field, order * e, e=e, var=var)
    # generous working order so the quotient is guaranteed through `order`
    shift = f.num.degree + f.den.degree + 2
    num = expand_poly(f.num, place, order + shift, var=var)
    den = expand_poly(f.den, place, order + shift, var=var)
    out = (num / den).truncate(order)
    if e != 1:
        out = out.scale_exponents(e)
        out = out.copy(e=e)
    return out


class LogSeries:
    """lam * log(w) + body, with w = tau**e the uniformizer."""

    __slots__ = ("lam", "body")

    def __init__(self, lam, body):
        self.lam = body.field.of(lam)
        self.body = body

    @property
    def field(self):
        return self.body.field

    def __add__(self, other):
        if isinstance(other, LogSeries):
            return LogSeries(self.lam + other.lam, self.body + other.body)
        return LogSeries(self.lam, self.body + other)

    def __sub__(self, other):
        if isinstance(other, LogSeries):
            return LogSeries(self.lam - other.lam, self.body - other.body)
        return LogSeries(self.lam, self.body - other)

    def __mul__(self, c):
        c = self.field.of(c)
        return LogSeries(self.lam * c, self.body * c)

    __rmul__ = __mul__

    def has_log(self):
        return not self.field.is_zero(self.lam)

    def __repr__(self):
        e = self.body.e
        w = f"{self.body.var}^{e}" if e != 1 else self.body.var
        return f"({self.field.to_str(self.lam)})*log({w}) + {self.body.to_str()}"
