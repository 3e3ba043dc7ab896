"""Univariate polynomials, Laurent polynomials and rational functions
with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import lcm


def _trim(cs):
    cs = list(cs)
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


class Poly:
    """Polynomial in one variable, coefficients lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        self.c = _trim(Fraction(x) for x in coeffs)

    @classmethod
    def _raw(cls, t):
        p = object.__new__(cls)
        p.c = t
        return p

    @classmethod
    def const(cls, a):
        return cls((a,))

    @classmethod
    def monomial(cls, k, a=1):
        return cls((0,) * k + (a,))

    X = None  # set below

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for i, a in enumerate(self.c):
            if a:
                parts.append(f"{a}" + ("" if i == 0 else ("*s" if i == 1 else f"*s^{i}")))
        return " + ".join(parts)

    @property
    def deg(self):
        return len(self.c) - 1

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = _as_poly(other)
            if other is None:
                return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def lead(self):
        return self.c[-1]

    def __add__(self, other):
        other = _as_poly(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return Poly._raw(_trim(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-x for x in self.c))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            q = Fraction(other)
            if not q:
                return Poly._raw(())
            return Poly._raw(tuple(q * x for x in self.c))
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_trim(out))

    __rmul__ = __mul__

    def __pow__(self, k):
        r = Poly((1,))
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def divmod(self, d: "Poly"):
        if not d.c:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        q = [Fraction(0)] * max(len(r) - len(d.c) + 1, 0)
        dl = d.c[-1]
        dd = len(d.c) - 1
        for k in range(len(r) - 1, dd - 1, -1):
            a = r[k]
            if a:
                f = a / dl
                q[k - dd] = f
                for j, y in enumerate(d.c):
                    r[k - dd + j] -= f * y
        return Poly._raw(_trim(q)), Poly._raw(_trim(r))

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __mod__(self, d):
        return self.divmod(d)[1]

    def exact_div(self, d):
        q, r = self.divmod(d)
        if r.c:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if not self.c:
            return self
        l = self.c[-1]
        return Poly._raw(tuple(x / l for x in self.c))

    def __call__(self, x):
        acc = Fraction(0) if not isinstance(x, Poly) else Poly()
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def size(self):
        """Degree first, then coefficient bit size; used for pivoting."""
        return (len(self.c), sum(x.numerator.bit_length() + x.denominator.bit_length() for x in self.c))

    def primitive(self):
        """(content, primitive part) with integer coprime coefficients and
        positive leading coefficient."""
        if not self.c:
            return Fraction(0), self
        den = lcm(*(x.denominator for x in self.c))
        ints = [int(x * den) for x in self.c]
        from math import gcd
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly._raw(tuple(Fraction(v // g) for v in ints))


Poly.X = Poly((0, 1))


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly((x,))
    return None


def pgcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (gcd(0, 0) = 0)."""
    while b.c:
        a, b = b, a % b
        if b.c:
            b = b.primitive()[1]
    return a.monic()


class Laurent:
    """s^val * poly with poly having nonzero constant term (or zero)."""

    __slots__ = ("val", "poly")

    def __init__(self, coeffs=None, val=0, poly=None):
        if poly is None:
            poly = Poly(coeffs or ())
        c = poly.c
        k = 0
        while k < len(c) and c[k] == 0:
            k += 1
        if k == len(c):
            self.val, self.poly = 0, Poly._raw(())
        else:
            self.val, self.poly = val + k, Poly._raw(c[k:])

    @classmethod
    def mono(cls, k, a=1):
        return cls(val=k, poly=Poly((a,)))

    def __bool__(self):
        return bool(self.poly.c)

    def __eq__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent(poly=_as_poly(other))
        return self.val == other.val and self.poly.c == other.poly.c

    def __hash__(self):
        return hash((self.val, self.poly.c))

    def __repr__(self):
        if not self:
            return "0"
        return " + ".join(
            f"{a}*s^{self.val + i}" for i, a in enumerate(self.poly.c) if a
        )

    def __add__(self, other):
        if not isinstance(other, Laurent):
            other = Laurent(poly=_as_poly(other))
        if not self:
            return other
        if not other:
            return self
        v = min(self.val, other.val)
        a = Poly.monomial(self.val - v) * self.poly
        b = Poly.monomial(other.val - v) * other.poly
        return Laurent(val=v, poly=a + b)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(val=self.val, poly=-self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return Laurent(val=self.val, poly=self.poly * other)
        return Laurent(val=self.val + other.val, poly=self.poly * other.poly)

    __rmul__ = __mul__

    def inv_var(self):
        """Substitute s -> 1/s."""
        if not self:
            return self
        d = self.poly.deg
        return Laurent(val=-(self.val + d), poly=Poly(tuple(reversed(self.poly.c))))

    def coeffs(self):
        return {self.val + i: a for i, a in enumerate(self.poly.c) if a}


class RatFunc:
    """num/den over Q with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_poly(num) if not isinstance(num, Poly) else num
        den = Poly((1,)) if den is None else (_as_poly(den) if not isinstance(den, Poly) else den)
        if not den.c:
            raise ZeroDivisionError("zero denominator")
        if not num.c:
            self.num, self.den = num, Poly((1,))
            return
        g = pgcd(num, den)
        if g.deg > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        l = den.lead()
        self.num = num * (1 / l)
        self.den = den * (1 / l)

    def __repr__(self):
        return f"({self.num})/({self.den})"

    def __bool__(self):
        return bool(self.num.c)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(_as_poly(other))
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(_as_poly(other))
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RatFunc) else RatFunc(-_as_poly(other)))

    def __rsub__(self, other):
        return RatFunc(_as_poly(other)) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(_as_poly(other))
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = RatFunc(_as_poly(other))
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __call__(self, x):
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole")
        return self.num(x) / d

    def series(self, n):
        """First n power-series coefficients (den(0) must be nonzero)."""
        d = self.den.c
        if d[0] == 0:
            raise ValueError("no power series at 0")
        num = self.num.c
        out = []
        for k in range(n):
            a = num[k] if k < len(num) else Fraction(0)
            for j in range(1, min(k, len(d) - 1) + 1):
                a -= d[j] * out[k - j]
            out.append(a / d[0])
        return out
