"""Elements sum_j f_j t^j of C(X) x_T Z and matrices over them.

Conventions: t f t^{-1} = f o T^{-1}, so
(f t^a)(g t^b) = f (g o T^{-a}) t^{a+b} and (f t^j)^* = (f o T^j) t^{-j}.
"""

from __future__ import annotations

from fractions import Fraction

from .dynamics import LCFunction, Space, cylinder_from_json


class CrossedElement:
    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms=None):
        self.space = space
        out = {}
        for j, f in (terms or {}).items():
            if f.terms:
                out[int(j)] = f
        self.terms = out

    @classmethod
    def zero(cls, space):
        return cls(space)

    @classmethod
    def one(cls, space):
        return cls(space, {0: LCFunction.const(space)})

    @classmethod
    def t(cls, space, j=1):
        return cls(space, {j: LCFunction.const(space)})

    @classmethod
    def mono(cls, f: LCFunction, j=0):
        return cls(f.space, {j: f})

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({f}) t^{j}" for j, f in sorted(self.terms.items()))

    def __add__(self, other):
        t = dict(self.terms)
        for j, f in other.terms.items():
            t[j] = (t[j] + f).collect() if j in t else f
        return CrossedElement(self.space, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = Fraction(q)
        return CrossedElement(self.space, {j: f.scale(q) for j, f in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, CrossedElement):
            return self.scale(other)
        t = {}
        for a, f in self.terms.items():
            for b, g in other.terms.items():
                h = f * g.compose(-a)
                if h.terms:
                    t[a + b] = (t[a + b] + h) if a + b in t else h
        return CrossedElement(self.space, {j: f.collect() for j, f in t.items()})

    __rmul__ = scale

    def adjoint(self):
        return CrossedElement(self.space, {-j: f.compose(j) for j, f in self.terms.items()})

    def is_zero(self):
        return all(f.is_zero() for f in self.terms.values())

    def __eq__(self, other):
        if not isinstance(other, CrossedElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def monomials(self):
        """(power, coefficient, cylinder) triples."""
        for j, f in sorted(self.terms.items()):
            for c, C in f.terms:
                yield j, c, C


class CrossedMatrix:
    """k x k matrix with sparse CrossedElement entries."""

    __slots__ = ("space", "size", "entries")

    def __init__(self, space: Space, size: int, entries=None):
        self.space = space
        self.size = int(size)
        out = {}
        for (r, c), e in (entries or {}).items():
            if not (0 <= r < size and 0 <= c < size):
                raise IndexError(f"entry ({r},{c}) outside size {size}")
            if e.terms:
                out[(r, c)] = e
        self.entries = out

    @classmethod
    def build(cls, space, size, monomials):
        """From (row, col, coefficient function, power) quadruples."""
        acc = {}
        for r, c, f, j in monomials:
            e = CrossedElement.mono(f, j)
            acc[(r, c)] = acc[(r, c)] + e if (r, c) in acc else e
        return cls(space, size, acc)

    @classmethod
    def scalar(cls, e: CrossedElement):
        return cls(e.space, 1, {(0, 0): e})

    @classmethod
    def identity(cls, space, size):
        return cls(space, size, {(i, i): CrossedElement.one(space) for i in range(size)})

    def __repr__(self):
        return f"CrossedMatrix(size={self.size}, nnz={len(self.entries)})"

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e[k] + v if k in e else v
        return CrossedMatrix(self.space, self.size, e)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        return CrossedMatrix(self.space, self.size, {k: v.scale(q) for k, v in self.entries.items()})

    def __mul__(self, other):
        if not isinstance(other, CrossedMatrix):
            return self.scale(other)
        if self.size != other.size:
            raise ValueError("size mismatch")
        byrow = {}
        for (r, c), v in other.entries.items():
            byrow.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), a in self.entries.items():
            for c, b in byrow.get(k, ()):
                p = a * b
                out[(r, c)] = out[(r, c)] + p if (r, c) in out else p
        return CrossedMatrix(self.space, self.size, out)

    def adjoint(self):
        return CrossedMatrix(
            self.space, self.size, {(c, r): v.adjoint() for (r, c), v in self.entries.items()}
        )

    def __eq__(self, other):
        if not isinstance(other, CrossedMatrix) or self.size != other.size:
            return False
        keys = set(self.entries) | set(other.entries)
        z = CrossedElement.zero(self.space)
        return all(self.entries.get(k, z) == other.entries.get(k, z) for k in keys)

    __hash__ = None

    def monomials(self):
        for (r, c), e in sorted(self.entries.items()):
            for j, q, C in e.monomials():
                yield r, c, j, q, C

    def to_json(self):
        ent = []
        for (r, c), e in sorted(self.entries.items()):
            terms = [
                {"coef": _qs(q), "power": j, "cylinder": C.to_json()} for j, q, C in e.monomials()
            ]
            ent.append({"row": r, "col": c, "terms": terms})
        return {"size": self.size, "entries": ent}


def direct_sum(A: CrossedMatrix, B: CrossedMatrix) -> CrossedMatrix:
    k = A.size
    e = dict(A.entries)
    for (r, c), v in B.entries.items():
        e[(r + k, c + k)] = v
    return CrossedMatrix(A.space, k + B.size, e)


def _qs(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def crossed_matrix_from_json(obj, space: Space) -> CrossedMatrix:
    size = int(obj["size"])
    mons = []
    for ent in obj.get("entries", []):
        for t in ent.get("terms", []):
            C = cylinder_from_json(t.get("cylinder", {}), space)
            f = LCFunction.indicator(C, Fraction(str(t.get("coef", "1"))))
            mons.append((int(ent["row"]), int(ent["col"]), f, int(t.get("power", 0))))
    return CrossedMatrix.build(space, size, mons)
