"""The odometer algebra C(X) x_T Z on a mixed-radix space.

At level m the prefix cylinders [a_1..a_m] index a basis 0..p_m-1 by
l = a_1 + a_2 n_1 + ... + a_m p_{m-1}; T adds one with carry, so t acts
as the cyclic shift l -> l+1 whose wrap-around picks up s = t^{p_m}.
Ranks are computed over Q(s) and divided by p_m.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .crossed import CrossedElement, CrossedMatrix
from .dynamics import LCFunction, Space, prefix_from_index, prefix_index, refine_to_prefix
from .exactla import rank_poly_rows
from .polys import Laurent, Poly


def _factor(n: int) -> dict:
    out = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Supernatural:
    """prod of the radices n_1 n_2 ... as a map prime -> exponent."""

    def __init__(self, radices, continuation="periodic"):
        self.space = Space("mixed", radices, continuation)
        self.radices = self.space.radices
        self.continuation = continuation

    @classmethod
    def of(cls, space: Space):
        return cls(space.radices, space.continuation)

    def exponent(self, q: int):
        """epsilon_q(n) as an int, or math.inf."""
        rep = self.radices if self.continuation == "periodic" else self.radices[-1:]
        if any(n % q == 0 for n in rep):
            return math.inf
        head = () if self.continuation == "periodic" else self.radices[:-1]
        return sum(_factor(n).get(q, 0) for n in head)

    def p(self, m: int) -> int:
        return self.space.p(m)

    def __repr__(self):
        return f"Supernatural({list(self.radices)}, {self.continuation})"


def znumber_contains(n: Supernatural, x) -> bool:
    """Whether x lies in Z(n): its denominator divides some p_m."""
    den = Fraction(x).denominator
    return all(e <= n.exponent(q) for q, e in _factor(den).items())


class LaurentMatrix:
    """Square matrix with Q[s, 1/s] entries, stored sparsely."""

    __slots__ = ("size", "entries")

    def __init__(self, size: int, entries=None):
        self.size = int(size)
        self.entries = {k: v for k, v in (entries or {}).items() if v}

    def __repr__(self):
        return f"LaurentMatrix(size={self.size}, nnz={len(self.entries)})"

    def __eq__(self, other):
        return (
            isinstance(other, LaurentMatrix)
            and self.size == other.size
            and self.entries == other.entries
        )

    __hash__ = None

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e[k] + v if k in e else v
        return LaurentMatrix(self.size, e)

    def __matmul__(self, other):
        byrow = {}
        for (r, c), v in other.entries.items():
            byrow.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), a in self.entries.items():
            for c, b in byrow.get(k, ()):
                p = a * b
                out[(r, c)] = out[(r, c)] + p if (r, c) in out else p
        return LaurentMatrix(self.size, out)

    def adjoint(self):
        """Transpose combined with s -> 1/s."""
        return LaurentMatrix(self.size, {(c, r): v.inv_var() for (r, c), v in self.entries.items()})

    def dense(self):
        n = self.size
        return [[self.entries.get((r, c), Laurent()) for c in range(n)] for r in range(n)]

    def rank(self) -> int:
        """Rank over Q(s); each row is moved into Q[s] by a power of s."""
        rows = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        prows = []
        for r in sorted(rows):
            row = rows[r]
            low = min(v.val for v in row.values())
            prows.append(
                {c: Poly.monomial(v.val - low) * v.poly for c, v in row.items()}
            )
        return rank_poly_rows(prows, self.size)


def element_level(A) -> int:
    """Smallest m >= 1 with every cylinder constraint in coordinates 1..m."""
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    m = 1
    for _, _, _, _, C in A.monomials():
        if C.cons:
            m = max(m, C.prefix_level())
    return m


def _function_diag(f: LCFunction, m: int):
    """{l: value} of f on the level-m prefixes."""
    out = {}
    for q, C in f.terms:
        for piece in refine_to_prefix(C, m):
            l = prefix_index(piece)
            out[l] = out.get(l, 0) + q
    return out


def realize_at_level(A, m: int) -> LaurentMatrix:
    """Image of A in M_{k p_m}(Q[s, 1/s]); block (r, c) holds entry (r, c)."""
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    if A.space.kind != "mixed":
        raise ValueError("realization needs a mixed-radix space")
    need = element_level(A)
    if m < need:
        raise ValueError(f"level {m} is too small; the element needs m >= {need}")
    p = A.space.p(m)
    out = {}
    for (r, c), el in A.entries.items():
        for j, f in el.terms.items():
            for row, val in _function_diag(f, m).items():
                if not val:
                    continue
                l = (row - j) % p
                s_pow = (l + j) // p
                key = (r * p + row, c * p + l)
                term = Laurent.mono(s_pow, Fraction(val))
                out[key] = out[key] + term if key in out else term
    return LaurentMatrix(A.size * p, out)


def odo_rank(A, level=None) -> Fraction:
    """Rank of A in the odometer algebra, normalized so rk(1) = 1."""
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    m = element_level(A) if level is None else level
    L = realize_at_level(A, m)
    return Fraction(L.rank(), A.space.p(m))


def from_level(L: LaurentMatrix, space: Space, m: int, k: int = 1) -> CrossedMatrix:
    """The element whose level-m image is L: a s^e at (i, j) comes from
    a chi_[i] t^(i - j + e p_m)."""
    p = space.p(m)
    if L.size != k * p:
        raise ValueError("size mismatch")
    quads = []
    for (R, Cc), v in L.entries.items():
        r, i = divmod(R, p)
        c, j = divmod(Cc, p)
        for e, a in v.coeffs().items():
            f = LCFunction.indicator(prefix_from_index(space, i, m), a)
            quads.append((r, c, f, i - j + e * p))
    return CrossedMatrix.build(space, k, quads)


def embed_level(L: LaurentMatrix, space: Space, m: int, k: int = 1) -> LaurentMatrix:
    """The block-diagonal inclusion of level m into level m+1."""
    return realize_at_level(from_level(L, space, m, k), m + 1)


def level_consistency(A, m: int) -> bool:
    """odo_rank at level m equals the rank of the embedded image at m+1."""
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    r1 = odo_rank(A, m)
    E = embed_level(realize_at_level(A, m), A.space, m, A.size)
    r2 = Fraction(E.rank(), A.space.p(m + 1))
    return r1 == r2


def matrix_unit(space: Space, m: int, i: int, j: int) -> CrossedElement:
    """e_ij^(m) = chi_[i] t^(i - j)."""
    return CrossedElement.mono(LCFunction.indicator(prefix_from_index(space, i, m)), i - j)


def diagonal_projection(space: Space, m: int, a: int) -> CrossedElement:
    """sum_{i < a} e_ii^(m); its rank is a / p_m."""
    f = LCFunction(space, [(1, prefix_from_index(space, i, m)) for i in range(a)])
    if not f.terms:
        return CrossedElement.zero(space)
    return CrossedElement.mono(f, 0)


def random_element(rng, space: Space, m: int, size: int = 1, terms: int = 3, span: int = 3):
    """Random element of level m for property tests."""
    p = space.p(m)
    quads = []
    for _ in range(terms * size):
        r, c = rng.randrange(size), rng.randrange(size)
        l = rng.randrange(p)
        q = Fraction(rng.randint(-3, 3))
        j = rng.randint(-span, span)
        quads.append((r, c, LCFunction.indicator(prefix_from_index(space, l, m), q), j))
    return CrossedMatrix.build(space, size, quads)
