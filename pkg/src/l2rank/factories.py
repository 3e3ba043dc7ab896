"""The explicit lamplighter elements with prescribed Betti numbers.

All of them live in matrices over the algebra of lamplighter_half.  The
element for a family of polynomials is glued from "polynomial blocks" of
three levels per degree; a block for p(k) d^k carries one extra head
level.  The last four levels form the graph that closes the pattern.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .crossed import CrossedMatrix
from .dynamics import BINARY, LCFunction, parse_cylinder

# cylinders used by the templates, in bracket notation
C_0 = "_0"        # [0]  x_0 = 0
C_00R = "_00"     # [_00]
C_00L = "0_0"     # [0_0]
C_10 = "1_0"      # [1_0]
C_01R = "_01"     # [_01]
C_010L = "01_0"   # [01_0]
C_010R = "_010"   # [_010]


@dataclass(frozen=True)
class PolySpec:
    """Polynomials p_0..p_n (coefficients lowest first) and bases d_1..d_n."""

    polys: tuple
    bases: tuple = ()

    def __post_init__(self):
        polys = tuple(tuple(int(a) for a in p) for p in self.polys)
        bases = tuple(int(d) for d in self.bases)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "bases", bases)
        if not polys:
            raise ValueError("need at least p_0")
        if len(bases) != len(polys) - 1:
            raise ValueError("need one base d_i per polynomial p_i, i >= 1")
        for p in polys:
            if any(a < 0 for a in p):
                raise ValueError("coefficients must be non-negative")
            if len(p) < 2 or p[-1] == 0:
                raise ValueError("each polynomial needs degree >= 1 (no trailing zeros)")
        if polys[0][1] < 1:
            raise ValueError("linear coefficient of p_0 must be >= 1")
        if any(d < 2 for d in bases):
            raise ValueError("bases must be >= 2")

    @property
    def degrees(self):
        return tuple(len(p) - 1 for p in self.polys)

    def exponent(self, k: int) -> int:
        e = _peval(self.polys[0], k)
        for p, d in zip(self.polys[1:], self.bases):
            e += _peval(p, k) * d ** k
        return e


def _peval(p, k):
    v = 0
    for a in reversed(p):
        v = v * k + a
    return v


def parse_poly(text: str):
    """'2,1,1' -> (2, 1, 1), lowest degree first."""
    return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")


class _Builder:
    def __init__(self):
        self.mons = []

    def add(self, r, c, cyl, power=0, coef=-1):
        if coef:
            self.mons.append((r, c, Fraction(coef), cyl, power))

    def plain_block(self, base, coef, chain):
        # levels base+1 .. base+3, accumulating `coef` copies into level 0
        b = base
        self.add(b + 1, b + 1, C_00R, -1)
        self.add(b + 2, b + 1, C_0)
        self.add(b + 2, b + 2, C_00R, -1)
        self.add(b + 3, b + 2, C_10)
        self.add(b + 3, b + 3, C_00L, 1)
        if chain:
            self.add(b + 4, b + 3, C_01R)
        self.add(0, b + 3, C_01R, 0, -coef)

    def poly_block(self, base, p, first_offset=0):
        """Blocks for p = (a_0, a_1, ..., a_m); a_0 is not used here."""
        m = len(p) - 1
        for i in range(m):
            coef = p[i + 1] - (first_offset if i == 0 else 0)
            self.plain_block(base + 3 * i, coef, i < m - 1)
        return base + 3 * m

    def power_block(self, B, p, d):
        """Head for p(k) d^k at levels B..B+3 plus plain blocks; returns the
        last level used."""
        m = len(p) - 1
        self.add(B, B + 1, C_10, 0, -d)
        self.add(B, B, C_00L, 1)
        self.add(0, B, C_01R, 0, -p[0])
        self.add(B + 1, B + 1, C_00R, -1, -d)
        self.add(B + 2, B + 1, C_0)
        self.add(B + 2, B + 2, C_00R, -1, -d)
        self.add(B + 3, B + 2, C_10, 0, -d)
        self.add(B + 3, B + 3, C_00L, 1)
        if m >= 2:
            self.add(B + 4, B + 3, C_01R)
        self.add(0, B + 3, C_01R, 0, -p[1])
        for j in range(1, m):
            self.plain_block(B + 3 * j, p[j + 1], j < m - 1)
        return B + 3 * m

    def last_graph(self, M, entry, size):
        self.add(M + 1, entry, C_010L, 2)
        self.add(M + 1, M + 1, C_00L, 1)
        self.add(M + 2, M + 1, C_0, 0, 1)
        self.add(M + 2, M + 2, C_00L, 1)
        self.add(M + 3, M + 2, C_01R)
        self.add(M + 2, M, C_010L, 1)
        self.add(0, M, C_010R, -1, 1)
        for i in range(size):
            if i not in (0, M, M + 3):
                self.add(i, i, C_0, 0, 1)
        self.add(entry, entry, C_01R)

    def matrix(self, size):
        quads = [
            (r, c, LCFunction.indicator(parse_cylinder(cyl), q), j)
            for r, c, q, cyl, j in self.mons
        ]
        return CrossedMatrix.build(BINARY, size, quads)


def single_poly(p) -> CrossedMatrix:
    """Size 3n+5 element for p of degree n >= 1 with p[1] >= 1."""
    p = tuple(int(a) for a in p)
    PolySpec((p,))
    n = len(p) - 1
    b = _Builder()
    last = b.poly_block(0, p, first_offset=1)
    size = 3 * n + 5
    b.last_graph(last + 1, 1, size)
    return b.matrix(size)


def poly_times_power(p, d) -> CrossedMatrix:
    """Size 3n+6 element for p(k) d^k, p of degree n >= 1."""
    p = tuple(int(a) for a in p)
    if len(p) < 2 or p[-1] == 0 or any(a < 0 for a in p):
        raise ValueError("p needs degree >= 1 and non-negative coefficients")
    if d < 2:
        raise ValueError("d must be >= 2")
    n = len(p) - 1
    b = _Builder()
    last = b.power_block(1, p, d)
    size = 3 * n + 6
    b.last_graph(last + 1, 2, size)
    return b.matrix(size)


def general(spec: PolySpec) -> CrossedMatrix:
    """Size 3N+n+5 element for exponent p_0(k) + sum p_i(k) d_i^k."""
    N = sum(spec.degrees)
    n = len(spec.bases)
    b = _Builder()
    last = b.poly_block(0, spec.polys[0], first_offset=1)
    for p, d in zip(spec.polys[1:], spec.bases):
        B = last + 1
        b.add(B + 1, 1, C_01R)
        last = b.power_block(B, p, d)
    size = 3 * N + n + 5
    assert last == 3 * N + n
    b.last_graph(last + 1, 1, size)
    return b.matrix(size)


def eleven() -> CrossedMatrix:
    """The 11 x 11 element for p(x) = 2 + x + x^2, entered term by term."""
    rows = [
        (1, 1, -1, C_00R, -1), (2, 1, -1, C_0, 0), (2, 2, -1, C_00R, -1),
        (3, 2, -1, C_10, 0), (3, 3, -1, C_00L, 1), (4, 3, -1, C_01R, 0),
        (4, 4, -1, C_00R, -1), (5, 4, -1, C_0, 0), (5, 5, -1, C_00R, -1),
        (6, 5, -1, C_10, 0), (6, 6, -1, C_00L, 1), (0, 6, -1, C_01R, 0),
        (8, 1, -1, C_010L, 2), (8, 8, -1, C_00L, 1), (9, 8, 1, C_0, 0),
        (9, 9, -1, C_00L, 1), (10, 9, -1, C_01R, 0),
        (9, 7, -1, C_010L, 1), (0, 7, 1, C_010R, -1),
        (1, 1, -1, C_01R, 0),
    ]
    rows += [(i, i, 1, C_0, 0) for i in range(11) if i not in (0, 7, 10)]
    quads = [
        (r, c, LCFunction.indicator(parse_cylinder(cyl), q), j) for r, c, q, cyl, j in rows
    ]
    return CrossedMatrix.build(BINARY, 11, quads)


TEMPLATES = ("eleven", "single_poly", "poly_times_power", "general")


def factory(template: str, spec=None, d=None) -> CrossedMatrix:
    if template == "eleven":
        return eleven()
    if template == "single_poly":
        p = spec.polys[0] if isinstance(spec, PolySpec) else spec
        return single_poly(p)
    if template == "poly_times_power":
        if isinstance(spec, PolySpec):
            return poly_times_power(spec.polys[1], spec.bases[0])
        return poly_times_power(spec, d)
    if template == "general":
        return general(spec)
    raise ValueError(f"unknown template {template!r}")


def an_element(n: int):
    """a_n = chi_{X\\E_n} t + t^{-1} chi_{X\\E_n} in lamplighter_n(n)."""
    from .crossed import CrossedElement
    from .scheme import lamplighter_n

    S = lamplighter_n(n)
    g = CrossedElement.mono(S.not_E(), 1)
    return S, CrossedMatrix.scalar(g + g.adjoint())
