"""Cylinder sets, the shift and odometer maps, product measures and
locally constant functions with rational values."""

from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Iterable, Mapping


class NonConstant(Exception):
    """A function is not constant on the cylinder it was evaluated on."""

    def __init__(self, cylinder, msg=None):
        self.cylinder = cylinder
        super().__init__(msg or f"function not constant on {cylinder}")


class NeedsRefinement(ValueError):
    """Odometer maps only act on full prefix cylinders."""


class Space:
    """Either the bilateral binary space {0,1}^Z or a one-sided
    mixed-radix space prod_{i>=1} {0..n_i-1}.

    For mixed radix the finite list ``radices`` is continued forever,
    either by repeating it ("periodic") or by repeating its last entry
    ("constant").
    """

    __slots__ = ("kind", "radices", "continuation", "_key")

    def __init__(self, kind="binary", radices=(), continuation="periodic"):
        if kind not in ("binary", "mixed"):
            raise ValueError(f"unknown space kind {kind!r}")
        radices = tuple(int(n) for n in radices)
        if kind == "mixed":
            if not radices:
                raise ValueError("mixed-radix space needs at least one radix")
            if any(n < 2 for n in radices):
                raise ValueError("radices must be >= 2")
            if continuation not in ("periodic", "constant"):
                raise ValueError("continuation must be 'periodic' or 'constant'")
        else:
            radices = ()
            continuation = ""
        self.kind = kind
        self.radices = radices
        self.continuation = continuation
        self._key = (kind, radices, continuation)

    @property
    def binary(self):
        return self.kind == "binary"

    def radix(self, i: int) -> int:
        """Alphabet size at coordinate i."""
        if self.kind == "binary":
            return 2
        if i < 1:
            raise ValueError(f"coordinate {i} outside a one-sided space")
        L = len(self.radices)
        if i <= L:
            return self.radices[i - 1]
        if self.continuation == "periodic":
            return self.radices[(i - 1) % L]
        return self.radices[-1]

    def p(self, m: int) -> int:
        """p_m = n_1 n_2 ... n_m (p_0 = 1)."""
        return prod(self.radix(i) for i in range(1, m + 1))

    def __eq__(self, other):
        return isinstance(other, Space) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        if self.kind == "binary":
            return "Space(binary)"
        return f"Space(mixed, {list(self.radices)}, {self.continuation})"


BINARY = Space("binary")


class Cylinder:
    """Clopen set fixed by finitely many coordinate constraints.

    The empty constraint map is the whole space.  Instances are
    immutable; equality is equality of constraint maps.
    """

    __slots__ = ("space", "cons", "map", "_hash")

    def __init__(self, space: Space, constraints: Mapping[int, int] | Iterable = ()):
        if isinstance(constraints, Mapping):
            items = constraints.items()
        else:
            items = constraints
        m = {}
        for c, s in items:
            c, s = int(c), int(s)
            if not 0 <= s < space.radix(c):
                raise ValueError(f"symbol {s} not in alphabet at coordinate {c}")
            if m.get(c, s) != s:
                raise ValueError(f"conflicting constraints at coordinate {c}")
            m[c] = s
        self.space = space
        self.map = m
        self.cons = tuple(sorted(m.items()))
        self._hash = hash((space, self.cons))

    @classmethod
    def _raw(cls, space, m):
        # trusted constructor, no validation
        self = object.__new__(cls)
        self.space = space
        self.map = m
        self.cons = tuple(sorted(m.items()))
        self._hash = hash((space, self.cons))
        return self

    def __eq__(self, other):
        return (
            isinstance(other, Cylinder)
            and self.space == other.space
            and self.cons == other.cons
        )

    def __hash__(self):
        return self._hash

    def __len__(self):
        return len(self.cons)

    def __repr__(self):
        return f"Cylinder({self.notation()})"

    def notation(self) -> str:
        """Bracket notation; the origin symbol is marked with '_' before it
        (binary) and missing coordinates inside the span are '*'."""
        if not self.cons:
            return "X"
        if self.space.kind == "mixed":
            return "prefix" + str([s for _, s in self.cons]) if self.is_full_prefix() else str(dict(self.cons))
        lo = min(self.cons[0][0], 0)
        hi = max(self.cons[-1][0], 0)
        out = []
        for c in range(lo, hi + 1):
            s = self.map.get(c)
            out.append(("_" if c == 0 else "") + ("*" if s is None else str(s)))
        return "[" + "".join(out) + "]"

    @property
    def coords(self):
        return [c for c, _ in self.cons]

    def is_full_prefix(self) -> bool:
        return self.space.kind == "mixed" and self.coords == list(range(1, len(self.cons) + 1))

    def prefix_level(self) -> int:
        """Largest constrained coordinate (odometer level)."""
        return self.cons[-1][0] if self.cons else 0

    def to_json(self):
        if self.space.kind == "mixed" and self.is_full_prefix():
            return {"prefix": [s for _, s in self.cons]}
        return {"coords": {str(c): s for c, s in self.cons}}


def parse_cylinder(text: str, space: Space = BINARY) -> Cylinder:
    """Parse binary bracket notation such as "1_10" or "[1_10]".

    The symbol after '_' sits at coordinate 0.  Without '_' the first
    symbol is at coordinate 0.  '*' leaves a coordinate free.
    """
    t = text.strip().strip("[]").replace(" ", "")
    if "_" in t:
        k = t.index("_")
        t = t[:k] + t[k + 1:]
    else:
        k = 0
    m = {}
    for i, ch in enumerate(t):
        if ch == "*":
            continue
        if ch not in "01":
            raise ValueError(f"bad symbol {ch!r} in {text!r}")
        m[i - k] = int(ch)
    return Cylinder(space, m)


def prefix_cylinder(space: Space, digits) -> Cylinder:
    return Cylinder(space, {i + 1: d for i, d in enumerate(digits)})


def cylinder_from_json(obj, space: Space) -> Cylinder:
    if "prefix" in obj:
        return prefix_cylinder(space, obj["prefix"])
    return Cylinder(space, {int(k): int(v) for k, v in obj.get("coords", {}).items()})


def prefix_index(C: Cylinder) -> int:
    """Mixed-radix integer l = a_1 + a_2 n_1 + ... of a full prefix."""
    if not C.is_full_prefix() and C.cons:
        raise NeedsRefinement(f"{C} is not a full prefix cylinder")
    l, w = 0, 1
    for c, s in C.cons:
        l += s * w
        w *= C.space.radix(c)
    return l


def prefix_from_index(space: Space, l: int, m: int) -> Cylinder:
    digits = {}
    for i in range(1, m + 1):
        n = space.radix(i)
        digits[i] = l % n
        l //= n
    return Cylinder._raw(space, digits)


def shift_image(C: Cylinder, j: int) -> Cylinder:
    """T^j(C) for the shift T(x)_i = x_{i+1}, or the odometer."""
    if j == 0:
        return C
    if C.space.kind == "binary":
        return Cylinder._raw(C.space, {c - j: s for c, s in C.cons})
    if not C.cons:
        return C
    if not C.is_full_prefix():
        raise NeedsRefinement(f"{C} is not a full prefix cylinder")
    m = len(C.cons)
    return prefix_from_index(C.space, (prefix_index(C) + j) % C.space.p(m), m)


def measure(C: Cylinder) -> Fraction:
    if C.space.kind == "binary":
        return Fraction(1, 1 << len(C.cons))
    return Fraction(1, prod(C.space.radix(c) for c, _ in C.cons))


def intersect(A: Cylinder, B: Cylinder) -> Cylinder | None:
    """A ∩ B, or None when the constraints conflict."""
    if len(A.cons) < len(B.cons):
        A, B = B, A
    am = A.map
    m = None
    for c, s in B.cons:
        v = am.get(c)
        if v is None:
            if m is None:
                m = dict(am)
            m[c] = s
        elif v != s:
            return None
    if m is None:
        return A
    return Cylinder._raw(A.space, m)


def subset(A: Cylinder, B: Cylinder) -> bool:
    """A ⊆ B (A is nonempty by construction)."""
    am = A.map
    for c, s in B.cons:
        if am.get(c) != s:
            return False
    return True


def disjoint(A: Cylinder, B: Cylinder) -> bool:
    am = A.map
    for c, s in B.cons:
        v = am.get(c)
        if v is not None and v != s:
            return True
    return False


def refine(C: Cylinder, coords) -> list[Cylinder]:
    """Split C into the cylinders that also fix every coordinate in coords."""
    out = [dict(C.map)]
    for c in sorted(set(coords)):
        if c in C.map:
            continue
        n = C.space.radix(c)
        out = [{**m, c: s} for m in out for s in range(n)]
    return [Cylinder._raw(C.space, m) for m in out]


def refine_to_prefix(C: Cylinder, m: int | None = None) -> list[Cylinder]:
    """Refine an odometer cylinder into full prefix cylinders of level m."""
    if m is None:
        m = C.prefix_level()
    if C.prefix_level() > m:
        raise ValueError(f"{C} constrains coordinates beyond level {m}")
    return refine(C, range(1, m + 1))


def _split(space, region: dict, terms, acc, out):
    # decision tree: refine region until every remaining term either
    # contains it or misses it
    active = []
    for c, cyl in terms:
        inside = True
        for p, s in cyl.cons:
            v = region.get(p)
            if v is None:
                inside = False
            elif v != s:
                break
        else:
            if inside:
                acc += c
            else:
                active.append((c, cyl))
    if not active:
        out.append((acc, region))
        return
    first = active[0][1]
    coord = next(p for p, _ in first.cons if p not in region)
    for s in range(space.radix(coord)):
        r = dict(region)
        r[coord] = s
        _split(space, r, active, acc, out)


class LCFunction:
    """Finite sum of c * chi_C with rational c."""

    __slots__ = ("space", "terms")

    def __init__(self, space: Space, terms=()):
        self.space = space
        clean = []
        for c, cyl in terms:
            c = Fraction(c)
            if c:
                if cyl.space != space:
                    raise ValueError("cylinder from a different space")
                clean.append((c, cyl))
        self.terms = tuple(clean)

    @classmethod
    def const(cls, space, c=1):
        return cls(space, [(c, Cylinder._raw(space, {}))])

    @classmethod
    def indicator(cls, C: Cylinder, c=1):
        return cls(C.space, [(c, C)])

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*chi{cyl.notation()}" for c, cyl in self.terms)

    def __add__(self, other):
        return LCFunction(self.space, self.terms + other.terms)

    def __neg__(self):
        return LCFunction(self.space, [(-c, C) for c, C in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q):
        q = Fraction(q)
        return LCFunction(self.space, [(q * c, C) for c, C in self.terms])

    def __mul__(self, other):
        if not isinstance(other, LCFunction):
            return self.scale(other)
        out = []
        for a, A in self.terms:
            for b, B in other.terms:
                C = intersect(A, B)
                if C is not None:
                    out.append((a * b, C))
        return LCFunction(self.space, out).collect()

    __rmul__ = scale

    def collect(self):
        """Merge terms sitting on the same cylinder."""
        acc = {}
        for c, C in self.terms:
            acc[C] = acc.get(C, 0) + c
        return LCFunction(self.space, [(c, C) for C, c in acc.items()])

    def compose(self, j: int):
        """f ∘ T^j, i.e. chi_C ∘ T^j = chi_{T^{-j} C}."""
        if j == 0:
            return self
        out = []
        for c, C in self.terms:
            if self.space.kind == "mixed" and C.cons and not C.is_full_prefix():
                pieces = refine_to_prefix(C)
            else:
                pieces = [C]
            out.extend((c, shift_image(P, -j)) for P in pieces)
        return LCFunction(self.space, out)

    def normalize(self):
        """Disjoint-support form: pieces on which the value is constant."""
        out = []
        _split(self.space, {}, self.terms, Fraction(0), out)
        return LCFunction(self.space, [(v, Cylinder._raw(self.space, r)) for v, r in out if v])

    def is_zero(self) -> bool:
        return not self.collect().normalize().terms

    def __eq__(self, other):
        if not isinstance(other, LCFunction):
            return NotImplemented
        return self.space == other.space and (self - other).is_zero()

    __hash__ = None

    def eval_on(self, C: Cylinder) -> Fraction:
        """Value of the function on C; NonConstant when it varies there."""
        acc = Fraction(0)
        partial = False
        cm = C.map
        for c, cyl in self.terms:
            inside = True
            for p, s in cyl.cons:
                v = cm.get(p)
                if v is None:
                    inside = False
                elif v != s:
                    break
            else:
                if inside:
                    acc += c
                else:
                    partial = True
        if not partial:
            return acc
        out = []
        _split(self.space, dict(cm), self.terms, Fraction(0), out)
        vals = {v for v, _ in out}
        if len(vals) != 1:
            raise NonConstant(C)
        return vals.pop()

    def coords(self) -> set:
        return {p for _, C in self.terms for p in C.coords}

    def radius(self) -> int:
        cs = self.coords()
        return max((abs(c) for c in cs), default=0)

    def integral(self) -> Fraction:
        return sum((c * measure(C) for c, C in self.terms), Fraction(0))


def lc_eval_on(f: LCFunction, C: Cylinder) -> Fraction:
    return f.eval_on(C)


def chi(text: str) -> LCFunction:
    """Indicator of a binary cylinder in bracket notation."""
    return LCFunction.indicator(parse_cylinder(text))
