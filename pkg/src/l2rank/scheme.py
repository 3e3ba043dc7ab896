"""Approximation schemes (E, P), the windows W of the quasi-partition,
and the compression of crossed-product matrices to rational matrices."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .crossed import CrossedElement, CrossedMatrix
from .dynamics import (
    BINARY,
    Cylinder,
    LCFunction,
    NonConstant,
    Space,
    disjoint,
    intersect,
    measure,
    parse_cylinder,
    prefix_from_index,
    shift_image,
)
from .exactla import QMatrix


class Scheme:
    """A nonempty clopen base E and a partition P of X \\ E."""

    def __init__(self, space: Space, E: Cylinder, P, name="custom", check=True):
        self.space = space
        self.E = E
        self.P = tuple(P)
        self.name = name
        if check:
            parts = (E,) + self.P
            for i, A in enumerate(parts):
                for B in parts[i + 1:]:
                    if not disjoint(A, B):
                        raise ValueError(f"{A} and {B} overlap")
            if sum(measure(C) for C in parts) != 1:
                raise ValueError("E and P do not cover X")
        cs = [c for C in (E,) + self.P for c in C.coords]
        self.span = (min(cs, default=0), max(cs, default=0))

    def __repr__(self):
        return f"Scheme({self.name})"

    @property
    def odometer(self):
        return self.space.kind == "mixed"

    def gen(self, i) -> CrossedElement:
        """g_i = chi_{P[i]} t."""
        return CrossedElement.mono(LCFunction.indicator(self.P[i]), 1)

    def not_E(self) -> LCFunction:
        return LCFunction(self.space, [(1, Z) for Z in self.P])

    def partner(self, C: Cylinder):
        """Index of the member of P containing C, 'E', or None."""
        if _sub(C, self.E):
            return "E"
        for i, Z in enumerate(self.P):
            if _sub(C, Z):
                return i
        return None


def _sub(A, B):
    am = A.map
    return all(am.get(c) == s for c, s in B.cons)


def lamplighter_half() -> Scheme:
    E = parse_cylinder("1_1")
    P = [parse_cylinder(w) for w in ("0_0", "0_1", "1_0")]
    return Scheme(BINARY, E, P, "lamplighter_half")


def lamplighter_n(n: int) -> Scheme:
    if n < 0:
        raise ValueError("n must be >= 0")
    m = 2 * n + 1
    coords = list(range(-n, n + 1))
    E = Cylinder(BINARY, {c: 1 for c in coords})
    P = []
    for bits in product((0, 1), repeat=m):
        if all(bits):
            continue
        P.append(Cylinder(BINARY, dict(zip(coords, bits))))
    return Scheme(BINARY, E, P, f"lamplighter_n({n})")


def odometer_level(space: Space, m: int) -> Scheme:
    if space.kind != "mixed" or m < 1:
        raise ValueError("odometer_level needs a mixed-radix space and m >= 1")
    pm = space.p(m)
    E = prefix_from_index(space, 0, m)
    P = [prefix_from_index(space, l, m) for l in range(1, pm)]
    return Scheme(space, E, P, f"odometer_level({m})")


def preset(name: str) -> Scheme:
    """'half', 'a<N>' / 'lamplighter_n(N)'."""
    s = name.strip()
    if s in ("half", "lamplighter_half", "a1/2"):
        return lamplighter_half()
    if s.startswith("lamplighter_n(") and s.endswith(")"):
        return lamplighter_n(int(s[len("lamplighter_n("):-1]))
    if s.startswith("a") and s[1:].isdigit():
        return lamplighter_n(int(s[1:]))
    raise ValueError(f"unknown scheme preset {name!r}")


@dataclass(frozen=True)
class Window:
    itinerary: tuple
    cylinder: Cylinder
    measure: Fraction

    @property
    def length(self):
        return len(self.itinerary) + 1

    @property
    def depth(self):
        return len(self.itinerary)

    def __repr__(self):
        return f"Window({self.cylinder.notation()}, |W|={self.length}, mu={self.measure})"


def enumerate_windows(scheme: Scheme, max_depth=None, coverage_target=None):
    """All nonempty windows by itinerary length, in (depth, itinerary)
    order.  Stops at max_depth, or after the first depth at which the
    coverage sum mu(W)|W| reaches coverage_target.  Returns
    (windows, coverage)."""
    if max_depth is None and coverage_target is None:
        raise ValueError("need max_depth or coverage_target")
    if coverage_target is not None:
        coverage_target = Fraction(coverage_target)
        if coverage_target > 1 or (coverage_target == 1 and max_depth is None and not scheme.odometer):
            raise ValueError("coverage target 1 is not reachable; give c < 1 or a depth cap")
    windows = []
    cov = Fraction(0)
    level = [((), scheme.E)]
    d = 0
    while level:
        nxt = []
        for itin, C in level:
            W = intersect(C, shift_image(scheme.E, -(d + 1)))
            if W is not None:
                mu = measure(W)
                windows.append(Window(itin, W, mu))
                cov += mu * (d + 1)
            if max_depth is not None and d + 1 > max_depth:
                continue
            for i, Z in enumerate(scheme.P):
                C2 = intersect(C, shift_image(Z, -(d + 1)))
                if C2 is not None:
                    nxt.append((itin + (i,), C2))
        if coverage_target is not None and cov >= coverage_target:
            break
        level = nxt
        d += 1
    return windows, cov


def window_from_itinerary(scheme: Scheme, itinerary) -> Window:
    C = scheme.E
    for i, z in enumerate(itinerary, start=1):
        C = intersect(C, shift_image(scheme.P[z], -i)) if C is not None else None
    if C is not None:
        C = intersect(C, shift_image(scheme.E, -(len(itinerary) + 1)))
    if C is None:
        raise ValueError(f"itinerary {list(itinerary)} gives an empty window")
    return Window(tuple(itinerary), C, measure(C))


def half_itinerary(ks) -> tuple:
    """Itinerary in lamplighter_half of W = [1 _1 0^k1 1 0^k2 1 ... 0^kr 1 1]."""
    out = []
    for k in ks:
        if k < 1:
            raise ValueError("zero blocks must have length >= 1")
        out += [2] + [0] * (k - 1) + [1]
    return tuple(out)


def half_window(ks) -> Window:
    return window_from_itinerary(lamplighter_half(), half_itinerary(ks))


def compress(A, W: Window) -> QMatrix:
    """pi(A)_W as a rational matrix of size k|W|, level-major.

    The entry of sum_m f_m t^m at (row level, i'; col level, i) is
    f_{i'-i}(T^{i'} W).
    """
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    n = W.length
    k = A.size
    shifted = [shift_image(W.cylinder, i) for i in range(n)]
    ent = {}
    for (r, c), el in A.entries.items():
        for m, f in el.terms.items():
            for ip in range(max(0, m), min(n, n + m)):
                try:
                    v = f.eval_on(shifted[ip])
                except NonConstant as e:
                    raise NonConstant(
                        shifted[ip],
                        f"entry ({r},{c}) power {m} not constant on T^{ip}(W) for {W}",
                    ) from e
                if v:
                    key = (r * n + ip, c * n + ip - m)
                    ent[key] = ent.get(key, 0) + v
    return QMatrix(k * n, k * n, ent)
