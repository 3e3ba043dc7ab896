"""Generator expressions over g_i = chi_{P_i} t and certification of
membership in the subalgebra they generate.

Text syntax: ``g0``, ``g1``...; ``+ - *``; postfix ``'`` or ``adj(e)``
for the adjoint; rational literals ``3``, ``-1/2``; ``1`` is the unit.
Expressions are nested tuples:
("gen", i) ("num", q) ("add", a, b) ("mul", a, b) ("adj", a).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .crossed import CrossedElement, CrossedMatrix
from .dynamics import (
    Cylinder,
    LCFunction,
    NonConstant,
    intersect,
    measure,
    shift_image,
)


class Reject(Exception):
    """An element could not be certified to lie in the generated algebra."""


ONE = ("num", Fraction(1))
ZERO = ("num", Fraction(0))

_TOK = re.compile(r"\s*(?:(g\d+)|(adj)|(\d+(?:/\d+)?)|(.))")


def parse(text: str):
    toks = []
    for m in _TOK.finditer(text):
        g, a, n, o = m.groups()
        if g:
            toks.append(("gen", int(g[1:])))
        elif a:
            toks.append(("adj", None))
        elif n:
            toks.append(("num", Fraction(n)))
        elif o and not o.isspace():
            if o not in "+-*'()":
                raise ValueError(f"unexpected character {o!r}")
            toks.append((o, None))
    pos = [0]

    def peek():
        return toks[pos[0]][0] if pos[0] < len(toks) else None

    def take(kind=None):
        t = toks[pos[0]]
        if kind and t[0] != kind:
            raise ValueError(f"expected {kind!r}, got {t[0]!r}")
        pos[0] += 1
        return t

    def expr():
        e = term()
        while peek() in ("+", "-"):
            op = take()[0]
            r = term()
            e = add(e, r) if op == "+" else add(e, mul(("num", Fraction(-1)), r))
        return e

    def term():
        e = factor()
        while peek() == "*":
            take()
            e = mul(e, factor())
        return e

    def factor():
        if peek() == "-":
            take()
            return mul(("num", Fraction(-1)), factor())
        e = atom()
        while peek() == "'":
            take()
            e = ("adj", e)
        return e

    def atom():
        k = peek()
        if k == "gen":
            return take()
        if k == "num":
            return take()
        if k == "adj":
            take()
            take("(")
            e = expr()
            take(")")
            return ("adj", e)
        if k == "(":
            take()
            e = expr()
            take(")")
            return e
        raise ValueError(f"unexpected token {k!r}")

    if not toks:
        raise ValueError("empty expression")
    e = expr()
    if pos[0] != len(toks):
        raise ValueError("trailing input")
    return e


def add(a, b):
    if a == ZERO:
        return b
    if b == ZERO:
        return a
    return ("add", a, b)


def mul(a, b):
    if a == ZERO or b == ZERO:
        return ZERO
    if a == ONE:
        return b
    if b == ONE:
        return a
    if a[0] == "num" and b[0] == "num":
        return ("num", a[1] * b[1])
    return ("mul", a, b)


def total(items):
    e = ZERO
    for x in items:
        e = add(e, x)
    return e


def prod_all(items):
    e = ONE
    for x in items:
        e = mul(e, x)
    return e


def to_text(e) -> str:
    k = e[0]
    if k == "gen":
        return f"g{e[1]}"
    if k == "num":
        q = e[1]
        s = str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"({s})" if q < 0 else s
    if k == "adj":
        inner = to_text(e[1])
        return inner + "'" if e[1][0] in ("gen", "adj") else f"({inner})'"
    if k == "add":
        return f"{to_text(e[1])} + {to_text(e[2])}"
    if k == "mul":
        parts = []
        for x in (e[1], e[2]):
            s = to_text(x)
            parts.append(f"({s})" if x[0] == "add" else s)
        return " * ".join(parts)
    raise ValueError(e)


def evaluate(e, scheme) -> CrossedElement:
    """generator_expr_eval: the crossed element named by e."""
    k = e[0]
    if k == "gen":
        if not 0 <= e[1] < len(scheme.P):
            raise ValueError(f"g{e[1]} out of range for {scheme}")
        return scheme.gen(e[1])
    if k == "num":
        return CrossedElement.one(scheme.space).scale(e[1])
    if k == "adj":
        return evaluate(e[1], scheme).adjoint()
    if k == "add":
        return evaluate(e[1], scheme) + evaluate(e[2], scheme)
    if k == "mul":
        return evaluate(e[1], scheme) * evaluate(e[2], scheme)
    raise ValueError(e)


def generator_expr_eval(expr, scheme) -> CrossedElement:
    if isinstance(expr, str):
        expr = parse(expr)
    return evaluate(expr, scheme)


# -------------------------------------------------------------- membership
#
# The degree-zero part B0 of the generated algebra is spanned by
# indicators of "runs around the cut": fix the members of P (or E) that
# the orbit visits at positions 0, -1, ... going left and 1, 2, ... going
# right, each side stopping at its first visit to E.  g g^* and g^* g
# products realize exactly these sets, and E endpoints come from
# complements.  A locally constant f lies in B0 iff it is constant on every
# such run set truncated at some finite length N; with members of P fixing
# whole coordinate blocks a bounded N suffices, so the check is finite.


def _left_sets(scheme, N):
    # (labels, ends_in_E, cylinder); labels are for positions 0, -1, ...
    out = []
    E, P = scheme.E, scheme.P
    X = Cylinder(scheme.space, {})

    def rec(labels, C):
        a = len(labels)
        if a == N:
            out.append((labels, False, C))
            return
        W = intersect(C, shift_image(E, a))
        if W is not None:
            out.append((labels, True, W))
        for i, Z in enumerate(P):
            C2 = intersect(C, shift_image(Z, a))
            if C2 is not None:
                rec(labels + (i,), C2)

    rec((), X)
    return out


def _right_sets(scheme, N):
    # labels are for positions 1, 2, ...
    out = []
    E, P = scheme.E, scheme.P
    X = Cylinder(scheme.space, {})

    def rec(labels, C):
        b = len(labels)
        if b == N:
            out.append((labels, False, C))
            return
        W = intersect(C, shift_image(E, -(b + 1)))
        if W is not None:
            out.append((labels, True, W))
        for i, Z in enumerate(P):
            C2 = intersect(C, shift_image(Z, -(b + 1)))
            if C2 is not None:
                rec(labels + (i,), C2)

    rec((), X)
    return out


def _left_expr(scheme, labels, endE):
    if not endE:
        G = prod_all(("gen", i) for i in labels)
        return mul(G, ("adj", G)) if labels else ONE
    base = _left_expr(scheme, labels, False)
    rest = [_left_expr(scheme, labels + (i,), False) for i in range(len(scheme.P))]
    return add(base, mul(("num", Fraction(-1)), total(rest)))


def _right_expr(scheme, labels, endE):
    if not endE:
        H = prod_all(("gen", i) for i in reversed(labels))
        return mul(("adj", H), H) if labels else ONE
    base = _right_expr(scheme, labels, False)
    rest = [_right_expr(scheme, labels + (i,), False) for i in range(len(scheme.P))]
    return add(base, mul(("num", Fraction(-1)), total(rest)))


def _const_on(f: LCFunction, C):
    try:
        return True, f.eval_on(C)
    except NonConstant:
        return False, None


def _b0_bound(scheme, f: LCFunction) -> int:
    if scheme.odometer:
        return max(1, scheme.space.p(scheme.E.prefix_level()))
    cs = f.coords()
    if not cs:
        return 1
    lo, hi = min(cs), max(cs)
    slo, shi = scheme.span
    return max(1, hi - shi, slo + 1 - lo)


def b0_expr(f: LCFunction, scheme):
    """Generator expression for a degree-zero coefficient, or Reject."""
    if not f.terms:
        return ZERO
    bound = _b0_bound(scheme, f)
    for N in range(1, bound + 1):
        L = _left_sets(scheme, N)
        R = _right_sets(scheme, N)
        vals = {}
        ok = True
        for li, (_, _, LC) in enumerate(L):
            for ri, (_, _, RC) in enumerate(R):
                C = intersect(LC, RC)
                if C is None:
                    continue
                good, v = _const_on(f, C)
                if not good:
                    ok = False
                    break
                vals[(li, ri)] = v
            if not ok:
                break
        if ok:
            return _assemble(scheme, L, R, vals)
    raise Reject(f"degree-zero coefficient {f} is not in the generated algebra")


def _assemble(scheme, L, R, vals):
    distinct = set(vals.values())
    if len(distinct) == 1:
        return ("num", distinct.pop())
    by_r = {}
    by_l = {}
    for (li, ri), v in vals.items():
        by_r.setdefault(ri, set()).add(v)
        by_l.setdefault(li, set()).add(v)
    if all(len(s) == 1 for s in by_r.values()):
        terms = []
        for ri, s in sorted(by_r.items()):
            v = next(iter(s))
            if v:
                lab, endE, _ = R[ri]
                terms.append(mul(("num", v), _right_expr(scheme, lab, endE)))
        return total(terms)
    if all(len(s) == 1 for s in by_l.values()):
        terms = []
        for li, s in sorted(by_l.items()):
            v = next(iter(s))
            if v:
                lab, endE, _ = L[li]
                terms.append(mul(("num", v), _left_expr(scheme, lab, endE)))
        return total(terms)
    terms = []
    for (li, ri), v in sorted(vals.items()):
        if v:
            ll, le, _ = L[li]
            rl, re_, _ = R[ri]
            terms.append(
                mul(("num", v), mul(_left_expr(scheme, ll, le), _right_expr(scheme, rl, re_)))
            )
    return total(terms)


def _positive_monomial(scheme, S: Cylinder, j: int):
    """chi_S t^j for j >= 1 as a sum over words of generator products."""
    P = scheme.P
    pieces = []

    def rec(word, U):
        # word = (Z_j, Z_{j-1}, ...); U fixes positions 0, -1, ...
        d = len(word)
        if d == j:
            pieces.append((word, U))
            return
        for i, Z in enumerate(P):
            U2 = intersect(U, shift_image(Z, d)) if U is not None else shift_image(Z, d)
            if U2 is not None and intersect(U2, S) is not None:
                rec(word + (i,), U2)

    rec((), None)
    covered = sum((measure(intersect(U, S)) for _, U in pieces), Fraction(0))
    if covered != measure(S):
        raise Reject(
            f"chi{S.notation()} t^{j}: support leaves the region where t^{j} is a product of generators"
        )
    terms = []
    for word, U in pieces:
        g = prod_all(("gen", i) for i in word)
        SU = intersect(U, S)
        if SU == U or _contains(S, U):
            terms.append(g)
        else:
            terms.append(mul(b0_expr(LCFunction.indicator(SU), scheme), g))
    return total(terms)


def _contains(S, U):
    um = U.map
    return all(um.get(c) == s for c, s in S.cons)


def translate_monomial(scheme, S: Cylinder, j: int):
    if j == 0:
        return b0_expr(LCFunction.indicator(S), scheme)
    if j > 0:
        return _positive_monomial(scheme, S, j)
    # chi_S t^j = ((chi_S t^j)^*)^* and (chi_S t^j)^* = chi_{T^{-j} S} t^{-j}
    return ("adj", _positive_monomial(scheme, shift_image(S, -j), -j))


def translate_element(el: CrossedElement, scheme):
    terms = []
    for j, f in sorted(el.terms.items()):
        if j == 0:
            terms.append(b0_expr(f, scheme))
            continue
        for c, S in f.collect().normalize().terms:
            terms.append(mul(("num", c), translate_monomial(scheme, S, j)))
    return total(terms)


def membership_translate(A, scheme, verify=True):
    """Generator expression per entry of A; raises Reject.

    With verify, every witness is evaluated back and compared with the
    entry exactly.
    """
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    out = {}
    for key, el in sorted(A.entries.items()):
        try:
            e = translate_element(el, scheme)
        except Reject as r:
            raise Reject(f"entry {key}: {r}") from None
        if verify and not (evaluate(e, scheme) == el):
            raise Reject(f"entry {key}: witness does not reproduce the entry")
        out[key] = e
    return out


def random_expr(rng, ngen, depth=3):
    """Random generator expression for property tests."""
    if depth == 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.75:
            return ("gen", rng.randrange(ngen))
        return ("num", Fraction(rng.randint(-2, 2)))
    k = rng.choice(("add", "mul", "mul", "adj"))
    if k == "adj":
        return ("adj", random_expr(rng, ngen, depth - 1))
    return (k, random_expr(rng, ngen, depth - 1), random_expr(rng, ngen, depth - 1))
