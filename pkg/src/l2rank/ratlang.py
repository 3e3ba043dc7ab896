"""Rational languages over the degree-weighted alphabet x_1..x_n with
d(x_i) = i + 1, their generating functions, and the values
alpha_L = (1/8) sum_{w in L} 2^-d(w).

Letters are 1-based everywhere, in code and in the JSON format.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .polys import Poly, RatFunc


def degree(letter: int) -> int:
    return letter + 1


def word_degree(word) -> int:
    return sum(degree(a) for a in word)


@dataclass
class Automaton:
    """Finite automaton over letters 1..n.  transitions holds
    (state, letter, state) triples."""

    n: int
    states: int
    initial: int
    accepting: frozenset
    transitions: tuple = ()
    _delta: dict = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.accepting = frozenset(self.accepting)
        self.transitions = tuple(sorted(set((int(a), int(x), int(b)) for a, x, b in self.transitions)))
        if self.n < 1:
            raise ValueError("alphabet needs n >= 1")
        if not 0 <= self.initial < self.states:
            raise ValueError("initial state out of range")
        for a, x, b in self.transitions:
            if not (0 <= a < self.states and 0 <= b < self.states):
                raise ValueError(f"transition {(a, x, b)} uses an unknown state")
            if not 1 <= x <= self.n:
                raise ValueError(f"letter {x} outside 1..{self.n}")
        if any(not 0 <= q < self.states for q in self.accepting):
            raise ValueError("accepting state out of range")
        d = {}
        for a, x, b in self.transitions:
            d.setdefault((a, x), set()).add(b)
        self._delta = d

    @property
    def deterministic(self) -> bool:
        return all(len(v) == 1 for v in self._delta.values())

    @property
    def complete(self) -> bool:
        return self.deterministic and all(
            (q, x) in self._delta for q in range(self.states) for x in range(1, self.n + 1)
        )

    def step(self, q, x):
        return self._delta.get((q, x), set())

    def accepts(self, word) -> bool:
        cur = {self.initial}
        for x in word:
            cur = set().union(*(self.step(q, x) for q in cur)) if cur else set()
        return bool(cur & self.accepting)

    # ---------------------------------------------------------- json

    def to_json(self):
        return {
            "alphabet": self.n,
            "states": self.states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [list(t) for t in self.transitions],
        }

    @classmethod
    def from_json(cls, obj, n=None):
        trans = [tuple(t) for t in obj.get("transitions", [])]
        if n is None:
            n = obj.get("alphabet") or max((x for _, x, _ in trans), default=1)
        return cls(int(n), int(obj["states"]), int(obj.get("initial", 0)),
                   frozenset(obj.get("accepting", [])), tuple(trans))

    @classmethod
    def load(cls, path, n=None):
        with open(path) as fh:
            return cls.from_json(json.load(fh), n)


def determinize(A: Automaton) -> Automaton:
    """Subset construction; the result is complete (the empty set is the sink)."""
    start = frozenset({A.initial})
    index = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        S = order[i]
        for x in range(1, A.n + 1):
            T = frozenset(b for q in S for b in A.step(q, x))
            if T not in index:
                index[T] = len(order)
                order.append(T)
            trans.append((i, x, index[T]))
        i += 1
    acc = frozenset(j for j, S in enumerate(order) if S & A.accepting)
    return Automaton(A.n, len(order), 0, acc, tuple(trans))


def completed(A: Automaton) -> Automaton:
    if A.complete:
        return A
    if not A.deterministic:
        return determinize(A)
    sink = A.states
    trans = list(A.transitions)
    for q in range(A.states):
        for x in range(1, A.n + 1):
            if (q, x) not in A._delta:
                trans.append((q, x, sink))
    trans += [(sink, x, sink) for x in range(1, A.n + 1)]
    return Automaton(A.n, A.states + 1, A.initial, A.accepting, tuple(trans))


def _product(A: Automaton, B: Automaton, accept) -> Automaton:
    """Product automaton on the pairs reachable from the initial pair."""
    if A.n != B.n:
        raise ValueError("automata over different alphabets")
    A, B = completed(A), completed(B)
    start = (A.initial, B.initial)
    index = {start: 0}
    order = [start]
    trans = []
    i = 0
    while i < len(order):
        q, r = order[i]
        for x in range(1, A.n + 1):
            (q2,) = A.step(q, x)
            (r2,) = B.step(r, x)
            key = (q2, r2)
            if key not in index:
                index[key] = len(order)
                order.append(key)
            trans.append((i, x, index[key]))
        i += 1
    acc = frozenset(
        j for j, (q, r) in enumerate(order) if accept(q in A.accepting, r in B.accepting)
    )
    return Automaton(A.n, len(order), 0, acc, tuple(trans))


def intersection(A, B):
    return _product(A, B, lambda a, b: a and b)


def union(A, B):
    return _product(A, B, lambda a, b: a or b)


def complement(A):
    A = completed(A)
    return Automaton(A.n, A.states, A.initial, frozenset(range(A.states)) - A.accepting, A.transitions)


def all_words(n: int) -> Automaton:
    return Automaton(n, 1, 0, frozenset({0}), tuple((0, x, 0) for x in range(1, n + 1)))


def empty_language(n: int) -> Automaton:
    return Automaton(n, 1, 0, frozenset(), ())


def epsilon_language(n: int) -> Automaton:
    return Automaton(n, 1, 0, frozenset({0}), ())


def star_of_letter(n: int, letter: int) -> Automaton:
    return Automaton(n, 1, 0, frozenset({0}), ((0, letter, 0),))


def random_dfa(rng, n: int, states: int = 4, density: float = 0.8) -> Automaton:
    trans = []
    for q in range(states):
        for x in range(1, n + 1):
            if rng.random() < density:
                trans.append((q, x, rng.randrange(states)))
    acc = frozenset(q for q in range(states) if rng.random() < 0.5)
    return Automaton(n, states, 0, acc, tuple(trans))


# ----------------------------------------------------- generating functions


def _bareiss_det(rows) -> Poly:
    """Determinant of a square matrix over Q[x] by fraction-free elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return Poly((1,))
    sign = 1
    prev = Poly((1,))
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if a[r][k]), None)
        if piv is None:
            return Poly(())
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = Poly(())
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def _solve_at(Mx, v, q) -> RatFunc:
    """Component q of the solution of (I - Mx) z = v, by Cramer's rule."""
    n = len(v)
    A = [[(Poly((1,)) if i == j else Poly(())) - Mx[i][j] for j in range(n)] for i in range(n)]
    den = _bareiss_det(A)
    if not den:
        raise ArithmeticError("I - M(x) is singular")
    for i in range(n):
        A[i][q] = v[i]
    return RatFunc(_bareiss_det(A), den)


def trimmed(A: Automaton) -> Automaton:
    """Deterministic A restricted to states that are reachable and can
    reach an accepting state; renumbered with the initial state first.
    An empty language comes back as a single non-accepting state."""
    if not A.deterministic:
        A = determinize(A)
    seen = {A.initial}
    stack = [A.initial]
    while stack:
        q = stack.pop()
        for x in range(1, A.n + 1):
            for b in A.step(q, x):
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
    back = {}
    for a, x, b in A.transitions:
        back.setdefault(b, []).append(a)
    live = set(A.accepting & seen)
    stack = list(live)
    while stack:
        q = stack.pop()
        for a in back.get(q, ()):
            if a in seen and a not in live:
                live.add(a)
                stack.append(a)
    if A.initial not in live:
        return Automaton(A.n, 1, 0, frozenset(), ())
    keep = [A.initial] + sorted(live - {A.initial})
    ren = {q: i for i, q in enumerate(keep)}
    trans = [(ren[a], x, ren[b]) for a, x, b in A.transitions if a in ren and b in ren]
    return Automaton(A.n, len(keep), 0, frozenset(ren[q] for q in A.accepting if q in ren), tuple(trans))


def minimized(A: Automaton) -> Automaton:
    """Moore partition refinement of the complete DFA, then trimmed."""
    A = completed(trimmed(A))
    block = [1 if q in A.accepting else 0 for q in range(A.states)]
    while True:
        sig = [
            (block[q],) + tuple(block[next(iter(A.step(q, x)))] for x in range(1, A.n + 1))
            for q in range(A.states)
        ]
        ids = {}
        new = [ids.setdefault(t, len(ids)) for t in sig]
        if len(ids) == len(set(block)):
            break
        block = new
    trans = {(block[a], x, block[b]) for a, x, b in A.transitions}
    acc = frozenset(block[q] for q in A.accepting)
    return trimmed(Automaton(A.n, max(block) + 1, block[A.initial], acc, tuple(trans)))


def gen_function(A: Automaton) -> RatFunc:
    """s(L)(x) = sum_w in L x^d(w) as an exact rational function."""
    A = minimized(A)
    n = A.states
    if not A.accepting:
        return RatFunc(Poly(()))
    Mx = [[Poly(())] * n for _ in range(n)]
    for a, x, b in A.transitions:
        Mx[a][b] = Mx[a][b] + Poly.monomial(degree(x))
    v = [Poly((1,)) if q in A.accepting else Poly(()) for q in range(n)]
    return _solve_at(Mx, v, A.initial)


def alpha(A: Automaton) -> Fraction:
    return gen_function(A)(Fraction(1, 2)) / 8


def all_words_value(n: int) -> Fraction:
    """sum over all words of 2^-d(w) = 1 / (1 - sum_i 2^-(i+1))."""
    return 1 / (1 - sum(Fraction(1, 2 ** (i + 1)) for i in range(1, n + 1)))


def all_word_counts(n: int, D: int) -> list:
    a = [0] * (D + 1)
    a[0] = 1
    for j in range(1, D + 1):
        a[j] = sum(a[j - degree(x)] for x in range(1, n + 1) if j - degree(x) >= 0)
    return a


def word_counts(A: Automaton, D: int) -> list:
    """Accepted words per degree 0..D, by dynamic programming over
    (state, degree)."""
    if not A.deterministic:
        A = determinize(A)
    cur = [dict() for _ in range(D + 1)]
    cur[0][A.initial] = 1
    for j in range(D + 1):
        for q, cnt in cur[j].items():
            for x in range(1, A.n + 1):
                j2 = j + degree(x)
                if j2 > D:
                    continue
                for b in A.step(q, x):
                    cur[j2][b] = cur[j2].get(b, 0) + cnt
    return [sum(c for q, c in cur[j].items() if q in A.accepting) for j in range(D + 1)]


def brute_word_counts(A: Automaton, D: int) -> list:
    """Word counts by listing every word of degree <= D (test oracle)."""
    out = [0] * (D + 1)

    def rec(word, d):
        if A.accepts(word):
            out[d] += 1
        for x in range(1, A.n + 1):
            if d + degree(x) <= D:
                rec(word + (x,), d + degree(x))

    rec((), 0)
    return out


@dataclass(frozen=True)
class AlphaEnclosure:
    lo: Fraction
    hi: Fraction
    degree: int

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


def alpha_enumerated(lang, n: int, tail_eps) -> AlphaEnclosure:
    """(1/8) sum_{w in L} 2^-d(w) from the words of degree <= D, plus the
    exact mass of all longer words over the alphabet as the tail bound.

    lang is an Automaton (counted by DP) or a predicate on letter tuples
    (words listed depth first)."""
    tail_eps = Fraction(tail_eps)
    if tail_eps <= 0:
        raise ValueError("tail_eps must be positive")
    total = all_words_value(n)
    D = 0
    while True:
        counts = all_word_counts(n, D)
        partial_all = sum(Fraction(c, 2 ** j) for j, c in enumerate(counts))
        tail = (total - partial_all) / 8
        if tail <= tail_eps:
            break
        D += 1
    if isinstance(lang, Automaton):
        if lang.n != n:
            raise ValueError("automaton alphabet differs from n")
        acc = word_counts(lang, D)
    else:
        acc = [0] * (D + 1)

        def rec(word, d):
            if lang(word):
                acc[d] += 1
            for x in range(1, n + 1):
                if d + degree(x) <= D:
                    rec(word + (x,), d + degree(x))

        rec((), 0)
    lo = sum(Fraction(c, 2 ** j) for j, c in enumerate(acc)) / 8
    return AlphaEnclosure(lo, lo + tail, D)


def balanced_predicate(r: int, s: int):
    """Words over {x_r, x_s} with as many x_r as x_s."""

    def pred(word):
        return all(x in (r, s) for x in word) and word.count(r) == word.count(s)

    return pred


def balanced_alpha(r: int, s: int, precision) -> AlphaEnclosure:
    """(1/8) sum_l C(2l, l) 2^-(r+s+2) l with a ratio-test tail.

    Consecutive terms have ratio (2l+1)(2l+2)/(l+1)^2 2^-(t+2) <= 2^-t for
    t = r + s, so the tail after term L is at most term_L q/(1-q), q = 2^-t.
    """
    if not 1 <= r < s:
        raise ValueError("need 1 <= r < s")
    precision = Fraction(precision)
    t = r + s
    q = Fraction(1, 2 ** t)
    step = Fraction(1, 2 ** (t + 2))
    l = 0
    term = Fraction(1)
    partial = Fraction(0)
    while True:
        partial += term
        tail = term * q / (1 - q)
        if tail / 8 <= precision:
            return AlphaEnclosure(partial / 8, (partial + tail) / 8, l)
        l += 1
        term = comb(2 * l, l) * step ** l


def balanced_closed_form_square(r: int, s: int) -> Fraction:
    """v^2 for v = (1/8) sqrt(2^t / (2^t - 1)), t = r + s."""
    t = r + s
    return Fraction(2 ** t, 64 * (2 ** t - 1))


def encloses_sqrt(enc: AlphaEnclosure, square: Fraction) -> bool:
    """Whether the positive square root of square lies in enc (exact)."""
    return enc.lo >= 0 and enc.lo ** 2 <= square <= enc.hi ** 2
