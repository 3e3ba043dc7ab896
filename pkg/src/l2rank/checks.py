"""Named invariant suites run by `l2rank check` and by the test-suite.

Each suite returns a SuiteResult; failures keep a small counterexample
description so the CLI can dump it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .betti import coverage_profile, macci_count_check, macci_sum, macci_sum_certificate, macci_sum_printed
from .crossed import CrossedElement
from .dynamics import Space
from .exactla import QMatrix, block_diag, rank, rank_ratfunc
from .genexpr import evaluate, random_expr
from .polys import Poly, RatFunc
from .scheme import compress, enumerate_windows, lamplighter_half, lamplighter_n, odometer_level


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    def record(self, ok, what):
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(what)

    @property
    def ok(self):
        return self.failed == 0

    def to_json(self):
        return {
            "suite": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "ok": self.ok,
            "counterexamples": self.failures,
            "notes": self.notes,
        }


def parse_range(text: str):
    """'2..8' -> [2..8], '3' -> [3], '2,5' -> [2, 5]."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",") if x]


# ------------------------------------------------------------------ m-acci


def macci_suite(ms=range(2, 9), lmax=15, K=200) -> SuiteResult:
    """Exhaustive counts, then certified partial sums against the exact sum."""
    res = SuiteResult("macci")
    for m in ms:
        for l in range(lmax + 1):
            res.record(macci_count_check(m, l), {"m": m, "l": l, "check": "count"})
        cert = macci_sum_certificate(m, K)
        res.record(cert.ok, {"m": m, "check": "sum", "target": str(cert.target)})
        res.notes[str(m)] = {
            "sum": str(macci_sum(m)),
            "printed_rule": str(macci_sum_printed(m)),
            "printed_rule_enclosed": cert.encloses(macci_sum_printed(m)),
        }
    return res


# ---------------------------------------------------------------- coverage


def coverage_suite(depth=16, odo_levels=3) -> SuiteResult:
    res = SuiteResult("coverage")
    for S in (lamplighter_half(), lamplighter_n(0), lamplighter_n(1)):
        prof = coverage_profile(S, depth)
        for d in range(1, len(prof)):
            res.record(prof[d] >= prof[d - 1], {"scheme": S.name, "depth": d, "check": "monotone"})
        res.record(all(0 <= c <= 1 for c in prof), {"scheme": S.name, "check": "range"})
        small = min(depth, 10)
        _, cov = enumerate_windows(S, small)
        res.record(cov == prof[small], {"scheme": S.name, "depth": small, "check": "profile"})
    half = coverage_profile(lamplighter_half(), depth)
    res.notes["half_uncovered"] = {str(d): float(1 - c) for d, c in enumerate(half) if d >= 3}
    for radices in ((2,), (2, 3), (3, 2, 2)):
        sp = Space("mixed", radices, "periodic")
        for m in range(1, odo_levels + 1):
            S = odometer_level(sp, m)
            wins, cov = enumerate_windows(S, sp.p(m))
            res.record(cov == 1, {"radices": list(radices), "level": m, "coverage": str(cov)})
            res.record(
                all(W.length == sp.p(m) for W in wins),
                {"radices": list(radices), "level": m, "check": "window length"},
            )
    return res


# --------------------------------------------------------------- Sylvester


def _rand_q(rng, r, c, density=0.5):
    ent = {}
    for i in range(r):
        for j in range(c):
            if rng.random() < density:
                ent[(i, j)] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return QMatrix(r, c, ent)


def _low_rank_q(rng, n):
    k = rng.randint(0, n)
    return _rand_q(rng, n, k, 0.7) @ _rand_q(rng, k, n, 0.7) if k else QMatrix.zero(n)


def _rand_poly(rng):
    return Poly(tuple(Fraction(rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))))


def _rand_s(rng, r, c, density=0.5):
    return [
        [RatFunc(_rand_poly(rng)) if rng.random() < density else RatFunc(Poly(())) for _ in range(c)]
        for _ in range(r)
    ]


def _mm(A, B):
    zero = RatFunc(Poly(()))
    out = []
    for row in A:
        new = []
        for j in range(len(B[0]) if B else 0):
            acc = zero
            for a, brow in zip(row, B):
                if a and brow[j]:
                    acc = acc + a * brow[j]
            new.append(acc)
        out.append(new)
    return out


def _low_rank_s(rng, n):
    k = rng.randint(1, n)
    return _mm(_rand_s(rng, n, k, 0.7), _rand_s(rng, k, n, 0.7))


def _blocks_s(A, B, C=None):
    zero = RatFunc(Poly(()))
    n, m = len(A), len(B)
    top = [list(A[i]) + (list(C[i]) if C else [zero] * m) for i in range(n)]
    bot = [[zero] * n + list(B[i]) for i in range(m)]
    return top + bot


def sylvester_suite(trials=30, seed=0, n=5) -> SuiteResult:
    """Normalization, submultiplicativity, block additivity and the block
    triangle inequality for the normalized rank over Q and over Q(s)."""
    rng = random.Random(seed)
    res = SuiteResult("sylvester")
    res.record(rank(QMatrix.identity(1)) == 1, {"field": "Q", "axiom": "rk(1) = 1"})
    res.record(rank_ratfunc([[RatFunc(Poly((1,)))]]) == 1, {"field": "Q(s)", "axiom": "rk(1) = 1"})
    for t in range(trials):
        A, B, C = _low_rank_q(rng, n), _low_rank_q(rng, n), _rand_q(rng, n, n)
        ra, rb = rank(A), rank(B)
        res.record(rank(A @ B) <= min(ra, rb), {"field": "Q", "trial": t, "axiom": "product"})
        res.record(rank(block_diag(A, B)) == ra + rb, {"field": "Q", "trial": t, "axiom": "diagonal"})
        T = QMatrix(
            2 * n,
            2 * n,
            {**A.entries, **{(r, c + n): v for (r, c), v in C.entries.items()},
             **{(r + n, c + n): v for (r, c), v in B.entries.items()}},
        )
        res.record(rank(T) >= ra + rb, {"field": "Q", "trial": t, "axiom": "triangle"})
    m = max(2, n - 2)
    for t in range(max(1, trials // 3)):
        A, B, C = _low_rank_s(rng, m), _low_rank_s(rng, m), _rand_s(rng, m, m)
        ra, rb = rank_ratfunc(A), rank_ratfunc(B)
        res.record(rank_ratfunc(_mm(A, B)) <= min(ra, rb), {"field": "Q(s)", "trial": t, "axiom": "product"})
        res.record(rank_ratfunc(_blocks_s(A, B)) == ra + rb, {"field": "Q(s)", "trial": t, "axiom": "diagonal"})
        res.record(rank_ratfunc(_blocks_s(A, B, C)) >= ra + rb, {"field": "Q(s)", "trial": t, "axiom": "triangle"})
    return res


# -------------------------------------------------------------- conventions


def all_schemes():
    out = [lamplighter_half(), lamplighter_n(0), lamplighter_n(1), lamplighter_n(2)]
    for radices in ((2,), (2, 3), (3, 2)):
        sp = Space("mixed", radices, "periodic")
        out += [odometer_level(sp, m) for m in (1, 2)]
    return out


def _lower_shift(n):
    return QMatrix(n, n, {(i, i - 1): Fraction(1) for i in range(1, n)})


def shift_suite(depth=12) -> SuiteResult:
    """compress(chi_{X-E} t) is the full lower shift on every window."""
    res = SuiteResult("shift")
    for S in all_schemes():
        g = CrossedElement.mono(S.not_E(), 1)
        wins, _ = enumerate_windows(S, depth)
        for W in wins:
            res.record(compress(g, W) == _lower_shift(W.length), {"scheme": S.name, "window": repr(W)})
    return res


def homomorphism_suite(count=200, depth=10, seed=0) -> SuiteResult:
    """pi_W(xy) = pi_W(x) pi_W(y) and pi_W(x*) = pi_W(x)^T on generator
    expressions, every window of the given depth."""
    rng = random.Random(seed)
    schemes = [lamplighter_half(), lamplighter_n(0), lamplighter_n(1)]
    wins = {S.name: enumerate_windows(S, depth)[0] for S in schemes}
    res = SuiteResult("homomorphism")
    for t in range(count):
        S = schemes[t % len(schemes)]
        ex, ey = random_expr(rng, len(S.P), 2), random_expr(rng, len(S.P), 2)
        x, y = evaluate(ex, S), evaluate(ey, S)
        xy, xa = x * y, x.adjoint()
        for W in wins[S.name]:
            px = compress(x, W)
            if compress(xy, W) != px @ compress(y, W):
                res.record(False, {"scheme": S.name, "x": repr(ex), "y": repr(ey), "window": repr(W), "identity": "product"})
                break
            if compress(xa, W) != px.T:
                res.record(False, {"scheme": S.name, "x": repr(ex), "window": repr(W), "identity": "adjoint"})
                break
        else:
            res.record(True, None)
    return res


SUITES = {
    "macci": macci_suite,
    "coverage": coverage_suite,
    "sylvester": sylvester_suite,
    "shift": shift_suite,
    "homomorphism": homomorphism_suite,
}
