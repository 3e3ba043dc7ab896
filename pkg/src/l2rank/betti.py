"""Betti numbers b(A) = k - rk(A) as certified enclosures.

The window sum runs over the quasi-partition of a scheme: each window W
contributes mu(W) * dim ker pi(A)_W and the uncovered mass (1 - coverage)
is charged the trivial bound k per unit.  Closed forms for the explicit
elements and the m-acci identities live here as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from itertools import product

from .crossed import CrossedElement, CrossedMatrix
from .dynamics import LCFunction, NonConstant, shift_image
from .exactla import QMatrix, kernel_dim
from .factories import PolySpec
from .scheme import Scheme, compress, enumerate_windows


def decimal_str(q: Fraction, digits: int = 15) -> str:
    """Truncated decimal expansion of an exact rational."""
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole = q.numerator // q.denominator
    frac = (q - whole) * 10 ** digits
    return f"{sign}{whole}.{int(frac):0{digits}d}"


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(self.lo + other.lo, self.hi + other.hi)
        return Enclosure(self.lo + other, self.hi + other)

    def scale(self, q):
        q = Fraction(q)
        a, b = self.lo * q, self.hi * q
        return Enclosure(min(a, b), max(a, b))

    def __repr__(self):
        return f"[{decimal_str(self.lo, 12)}, {decimal_str(self.hi, 12)}]"


# ------------------------------------------------------------ closed forms


def closed_form_an(n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(3, 1 + 2 ** (2 * n + 3))


def exponent_increments_ok(spec: PolySpec) -> bool:
    """e(k+1) - e(k) >= 1 for all k >= 1.

    p_0 has non-negative coefficients and linear coefficient >= 1, so
    p_0(k+1) - p_0(k) >= 1; every p_i(k) d_i^k is non-decreasing because
    p_i has non-negative coefficients and d_i >= 2.
    """
    p0 = spec.polys[0]
    return (
        len(p0) >= 2
        and p0[1] >= 1
        and all(a >= 0 for p in spec.polys for a in p)
        and all(d >= 1 for d in spec.bases)
    )


def series_enclosure(spec: PolySpec, eps) -> Enclosure:
    """Sum over k >= 1 of 2^-e(k) with e(k) = p_0(k) + sum p_i(k) d_i^k."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not exponent_increments_ok(spec):
        raise ValueError("exponent increments are not provably >= 1")
    s = Fraction(0)
    k = 1
    while True:
        s += Fraction(1, 1 << spec.exponent(k))
        # increments >= 1 give a geometric majorant from k+1 on
        tail = Fraction(2, 1 << spec.exponent(k + 1))
        if tail <= eps:
            return Enclosure(s, s + tail)
        k += 1


def expected_closed_form(template: str, spec=None):
    """(q0, q1, series spec) with b = q0 + q1 * series.  For the general
    template q0 is None: it is measured, see empirical_q0."""
    if template == "eleven":
        return Fraction(55, 8), Fraction(1, 2), PolySpec(((2, 1, 1),))
    if template == "single_poly":
        p = spec.polys[0] if isinstance(spec, PolySpec) else tuple(spec)
        s = PolySpec((p,))
        n = len(p) - 1
        return Fraction(12 * n + 31, 8), Fraction(2 ** p[0], 8), s
    if template == "poly_times_power":
        if not isinstance(spec, PolySpec) or len(spec.polys) != 2:
            raise ValueError("poly_times_power needs PolySpec((x,), p) with one base")
        p = spec.polys[1]
        n = len(p) - 1
        return Fraction(12 * n + 35, 8), Fraction(1, 8), PolySpec(((0, 1), p), spec.bases)
    if template == "general":
        if not isinstance(spec, PolySpec):
            raise ValueError("general template needs a PolySpec")
        return None, Fraction(2 ** spec.polys[0][0], 8), spec
    raise ValueError(f"unknown template {template!r}")


def power_spec(p, d) -> PolySpec:
    """Series spec of poly_times_power: exponent k + p(k) d^k."""
    return PolySpec(((0, 1), tuple(p)), (d,))


def closed_form_enclosure(template, spec=None, eps=Fraction(1, 10 ** 12)) -> Enclosure:
    q0, q1, s = expected_closed_form(template, spec)
    if q0 is None:
        raise ValueError("no closed-form rational part for the general template")
    return series_enclosure(s, eps).scale(q1) + q0


def empirical_q0(enc: Enclosure, q1, series: Enclosure, den: int = 8):
    """Multiples of 1/den compatible with enc - q1 * series."""
    lo = enc.lo - q1 * series.hi
    hi = enc.hi - q1 * series.lo
    a = -((-lo * den).__floor__())  # ceil
    b = (hi * den).__floor__()
    return [Fraction(i, den) for i in range(a, b + 1)]


# ------------------------------------------------------------------ m-acci


class MacciTable:
    """Fib_m(k), memoized."""

    def __init__(self, m: int):
        if m < 2:
            raise ValueError("m must be >= 2")
        self.m = m
        self.vals = [0, 1] + [2 ** (l - 2) for l in range(2, m)]

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("k must be >= 0")
        v, m = self.vals, self.m
        while len(v) <= k:
            v.append(sum(v[-m:]))
        return v[k]


@lru_cache(maxsize=None)
def _table(m):
    return MacciTable(m)


def macci(m: int, k: int) -> int:
    return _table(m)(k)


def macci_count_check(m: int, l: int) -> bool:
    """Binary strings of length l with at most m-1 consecutive ones,
    counted by brute force, against Fib_m(l+2)."""
    bad = "1" * m
    n = sum(1 for bits in product("01", repeat=l) if bad not in "".join(bits))
    return n == macci(m, l + 2)


def macci_sum_printed(m: int) -> Fraction:
    """2^(m-1) (2^(m+1) - 1) / (2^(m+2) + 1), the published summation rule.
    It is the value of the series only for odd m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    return Fraction(2 ** (m - 1) * (2 ** (m + 1) - 1), 2 ** (m + 2) + 1)


def macci_sum(m: int) -> Fraction:
    """Exact value of sum_{k>=1} Fib_m(2k) 4^-k.

    With G(x) = x(1-x)/(1 - 2x + x^(m+1)) the generating function of
    Fib_m, the series is (G(1/2) + G(-1/2))/2.  For odd m this is the
    published rule; for even m the sign of (-1/2)^(m+1) flips and the
    value is 2^(m-1) (2^(m+1) - 2) / (2^(m+2) - 1).
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if m % 2:
        return macci_sum_printed(m)
    return Fraction(2 ** (m - 1) * (2 ** (m + 1) - 2), 2 ** (m + 2) - 1)


def macci_generating_value(m: int, x) -> Fraction:
    x = Fraction(x)
    return x * (1 - x) / (1 - 2 * x + x ** (m + 1))


@dataclass(frozen=True)
class MacciCertificate:
    m: int
    K: int
    partial: Fraction
    tail: Fraction
    target: Fraction

    def encloses(self, value) -> bool:
        return self.partial <= value <= self.partial + self.tail

    @property
    def ok(self):
        return self.encloses(self.target)


def macci_sum_certificate(m: int, K: int = 200) -> MacciCertificate:
    """Partial sum to K terms and a ratio-test bound on the rest.

    Fib_m(n+1) = 2 Fib_m(n) - Fib_m(n-m) gives r_n = 2 - 1/(r_{n-m}...r_{n-1})
    for the ratios r_n = Fib_m(n+1)/Fib_m(n).  If the last m ratios are
    <= R and R^m (2 - R) <= 1, all later ratios stay <= R, so the terms
    shrink at least by q = R^2/4.
    """
    F = _table(m)
    if K < m + 1:
        raise ValueError("K too small for the tail certificate")
    partial = sum((Fraction(F(2 * k), 4 ** k) for k in range(1, K + 1)), Fraction(0))
    n = 2 * K
    R = max(Fraction(F(i + 1), F(i)) for i in range(n - m, n))
    bump = Fraction(1, 10 ** 6)
    while R ** m * (2 - R) > 1:
        R += bump
        bump *= 2
    q = R * R / 4
    if q >= 1:
        raise ArithmeticError("ratio bound does not contract")
    tail = Fraction(F(2 * K), 4 ** K) * q / (1 - q)
    return MacciCertificate(m, K, partial, tail, macci_sum(m))


# ------------------------------------------------------------ graph export


def graph_export(A, W, digits=None) -> str:
    """DOT text of the labeled graph of pi(A)_W.

    Vertex L{level}P{pos} stands for basis vector (level, pos); a nonzero
    off-diagonal entry at (row, col) becomes an edge col -> row labeled by
    its value, and a diagonal entry becomes the vertex attribute weight.
    """
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    M = compress(A, W)
    n = W.length
    lines = ["digraph EA {"]
    for lev in range(A.size):
        for pos in range(n):
            v = lev * n + pos
            w = M.entries.get((v, v))
            attr = f' [weight="{_qtext(w)}"]' if w else ""
            lines.append(f'  "L{lev}P{pos}"{attr};')
    for (r, c), v in sorted(M.entries.items()):
        if r != c:
            lines.append(
                f'  "L{c // n}P{c % n}" -> "L{r // n}P{r % n}" [label="{_qtext(v)}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


def _qtext(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Component:
    vertices: tuple  # (level, pos) pairs
    kernel: int

    @property
    def size(self):
        return len(self.vertices)

    @property
    def levels(self):
        return sorted({l for l, _ in self.vertices})

    @property
    def positions(self):
        return sorted({p for _, p in self.vertices})


def census(A, W):
    """Connected components of E_A(W) with their kernel dimensions.
    Isolated vertices come out as size-1 components of kernel 1."""
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    M = compress(A, W)
    n = W.length
    out = []
    for vs, ent in _split_graph(M.rows, M.entries):
        if ent:
            idx = {v: i for i, v in enumerate(vs)}
            kd = kernel_dim(QMatrix(len(vs), len(vs), {(idx[r], idx[c]): x for (r, c), x in ent}))
        else:
            kd = 1
        out.append(Component(tuple((v // n, v % n) for v in vs), kd))
    return out


def _split_graph(nv, entries):
    """[(sorted vertices, [((r, c), v), ...])] per connected component."""
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r, c in entries:
        a, b = find(r), find(c)
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    groups = {}
    for v in range(nv):
        groups.setdefault(find(v), ([], []))[0].append(v)
    for (r, c), x in entries.items():
        groups[find(r)][1].append(((r, c), x))
    return list(groups.values())


# ---------------------------------------------------------- the window sum


@dataclass
class BettiResult:
    enclosure: Enclosure
    coverage: Fraction
    windows: int
    groups: int
    depth: int

    @property
    def lo(self):
        return self.enclosure.lo

    @property
    def hi(self):
        return self.enclosure.hi


class _Compiled:
    """A as (row, col, power, function id) slots plus the distinct
    coefficient functions, for fast label evaluation."""

    def __init__(self, A: CrossedMatrix):
        self.size = A.size
        self.funcs = []
        fid = {}
        self.slots = []
        for (r, c), el in sorted(A.entries.items()):
            for m, f in sorted(el.terms.items()):
                f = f.collect()
                key = tuple(sorted((C.cons, q) for q, C in f.terms))
                if key not in fid:
                    fid[key] = len(self.funcs)
                    self.funcs.append(f)
                self.slots.append((r, c, m, fid[key]))
        self.fterms = [[(q, C.cons) for q, C in f.terms] for f in self.funcs]
        cs = [p for f in self.funcs for p in f.coords()]
        self.rlo = min(cs, default=0)
        self.mspan = max((abs(m) for _, _, m, _ in self.slots), default=0)
        # a global scale keeps kernels and lets tables hold integers
        self.scale = lcm(1, *(q.denominator for f in self.funcs for q, _ in f.terms))
        self.label_ids = {}
        self.tables = []

    def complete(self, lev, pos, kend, n) -> bool:
        """Whether vertex (lev, pos) has all its edges known when rows are
        written for positions < kend and columns are known below n."""
        if pos >= kend:
            return False
        for r, c, m, _ in self.slots:
            if r == lev and pos - m >= n:
                return False
            if c == lev and 0 <= pos + m and pos + m >= kend:
                return False
        return True

    def label_id(self, vals) -> int:
        i = self.label_ids.get(vals)
        if i is None:
            i = len(self.tables)
            self.label_ids[vals] = i
            self.tables.append(
                [(r, c, m, int(vals[f] * self.scale)) for r, c, m, f in self.slots if vals[f]]
            )
        return i

    def diagnose(self, fmap, p, length) -> str:
        """Name the monomial that is not constant on T^p(W)."""
        from .dynamics import BINARY, Cylinder

        W = Cylinder._raw(BINARY, dict(fmap))
        C = shift_image(W, p)
        for r, c, m, fi in self.slots:
            for q, cyl in self.funcs[fi].terms:
                try:
                    LCFunction.indicator(cyl, q).eval_on(C)
                except NonConstant:
                    return (
                        f"entry ({r},{c}) power {m}: monomial {q}*chi{cyl.notation()} t^{m} "
                        f"not constant on T^{p}(W) for W = {W.notation()} of length {length}"
                    )
        return f"coefficient not constant at position {p} of W = {W.notation()} of length {length}"

    def label(self, fmap, p):
        """Values of all coefficient functions on T^p(W) for the partial
        window fmap, or None when some value is not yet determined."""
        out = []
        for fi, terms in enumerate(self.fterms):
            acc = Fraction(0)
            partial = False
            for q, cons in terms:
                inside = True
                for c, s in cons:
                    v = fmap.get(c + p)
                    if v is None:
                        inside = False
                    elif v != s:
                        break
                else:
                    if inside:
                        acc += q
                    else:
                        partial = True
            if partial:
                from .dynamics import BINARY, Cylinder

                C = Cylinder._raw(BINARY, {c - p: s for c, s in fmap.items()})
                try:
                    acc = self.funcs[fi].eval_on(C)
                except NonConstant:
                    return None
            out.append(acc)
        return tuple(out)


def _components(ents):
    """Connected components of a sparse entry dict {(row, col): v}."""
    parent = {}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for r, c in ents:
        if r not in parent:
            parent[r] = r
        if c not in parent:
            parent[c] = c
        a, b = find(r), find(c)
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
    comps = {}
    for (r, c), v in ents.items():
        comps.setdefault(find(r), []).append((r, c, v))
    return list(comps.values()), parent.keys()


def _block_kernel(es, cache):
    """dim ker of the principal block on the vertices touched by es."""
    vs = sorted({r for r, _, _ in es} | {c for _, c, _ in es})
    idx = {v: i for i, v in enumerate(vs)}
    sig = (len(vs), tuple(sorted((idx[r], idx[c], v) for r, c, v in es)))
    kd = cache.get(sig)
    if kd is None:
        kd = kernel_dim(QMatrix(len(vs), len(vs), {(a, b): v for a, b, v in sig[1]}))
        cache[sig] = kd
    return kd


def _emit(comp, ents, labs, c, lo_pos, hi_pos, L=None):
    """Add the rows of positions lo_pos..hi_pos-1; vertex = pos * k + level."""
    k = comp.size
    tables = comp.tables
    for ip in range(lo_pos, hi_pos):
        for r, cc, m, v in tables[labs[ip - c]]:
            i = ip - m
            if i < 0 or (L is not None and i >= L):
                continue
            key = (ip * k + r, i * k + cc)
            ents[key] = ents.get(key, 0) + v


def _clean(ents):
    return {key: v for key, v in ents.items() if v}


def _transfer(scheme: Scheme, comp: _Compiled, max_depth, coverage_target):
    """Breadth-first window enumeration carrying only what the future can
    still change.

    A state holds the frontier constraints, the labels (coefficient values)
    of the positions whose rows are not yet written, and the residual graph:
    the components of the written rows that can still gain edges.  A
    component whose vertices all sit M positions before the first unwritten
    row (M the largest |power|) is final; its kernel is banked in acc
    (measure-weighted), and states that agree on everything else merge.
    """
    k = comp.size
    M = comp.mspan
    E, P = scheme.E, scheme.P
    slo = scheme.span[0]
    rlo = comp.rlo
    cache = {}
    lo = Fraction(0)
    cov = Fraction(0)
    nwin = 0
    ngroups = 0

    start = dict(E.map)
    lab0 = comp.label(start, 0)
    lab0 = None if lab0 is None else comp.label_id(lab0)
    states = {(tuple(sorted(start.items())), 0, (lab0,), ()): [Fraction(1, 1 << len(start)), 1, Fraction(0)]}
    d = 0
    while True:
        nxt = {}
        for (fr, c, labs, res), (mu, cnt, acc) in states.items():
            fmap = dict(fr)
            f = max(0, c - M)
            m2 = _extend(fmap, E.cons, d + 1)
            if m2 is not None:
                wmap, added = m2
                wl = _resolve(comp, wmap, labs, c, d, strict=True)
                L = d + 1
                ents = dict(res)
                _emit(comp, ents, wl, c, c, L, L)
                ents = _clean(ents)
                comps, touched = _components(ents)
                ker = k * (L - f) - sum(1 for v in touched if v // k >= f)
                ker += sum(_block_kernel(es, cache) for es in comps)
                wmu = mu / (1 << added)
                lo += acc / (1 << added) + wmu * ker
                cov += wmu * L
                nwin += cnt
                ngroups += 1
            for Z in P:
                m2 = _extend(fmap, Z.cons, d + 1)
                if m2 is None:
                    continue
                zmap, added = m2
                zl = _resolve(comp, zmap, labs + (None,), c, d + 1, strict=False)
                u = d + 2
                for i, x in enumerate(zl):
                    if x is None:
                        u = c + i
                        break
                c2 = max(c, u - M)
                f2 = max(0, c2 - M)
                ents = dict(res)
                if c2 > c:
                    _emit(comp, ents, zl, c, c, c2)
                    ents = _clean(ents)
                fk = 0
                keep = []
                comps, touched = _components(ents)
                for es in comps:
                    if max(max(r, cc) for r, cc, _ in es) // k < f2:
                        fk += _block_kernel(es, cache)
                    else:
                        keep.extend(((r, cc), v) for r, cc, v in es)
                if f2 > f:
                    fk += k * (f2 - f) - sum(1 for v in touched if f <= v // k < f2)
                pend = [c + i for i, x in enumerate(zl) if x is None]
                cmin = min([d + 2 + min(slo, rlo)] + [p + rlo for p in pend])
                frz = tuple(sorted((cc, sy) for cc, sy in zmap.items() if cc >= cmin))
                key = (frz, c2, zl[c2 - c:], tuple(sorted(keep)))
                zmu = mu / (1 << added)
                zacc = acc / (1 << added) + zmu * fk
                st = nxt.get(key)
                if st is None:
                    nxt[key] = [zmu, cnt, zacc]
                else:
                    st[0] += zmu
                    st[1] += cnt
                    st[2] += zacc
        if (max_depth is not None and d + 1 > max_depth) or (
            coverage_target is not None and cov >= coverage_target
        ) or not nxt:
            break
        states = nxt
        d += 1

    # bounds for the windows still running through the unexpanded states
    open_lo = Fraction(0)
    open_hi = Fraction(0)
    n = d + 2  # every extension has at least n positions
    for (fr, c, labs, res), (mu, cnt, acc) in nxt.items():
        f = max(0, c - M)
        ents = dict(res)
        # rows with known labels, cut to the columns present in all
        # extensions, still bound the rank from below
        known = 0
        while known < len(labs) and labs[known] is not None:
            known += 1
        kend = c + known
        _emit(comp, ents, labs, c, c, kend, n)
        ents = _clean(ents)
        comps, touched = _components(ents)
        kers = [_block_kernel(es, cache) for es in comps]
        rank_known = len(touched) - sum(kers)
        below = sum(1 for v in touched if v // k < f)
        # a component all of whose vertices are complete (own row written
        # in full, every row that can reach its column written) is a
        # component of every extension
        exact = 0
        for es, kd in zip(comps, kers):
            vs = {r for r, _, _ in es} | {cc for _, cc, _ in es}
            if all(comp.complete(v % k, v // k, kend, n) for v in vs):
                exact += kd
        touched = set(touched)
        for pos in range(f, kend):
            for lev in range(k):
                if pos * k + lev not in touched and comp.complete(lev, pos, kend, n):
                    exact += 1
        open_lo += acc + mu * exact
        open_hi += acc + mu * (below - k * f - rank_known)
    return lo, cov, nwin, ngroups, d, open_lo, open_hi


def _extend(fmap, cons, shift):
    added = 0
    new = None
    for c, s in cons:
        c += shift
        v = fmap.get(c)
        if v is None:
            if new is None:
                new = dict(fmap)
            new[c] = s
            added += 1
        elif v != s:
            return None
    return (new if new is not None else fmap), added


def _resolve(comp, fmap, labels, c, d, strict):
    """Fill the None entries of labels (positions c, c+1, ...) that are now
    determined."""
    out = list(labels)
    for i, x in enumerate(out):
        if x is None:
            p = c + i
            vals = comp.label(fmap, p)
            if vals is None:
                if strict:
                    raise NonConstant(None, comp.diagnose(fmap, p, d + 1))
                continue
            out[i] = comp.label_id(vals)
    return tuple(out)


def _window_kernel(job):
    A, W = job
    return kernel_dim(compress(A, W))


def betti_enclosure(
    scheme: Scheme,
    A,
    max_depth=None,
    coverage_target=None,
    jobs: int = 1,
    lumped=None,
    sharpen: bool = False,
) -> BettiResult:
    """Certified enclosure of b(A) from the windows up to max_depth (or
    until coverage_target).

    lo sums mu(W) dim ker pi(A)_W over the enumerated windows and hi adds
    k (1 - coverage).  With sharpen (transfer engine only) the windows not
    yet closed also count: their banked final components raise lo, and the
    rank of their written rows lowers hi.

    lumped=False forces the plain route: every window is listed and
    compressed on its own.  jobs > 1 spreads that route over processes.
    """
    if isinstance(A, CrossedElement):
        A = CrossedMatrix.scalar(A)
    if max_depth is None and coverage_target is None:
        raise ValueError("need max_depth or coverage_target")
    if coverage_target is not None:
        coverage_target = Fraction(coverage_target)
    if lumped is None:
        lumped = scheme.space.kind == "binary"
    k = A.size
    if not lumped:
        wins, cov = enumerate_windows(scheme, max_depth, coverage_target)
        if jobs and jobs > 1 and len(wins) > 64:
            import multiprocessing as mp

            with mp.Pool(jobs) as pool:
                dims = pool.map(_window_kernel, [(A, W) for W in wins], chunksize=16)
        else:
            dims = [kernel_dim(compress(A, W)) for W in wins]
        lo = Fraction(0)
        for W, dim in zip(wins, dims):
            lo += W.measure * dim
        depth = max((W.depth for W in wins), default=0)
        return BettiResult(Enclosure(lo, lo + k * (1 - cov)), cov, len(wins), len(wins), depth)

    comp = _Compiled(A)
    lo, cov, nwin, ngroups, depth, open_lo, open_hi = _transfer(
        scheme, comp, max_depth, coverage_target
    )
    hi = lo + k * (1 - cov)
    if sharpen:
        hi = min(hi, lo + open_hi + k * (1 - cov))
        lo = lo + open_lo
    return BettiResult(Enclosure(lo, hi), cov, nwin, ngroups, depth)


def coverage_profile(scheme: Scheme, max_depth: int):
    """Coverage sum after each depth 0..max_depth (exact)."""
    out = []
    cov = Fraction(0)
    level = {tuple(sorted(scheme.E.map.items())): Fraction(1, 1 << len(scheme.E.cons))} \
        if scheme.space.kind == "binary" else None
    if level is None:
        wins, _ = enumerate_windows(scheme, max_depth)
        for D in range(max_depth + 1):
            out.append(sum((W.measure * W.length for W in wins if W.depth == D), Fraction(0)))
        acc = []
        s = Fraction(0)
        for v in out:
            s += v
            acc.append(s)
        return acc
    slo = scheme.span[0]
    for d in range(max_depth + 1):
        nxt = {}
        for fr, mu in level.items():
            fmap = dict(fr)
            m2 = _extend(fmap, scheme.E.cons, d + 1)
            if m2 is not None:
                cov += mu / (1 << m2[1]) * (d + 1)
            for Z in scheme.P:
                m2 = _extend(fmap, Z.cons, d + 1)
                if m2 is None:
                    continue
                zmap, added = m2
                frz = tuple(sorted((c, s) for c, s in zmap.items() if c >= d + 2 + slo))
                nxt[frz] = nxt.get(frz, 0) + mu / (1 << added)
        out.append(cov)
        level = nxt
    return out
