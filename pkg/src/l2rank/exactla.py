"""Exact linear algebra over Q and Q(s): ranks, kernels, and the
connected-component split of sparse matrices."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .polys import Poly, RatFunc, pgcd


class MemoryCapExceeded(RuntimeError):
    """Elimination working set grew beyond L2RANK_MAX_MEM."""


def _mem_cap():
    v = os.environ.get("L2RANK_MAX_MEM")
    if not v:
        return None
    m = re.fullmatch(r"\s*(\d+)\s*([kKmMgG]?)[bB]?\s*", v)
    if not m:
        raise ValueError(f"bad L2RANK_MAX_MEM value {v!r}")
    mult = {"": 1, "k": 1 << 10, "m": 1 << 20, "g": 1 << 30}[m.group(2).lower()]
    return int(m.group(1)) * mult


class QMatrix:
    """Sparse rational matrix stored as {(r, c): value} without zeros."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries=None):
        self.rows, self.cols = int(rows), int(cols)
        ent = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                if not (0 <= r < self.rows and 0 <= c < self.cols):
                    raise IndexError(f"entry ({r},{c}) outside {self.rows}x{self.cols}")
                v = Fraction(v)
                if v:
                    ent[(r, c)] = ent.get((r, c), 0) + v
                    if not ent[(r, c)]:
                        del ent[(r, c)]
        self.entries = ent

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        return cls(n, m, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols=None):
        return cls(rows, rows if cols is None else cols)

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"

    def __eq__(self, other):
        return (
            isinstance(other, QMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    __hash__ = None

    @property
    def T(self):
        return QMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def __add__(self, other):
        e = dict(self.entries)
        for k, v in other.entries.items():
            e[k] = e.get(k, 0) + v
        return QMatrix(self.rows, self.cols, e)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        return QMatrix(self.rows, self.cols, {k: q * v for k, v in self.entries.items()})

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        byrow = {}
        for (r, c), v in other.entries.items():
            byrow.setdefault(r, []).append((c, v))
        out = {}
        for (r, k), v in self.entries.items():
            for c, w in byrow.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + v * w
        return QMatrix(self.rows, other.cols, out)

    def matvec(self, x):
        y = [Fraction(0)] * self.rows
        for (r, c), v in self.entries.items():
            y[r] += v * x[c]
        return y

    def submatrix(self, rows, cols):
        ri = {r: i for i, r in enumerate(rows)}
        ci = {c: j for j, c in enumerate(cols)}
        return QMatrix(
            len(rows),
            len(cols),
            {(ri[r], ci[c]): v for (r, c), v in self.entries.items() if r in ri and c in ci},
        )

    def row_dicts(self):
        rows = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows


def block_diag(*ms):
    n = sum(m.rows for m in ms)
    k = sum(m.cols for m in ms)
    e = {}
    r0 = c0 = 0
    for m in ms:
        for (r, c), v in m.entries.items():
            e[(r0 + r, c0 + c)] = v
        r0 += m.rows
        c0 += m.cols
    return QMatrix(n, k, e)


# ---------------------------------------------------------------- rank over Q


def _int_row(row: dict) -> dict:
    den = lcm(*(v.denominator for v in row.values()))
    return {c: int(v * den) for c, v in row.items()}


def _strip(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    return {c: v // g for c, v in row.items()}


def _eliminate(rows: list, ncols: int, record=None) -> int:
    """Fraction-free elimination on integer row dicts; returns the rank.

    Columns are processed left to right.  Among the rows holding the
    column, the pivot is the entry of smallest bit length, ties by lowest
    row index.  Rows are kept primitive (content stripped) to control
    growth.
    """
    cap = _mem_cap()
    live = {i: r for i, r in enumerate(rows) if r}
    colrows = {}
    for i, r in live.items():
        for c in r:
            colrows.setdefault(c, set()).add(i)
    rank = 0
    work = sum(len(r) for r in live.values())
    for c in sorted(colrows):
        holders = [i for i in colrows.get(c, ()) if i in live and c in live[i]]
        if not holders:
            continue
        p = min(holders, key=lambda i: (abs(live[i][c]).bit_length(), i))
        prow = live.pop(p)
        for cc in prow:
            colrows[cc].discard(p)
        rank += 1
        if record is not None:
            record.append((p, c, prow))
        pv = prow[c]
        for i in holders:
            if i == p:
                continue
            row = live[i]
            a = row[c]
            g = gcd(pv, a)
            mp, ma = pv // g, a // g
            new = {}
            for cc, v in row.items():
                new[cc] = v * mp
            for cc, v in prow.items():
                w = new.get(cc, 0) - ma * v
                if w:
                    new[cc] = w
                else:
                    new.pop(cc, None)
            for cc in row:
                if cc not in new:
                    colrows[cc].discard(i)
            for cc in new:
                if cc not in row:
                    colrows.setdefault(cc, set()).add(i)
            work += len(new) - len(row)
            if new:
                live[i] = _strip(new)
            else:
                del live[i]
                for cc in row:
                    colrows[cc].discard(i)
        if cap is not None:
            est = sum(
                48 + (abs(v).bit_length() >> 3) for r in live.values() for v in r.values()
            ) if work * 48 > cap else work * 48
            if est > cap:
                raise MemoryCapExceeded(f"elimination needs about {est} bytes (cap {cap})")
    return rank


def rank(M: QMatrix) -> int:
    rows = [_int_row(r) for _, r in sorted(M.row_dicts().items())]
    return _eliminate(rows, M.cols)


def kernel_dim(M: QMatrix) -> int:
    return M.cols - rank(M)


# ------------------------------------------------------------- components


@dataclass
class Block:
    rows: list
    cols: list
    matrix: QMatrix

    @property
    def size(self):
        return len(self.cols)


@dataclass
class ComponentSplit:
    blocks: list = field(default_factory=list)
    isolated: list = field(default_factory=list)
    mode: str = "graph"

    @property
    def isolated_count(self):
        return len(self.isolated)

    def kernel_dim(self):
        return sum(kernel_dim(b.matrix) for b in self.blocks) + len(self.isolated)


class _DSU:
    __slots__ = ("p",)

    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            if a < b:
                self.p[b] = a
            else:
                self.p[a] = b


def components(M: QMatrix, mode: str | None = None) -> ComponentSplit:
    """Split M into independent blocks.

    mode "graph" (default for square matrices) identifies row i with
    column i, as in the vertex graph E_A(W): blocks are principal
    submatrices on connected vertex sets and an isolated vertex is an
    empty row and column.  mode "bipartite" connects rows and columns
    through nonzero entries; isolated means an empty column.
    In both modes kernel_dim(M) = sum of block kernels + isolated count.
    """
    if mode is None:
        mode = "graph" if M.rows == M.cols else "bipartite"
    if mode == "graph":
        if M.rows != M.cols:
            raise ValueError("graph components need a square matrix")
        n = M.rows
        d = _DSU(n)
        touched = [False] * n
        for r, c in M.entries:
            d.union(r, c)
            touched[r] = touched[c] = True
        groups = {}
        iso = []
        for v in range(n):
            if touched[v]:
                groups.setdefault(d.find(v), []).append(v)
            else:
                iso.append(v)
        blocks = [Block(vs, vs, M.submatrix(vs, vs)) for vs in groups.values()]
        return ComponentSplit(blocks, iso, "graph")
    if mode != "bipartite":
        raise ValueError(f"unknown mode {mode!r}")
    R = M.rows
    d = _DSU(R + M.cols)
    for r, c in M.entries:
        d.union(r, R + c)
    colset = {c for _, c in M.entries}
    rowset = {r for r, _ in M.entries}
    groups = {}
    for r in sorted(rowset):
        groups.setdefault(d.find(r), ([], []))[0].append(r)
    for c in sorted(colset):
        groups.setdefault(d.find(R + c), ([], []))[1].append(c)
    blocks = [Block(rs, cs, M.submatrix(rs, cs)) for rs, cs in groups.values()]
    iso = [c for c in range(M.cols) if c not in colset]
    return ComponentSplit(blocks, iso, "bipartite")


# ----------------------------------------------------------------- kernels


def rref(M: QMatrix):
    """Reduced row echelon form over Q: (pivot columns, rows as dicts)."""
    rows = [dict(r) for _, r in sorted(M.row_dicts().items())]
    pivots = []
    out = []
    for c in range(M.cols):
        k = None
        for i, r in enumerate(rows):
            if r.get(c):
                if k is None or (abs(r[c].numerator).bit_length(), i) < (abs(rows[k][c].numerator).bit_length(), k):
                    k = i
        if k is None:
            continue
        pr = rows.pop(k)
        inv = 1 / pr[c]
        pr = {cc: v * inv for cc, v in pr.items()}
        for r in rows + out:
            a = r.get(c)
            if a:
                for cc, v in pr.items():
                    w = r.get(cc, 0) - a * v
                    if w:
                        r[cc] = w
                    else:
                        r.pop(cc, None)
        out.append(pr)
        pivots.append(c)
    return pivots, out


def flow_kernel(M: QMatrix):
    """Basis of ker M: one vector per free column."""
    pivots, rows = rref(M)
    pset = set(pivots)
    basis = []
    for f in range(M.cols):
        if f in pset:
            continue
        v = [Fraction(0)] * M.cols
        v[f] = Fraction(1)
        for pc, r in zip(pivots, rows):
            a = r.get(f)
            if a:
                v[pc] = -a
        basis.append(v)
    return basis


# --------------------------------------------------------- rank over Q(s)


def _prim_poly_row(row: dict) -> dict:
    """Divide a row of polynomials by the gcd of its entries."""
    g = None
    for v in row.values():
        g = v if g is None else pgcd(g, v)
        if g.deg == 0:
            break
    out = row
    if g is not None and g.deg > 0:
        out = {c: v.exact_div(g) for c, v in row.items()}
    # rational content
    den = 1
    num = 0
    for v in out.values():
        for a in v.c:
            den = lcm(den, a.denominator)
    for v in out.values():
        for a in v.c:
            num = gcd(num, int(a * den))
    if num and (num != 1 or den != 1):
        s = Fraction(den, num)
        out = {c: v * s for c, v in out.items()}
    return out


def rank_poly_rows(rows: list, ncols: int) -> int:
    """Rank over Q(s) of a matrix given by rows {col: Poly}."""
    cap = _mem_cap()
    live = {i: _prim_poly_row(r) for i, r in enumerate(rows) if r}
    rank = 0
    for c in range(ncols):
        holders = [i for i, r in live.items() if c in r]
        if not holders:
            continue
        p = min(holders, key=lambda i: (live[i][c].size(), i))
        prow = live.pop(p)
        rank += 1
        pv = prow[c]
        for i in holders:
            if i == p:
                continue
            row = live[i]
            a = row[c]
            g = pgcd(pv, a)
            mp, ma = pv.exact_div(g), a.exact_div(g)
            new = {cc: v * mp for cc, v in row.items()}
            for cc, v in prow.items():
                w = new.get(cc, Poly()) - ma * v
                if w:
                    new[cc] = w
                else:
                    new.pop(cc, None)
            if new:
                live[i] = _prim_poly_row(new)
            else:
                del live[i]
        if cap is not None:
            est = sum(64 * (1 + len(v.c)) for r in live.values() for v in r.values())
            if est > cap:
                raise MemoryCapExceeded(f"elimination needs about {est} bytes (cap {cap})")
    return rank


def _as_ratfunc(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc(Poly((x,)))


def rank_ratfunc(M) -> int:
    """Rank over Q(s) of a dense list-of-lists or {(r, c): entry} matrix
    with RatFunc / Poly / rational entries."""
    if isinstance(M, dict):
        rows = {}
        ncols = 0
        for (r, c), v in M.items():
            v = _as_ratfunc(v)
            if v:
                rows.setdefault(r, {})[c] = v
            ncols = max(ncols, c + 1)
        rowlist = [rows[r] for r in sorted(rows)]
    else:
        ncols = max((len(r) for r in M), default=0)
        rowlist = []
        for r in M:
            d = {}
            for c, v in enumerate(r):
                v = _as_ratfunc(v)
                if v:
                    d[c] = v
            rowlist.append(d)
    prows = []
    for r in rowlist:
        if not r:
            continue
        den = Poly((1,))
        for v in r.values():
            den = den * v.den.exact_div(pgcd(den, v.den))
        prows.append({c: v.num * den.exact_div(v.den) for c, v in r.items()})
    return rank_poly_rows(prows, ncols)


# --------------------------------------------------------- MatrixMarket


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def write_matrix_market(M: QMatrix) -> str:
    lines = ["%%MatrixMarket matrix coordinate rational general", f"{M.rows} {M.cols} {len(M.entries)}"]
    for (r, c), v in sorted(M.entries.items()):
        lines.append(f"{r + 1} {c + 1} {_fmt(v)}")
    return "\n".join(lines) + "\n"


def read_matrix_market(text: str) -> QMatrix:
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("%")]
    rows, cols, nnz = (int(x) for x in lines[0].split())
    ent = {}
    for l in lines[1 : 1 + nnz]:
        r, c, v = l.split()
        ent[(int(r) - 1, int(c) - 1)] = Fraction(v)
    return QMatrix(rows, cols, ent)
