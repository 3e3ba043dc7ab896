"""Property tests for the algebraic invariants."""

import random
from fractions import Fraction

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from l2rank.betti import betti_enclosure, closed_form_an, macci, macci_count_check
from l2rank.crossed import CrossedElement, CrossedMatrix
from l2rank.dynamics import BINARY, Cylinder, LCFunction, Space, intersect, measure, shift_image, subset
from l2rank.exactla import QMatrix, block_diag, flow_kernel, kernel_dim, rank
from l2rank.factories import an_element
from l2rank.genexpr import evaluate, random_expr
from l2rank.odometer import level_consistency, odo_rank, random_element, realize_at_level, Supernatural, znumber_contains
from l2rank.ratlang import all_words, alpha, alpha_enumerated, complement, random_dfa, union
from l2rank.scheme import compress, enumerate_windows, lamplighter_half, lamplighter_n

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

cylinders = st.dictionaries(st.integers(-4, 4), st.integers(0, 1), max_size=5).map(lambda m: Cylinder(BINARY, m))
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def elements(draw, max_terms=3):
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        j = draw(st.integers(-2, 2))
        f = LCFunction.indicator(draw(cylinders), draw(rationals))
        terms[j] = terms[j] + f if j in terms else f
    return CrossedElement(BINARY, terms)


@st.composite
def qmatrices(draw, rows=None, cols=None):
    r = rows or draw(st.integers(1, 6))
    c = cols or draw(st.integers(1, 6))
    ent = draw(st.dictionaries(st.tuples(st.integers(0, r - 1), st.integers(0, c - 1)), rationals, max_size=r * c))
    return QMatrix(r, c, ent)


# ------------------------------------------------------------- cylinders


@SETTINGS
@given(cylinders, st.integers(-5, 5), st.integers(-5, 5))
def test_shift_composes(C, a, b):
    assert shift_image(shift_image(C, a), b) == shift_image(C, a + b)
    assert measure(shift_image(C, a)) == measure(C)


@SETTINGS
@given(cylinders, cylinders)
def test_intersection_laws(A, B):
    I = intersect(A, B)
    assert (I is None) == (intersect(B, A) is None)
    if I is not None:
        assert I == intersect(B, A)
        assert subset(I, A) and subset(I, B)
        assert measure(I) <= min(measure(A), measure(B))
        assert subset(A, B) == (I == A)


# ------------------------------------------------------------- crossed


@SETTINGS
@given(elements(), elements(), elements())
def test_product_is_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@SETTINGS
@given(elements(), elements())
def test_adjoint_reverses_products(x, y):
    assert (x * y).adjoint() == y.adjoint() * x.adjoint()
    assert x.adjoint().adjoint() == x
    assert (x + y).adjoint() == x.adjoint() + y.adjoint()


@SETTINGS
@given(st.integers(0, 10 ** 6), st.sampled_from(["half", "a1"]))
def test_compression_is_a_star_homomorphism(seed, name):
    rng = random.Random(seed)
    S = lamplighter_half() if name == "half" else lamplighter_n(1)
    x = evaluate(random_expr(rng, len(S.P), 2), S)
    y = evaluate(random_expr(rng, len(S.P), 2), S)
    wins, _ = enumerate_windows(S, 7)
    for W in wins[-6:]:
        px, py = compress(x, W), compress(y, W)
        assert compress(x * y, W) == px @ py
        assert compress(x.adjoint(), W) == px.T
        assert compress(x + y, W) == px + py


# ----------------------------------------------------------- linear algebra


@SETTINGS
@given(qmatrices())
def test_rank_nullity(M):
    r = rank(M)
    assert r == rank(M.T) <= min(M.rows, M.cols)
    assert kernel_dim(M) == M.cols - r
    for v in flow_kernel(M):
        assert all(x == 0 for x in M.matvec(v))


@SETTINGS
@given(qmatrices(rows=4, cols=4), qmatrices(rows=4, cols=4), qmatrices(rows=4, cols=4))
def test_sylvester_axioms(A, B, C):
    ra, rb = rank(A), rank(B)
    assert rank(A @ B) <= min(ra, rb)
    assert rank(block_diag(A, B)) == ra + rb
    T = QMatrix(8, 8, {**A.entries, **{(r, c + 4): v for (r, c), v in C.entries.items()},
                       **{(r + 4, c + 4): v for (r, c), v in B.entries.items()}})
    assert rank(T) >= ra + rb
    assert rank(A + B) <= ra + rb


# ---------------------------------------------------------------- betti


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2), st.integers(1, 18))
def test_an_enclosure_is_sound(n, D):
    S, A = an_element(n)
    r = betti_enclosure(S, A, max_depth=D)
    assert r.lo <= closed_form_an(n) <= r.hi
    assert r.hi - r.lo <= 1 - r.coverage


@settings(max_examples=15, deadline=None)
@given(st.dictionaries(st.integers(-1, 1), st.integers(0, 1), max_size=3), st.integers(2, 10))
def test_projection_enclosure_is_sound(cons, D):
    # coordinates -1..1 are fixed by every window, so the projection compresses
    C = Cylinder(BINARY, cons)
    A = CrossedMatrix.scalar(CrossedElement.mono(LCFunction.indicator(C), 0))
    r = betti_enclosure(lamplighter_half(), A, max_depth=D)
    assert r.lo <= 1 - measure(C) <= r.hi


# -------------------------------------------------------------- odometer


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 3), (2, 2), (3,)]), st.integers(1, 2))
def test_odometer_levels_agree(seed, radices, m):
    sp = Space("mixed", radices, "periodic")
    rng = random.Random(seed)
    a = random_element(rng, sp, m, size=rng.randint(1, 2))
    assert level_consistency(a, m)
    r = odo_rank(a, m)
    assert 0 <= r <= a.size
    assert znumber_contains(Supernatural.of(sp), r)
    b = random_element(rng, sp, m, size=a.size)
    assert realize_at_level(a * b, m) == realize_at_level(a, m) @ realize_at_level(b, m)


# ------------------------------------------------------------ languages


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 5))
def test_alpha_is_additive_and_enumerable(seed, n, states):
    A = random_dfa(random.Random(seed), n, states)
    a = alpha(A)
    assert 0 <= a <= alpha(all_words(n))
    assert a + alpha(complement(A)) == alpha(all_words(n))
    assert alpha(union(A, A)) == a
    assert alpha_enumerated(A, n, Fraction(1, 10 ** 6)).contains(a)


# ---------------------------------------------------------------- m-acci


@SETTINGS
@given(st.integers(2, 7), st.integers(0, 12))
def test_macci_recurrence_and_counts(m, l):
    k = l + m + 1
    assert macci(m, k) == sum(macci(m, k - i) for i in range(1, m + 1))
    assert macci_count_check(m, l)
