import random
from fractions import Fraction

import pytest

from l2rank.crossed import CrossedElement, CrossedMatrix
from l2rank.dynamics import LCFunction, Space, prefix_cylinder
from l2rank.odometer import (
    LaurentMatrix,
    Supernatural,
    diagonal_projection,
    element_level,
    from_level,
    level_consistency,
    matrix_unit,
    odo_rank,
    random_element,
    realize_at_level,
    znumber_contains,
)
from l2rank.polys import Laurent

SP23 = Space("mixed", (2, 3), "periodic")


def test_supernatural_exponents():
    n = Supernatural((2, 3), "periodic")
    assert n.exponent(2) == n.exponent(3) == float("inf")
    assert n.exponent(5) == 0
    c = Supernatural((4, 3), "constant")  # 4 3 3 3 ...
    assert c.exponent(2) == 2 and c.exponent(3) == float("inf")


def test_znumber_membership():
    n = Supernatural((2, 3, 2, 3), "periodic")
    assert znumber_contains(n, Fraction(5, 12))
    assert not znumber_contains(n, Fraction(1, 5))
    assert znumber_contains(Supernatural((7,)), 4)
    assert not znumber_contains(Supernatural((4, 3), "constant"), Fraction(1, 8))


def test_shift_realization():
    sp = Space("mixed", (2,), "periodic")
    t = CrossedElement.t(sp)
    L = realize_at_level(t, 1)
    assert L == LaurentMatrix(2, {(0, 1): Laurent.mono(1), (1, 0): Laurent.mono(0)})
    assert realize_at_level(t * t, 1) == LaurentMatrix(2, {(0, 0): Laurent.mono(1), (1, 1): Laurent.mono(1)})
    assert odo_rank(t) == 1 and level_consistency(t, 1) and level_consistency(t, 3)


def test_realization_is_multiplicative():
    rng = random.Random(2)
    for _ in range(20):
        a = random_element(rng, SP23, 2)
        b = random_element(rng, SP23, 2)
        assert realize_at_level(a * b, 2) == realize_at_level(a, 2) @ realize_at_level(b, 2)
        assert realize_at_level(a.adjoint(), 2) == realize_at_level(a, 2).adjoint()


def test_from_level_inverts_realization():
    rng = random.Random(4)
    for _ in range(10):
        a = random_element(rng, SP23, 2, size=2)
        assert realize_at_level(from_level(realize_at_level(a, 2), SP23, 2, 2), 2) == realize_at_level(a, 2)


@pytest.mark.parametrize("radices", [(2, 3, 2, 3), (2, 2, 2, 2)])
def test_matrix_units_have_rank_one_over_pm(radices):
    sp = Space("mixed", radices, "periodic")
    for m in range(1, 5):
        for i in {0, sp.p(m) - 1, sp.p(m) // 2}:
            assert odo_rank(matrix_unit(sp, m, i, i)) == Fraction(1, sp.p(m))


def test_complement_of_first_digit():
    sp = Space("mixed", (2,), "constant")
    f = LCFunction.const(sp) - LCFunction.indicator(prefix_cylinder(sp, [0]))
    assert odo_rank(CrossedElement.mono(f, 0)) == Fraction(1, 2)


def test_level_embedding_example():
    e = matrix_unit(SP23, 1, 0, 0)
    assert odo_rank(e, 1) == Fraction(1, 2)
    assert realize_at_level(e, 2).rank() == 3
    assert odo_rank(e, 2) == Fraction(1, 2)


def test_level_too_small():
    e = matrix_unit(SP23, 2, 1, 1)
    assert element_level(e) == 2
    with pytest.raises(ValueError, match="m >= 2"):
        realize_at_level(e, 1)


def test_diagonal_projections_realize_all_fractions():
    for radices in ((2, 3), (3, 2, 2)):
        sp = Space("mixed", radices, "periodic")
        for m in range(1, 4):
            p = sp.p(m)
            got = {odo_rank(diagonal_projection(sp, m, a), m) for a in range(p + 1)}
            assert got == {Fraction(a, p) for a in range(p + 1)}


def test_matrix_ranks():
    sp = Space("mixed", (2, 3), "periodic")
    e = matrix_unit(sp, 2, 0, 3)
    A = CrossedMatrix.build(sp, 2, [(0, 1, LCFunction.const(sp), 0), (1, 0, LCFunction.const(sp), 1)])
    assert odo_rank(A) == 2
    B = CrossedMatrix.scalar(e + e.adjoint())
    assert odo_rank(B) == Fraction(2, 6)
