from fractions import Fraction

import pytest

from l2rank.dynamics import (
    BINARY,
    Cylinder,
    LCFunction,
    NeedsRefinement,
    NonConstant,
    Space,
    chi,
    cylinder_from_json,
    intersect,
    lc_eval_on,
    measure,
    parse_cylinder,
    prefix_cylinder,
    prefix_from_index,
    prefix_index,
    refine_to_prefix,
    shift_image,
    subset,
)


def test_shift_moves_constraints_left():
    # T(x)_i = x_{i+1}: the image of [0 _0] under T^-1 is [_0 0]
    C = parse_cylinder("0_0")
    assert shift_image(C, -1) == parse_cylinder("_00")
    assert shift_image(shift_image(C, 3), -3) == C


def test_shift_by_zero_is_identity():
    C = parse_cylinder("1*_01")
    assert shift_image(C, 0) is C


def test_odometer_shift_is_addition_with_carry():
    sp = Space("mixed", (2, 3), "periodic")
    C = prefix_cylinder(sp, [1, 2])  # index 1 + 2*2 = 5
    assert prefix_index(C) == 5
    # 5 + 1 = 6 = 0 mod p_2
    assert shift_image(C, 1) == prefix_cylinder(sp, [0, 0])
    assert shift_image(prefix_cylinder(sp, [1, 0]), 1) == prefix_cylinder(sp, [0, 1])


def test_odometer_shift_needs_full_prefix():
    sp = Space("mixed", (2, 3), "periodic")
    with pytest.raises(NeedsRefinement):
        shift_image(Cylinder(sp, {2: 1}), 1)


@pytest.mark.parametrize(
    "C, mu",
    [
        (parse_cylinder("1_11"), Fraction(1, 8)),
        (Cylinder(BINARY, {}), Fraction(1)),
        (prefix_cylinder(Space("mixed", (2, 3)), [0, 2]), Fraction(1, 6)),
    ],
)
def test_measure(C, mu):
    assert measure(C) == mu


def test_subset_and_intersect():
    assert subset(parse_cylinder("_00"), parse_cylinder("_0"))
    assert intersect(parse_cylinder("_0"), parse_cylinder("_1")) is None
    assert not subset(parse_cylinder("1_1011"), parse_cylinder("_0"))
    assert intersect(parse_cylinder("1_*"), parse_cylinder("_0")) == parse_cylinder("1_0")


def test_eval_on():
    assert lc_eval_on(chi("_0"), parse_cylinder("_01")) == 1
    assert lc_eval_on(chi("_0"), parse_cylinder("1_11")) == 0
    with pytest.raises(NonConstant):
        lc_eval_on(chi("_0") - chi("_1"), parse_cylinder("1_*"))
    # chi_[_0] + chi_[_1] is the constant 1 even where x_0 is free
    assert lc_eval_on(chi("_0") + chi("_1"), parse_cylinder("1_*")) == 1


def test_notation_roundtrip():
    for text in ("1_10", "_00", "0_0", "_1*1", "11_1"):
        C = parse_cylinder(text)
        assert parse_cylinder(C.notation()) == C


def test_json_roundtrip():
    sp = Space("mixed", (2, 3), "periodic")
    for C in (parse_cylinder("1_10"), prefix_cylinder(sp, [1, 2])):
        assert cylinder_from_json(C.to_json(), C.space) == C


def test_radix_continuation():
    per = Space("mixed", (2, 3), "periodic")
    con = Space("mixed", (2, 3), "constant")
    assert [per.radix(i) for i in range(1, 6)] == [2, 3, 2, 3, 2]
    assert [con.radix(i) for i in range(1, 6)] == [2, 3, 3, 3, 3]
    assert per.p(4) == 36 and con.p(4) == 54


def test_prefix_index_roundtrip():
    sp = Space("mixed", (2, 3, 2), "periodic")
    for l in range(sp.p(3)):
        assert prefix_index(prefix_from_index(sp, l, 3)) == l


def test_refine_to_prefix_partitions():
    sp = Space("mixed", (2, 3), "periodic")
    pieces = refine_to_prefix(Cylinder(sp, {2: 1}), 2)
    assert len(pieces) == 2
    assert sum(measure(P) for P in pieces) == Fraction(1, 3)


def test_bad_symbol_rejected():
    with pytest.raises(ValueError):
        Cylinder(Space("mixed", (2, 3)), {2: 3})
    with pytest.raises(ValueError):
        parse_cylinder("_2")


def test_function_products_and_integral():
    f = chi("_0").scale(3) + chi("_01")
    g = chi("_*1")
    assert (f * g).integral() == Fraction(3, 4) + Fraction(1, 4)
    assert LCFunction.const(BINARY, 2).integral() == 2
    assert (chi("_0") + chi("_1") - LCFunction.const(BINARY)).is_zero()
