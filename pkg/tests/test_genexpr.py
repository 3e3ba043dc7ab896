import random
from fractions import Fraction

import pytest

from l2rank.crossed import CrossedElement, CrossedMatrix
from l2rank.dynamics import BINARY, chi
from l2rank.factories import eleven
from l2rank.genexpr import (
    Reject,
    evaluate,
    generator_expr_eval,
    membership_translate,
    parse,
    random_expr,
    to_text,
    translate_element,
)
from l2rank.scheme import lamplighter_half, lamplighter_n


def test_parse_and_eval():
    S = lamplighter_half()
    assert generator_expr_eval("g0'", S) == S.gen(0).adjoint()
    assert generator_expr_eval("adj(g0)", S) == S.gen(0).adjoint()
    e = generator_expr_eval("2*g1 + 1/2 * (g0 * g0')", S)
    assert e == S.gen(1).scale(2) + (S.gen(0) * S.gen(0).adjoint()).scale(Fraction(1, 2))
    assert generator_expr_eval("1", S) == CrossedElement.one(BINARY)


def test_text_roundtrip():
    rng = random.Random(3)
    S = lamplighter_half()
    for _ in range(40):
        e = random_expr(rng, 3)
        assert evaluate(parse(to_text(e)), S) == evaluate(e, S)


def test_bad_expressions():
    S = lamplighter_half()
    with pytest.raises((SyntaxError, ValueError)):
        generator_expr_eval("g0 +", S)
    with pytest.raises(ValueError):
        generator_expr_eval("g7", S)


def test_translate_backward_generator():
    S = lamplighter_half()
    el = CrossedElement.mono(chi("_00"), -1)
    e = translate_element(el, S)
    assert evaluate(e, S) == el


def test_translate_return_set():
    # chi_[_1 1] = chi of T^-1 E is a degree-zero element of the generated algebra
    S = lamplighter_half()
    el = CrossedElement.mono(chi("_11"), 0)
    assert evaluate(translate_element(el, S), S) == el


def test_bare_shift_is_rejected():
    S = lamplighter_half()
    with pytest.raises(Reject):
        membership_translate(CrossedElement.t(BINARY), S)


def test_eleven_is_in_the_generated_algebra():
    S = lamplighter_half()
    A = eleven()
    words = membership_translate(A, S)
    assert set(words) == set(A.entries)
    for key, e in words.items():
        assert evaluate(e, S) == A.entries[key]


def test_random_elements_translate_back():
    rng = random.Random(11)
    for S in (lamplighter_half(), lamplighter_n(1)):
        for _ in range(15):
            el = evaluate(random_expr(rng, len(S.P), 2), S)
            if el.is_zero():
                continue
            out = membership_translate(CrossedMatrix.scalar(el), S)
            assert evaluate(out[(0, 0)], S) == el
