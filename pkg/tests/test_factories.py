from fractions import Fraction
from itertools import product

import pytest

from l2rank.dynamics import parse_cylinder
from l2rank.exactla import components, kernel_dim
from l2rank.factories import PolySpec, an_element, eleven, factory, general, parse_poly, poly_times_power, single_poly
from l2rank.scheme import compress, half_window


def census_dims(A, ks):
    cs = components(compress(A, half_window(ks)))
    return len(cs.isolated), sorted(kernel_dim(b.matrix) for b in cs.blocks)


def expected_dims(ks, law):
    return sorted([1, 1] + [2 + (ks[i + 1] == law(ks[i])) for i in range(len(ks) - 1)])


def test_eleven_matches_template():
    assert eleven() == single_poly((2, 1, 1))
    assert factory("single_poly", PolySpec(((2, 1, 1),))) == eleven()


def test_first_term_of_eleven():
    e = eleven().entries[(1, 1)]
    assert e.terms[-1].collect().terms == ((Fraction(-1), parse_cylinder("_00")),)


@pytest.mark.parametrize(
    "A, size",
    [
        (single_poly((2, 1, 1)), 11),
        (single_poly((1, 2, 0, 1)), 14),
        (single_poly((0, 1)), 8),
        (poly_times_power((1, 1), 2), 9),
        (poly_times_power((1, 0, 1), 2), 12),
        (general(PolySpec(((1, 1), (0, 1)), (2,))), 12),
    ],
)
def test_sizes(A, size):
    assert A.size == size


def test_spec_validation():
    with pytest.raises(ValueError):
        PolySpec(((2, 0, 1),))  # linear coefficient of p_0 must be >= 1
    with pytest.raises(ValueError):
        PolySpec(((1, 1), (1, 1)), ())  # missing base
    with pytest.raises(ValueError):
        PolySpec(((1, 1), (1, 1)), (1,))
    with pytest.raises(ValueError):
        poly_times_power((1, 1), 1)
    assert parse_poly("2, 1,1") == (2, 1, 1)
    assert PolySpec(((1, 1), (0, 1)), (2,)).exponent(3) == 4 + 3 * 8


@pytest.mark.parametrize(
    "A, law",
    [
        (eleven(), lambda k: k * k),
        (single_poly((2, 1, 1)), lambda k: k * k),
        # p(k) - k - a_0 for p = 1 + 2x + x^3
        (single_poly((1, 2, 0, 1)), lambda k: k ** 3 + k),
        (poly_times_power((1, 0, 1), 2), lambda k: (1 + k * k) * 2 ** k),
        (poly_times_power((1, 1), 2), lambda k: (1 + k) * 2 ** k),
    ],
    ids=["eleven", "single 2+x+x^2", "single 1+2x+x^3", "power 1+x^2", "power 1+x"],
)
def test_component_laws(A, law):
    s = A.size
    for r in (1, 2):
        for ks in product(range(1, 9), repeat=r):
            iso, dims = census_dims(A, ks)
            assert dims == expected_dims(ks, law), ks
            # measured: isolated count is linear in r and sum k
            assert iso == (s - 3) * r + s + 1 + 3 * sum(ks), ks


def test_eleven_census_formula_three_blocks():
    A = eleven()
    for ks in [(1, 1, 1), (2, 4, 3), (1, 1, 2)]:
        iso, dims = census_dims(A, ks)
        assert iso == 12 + 8 * len(ks) + 3 * sum(ks)
        assert dims == expected_dims(ks, lambda k: k * k)


def test_an_element_shape():
    S, A = an_element(1)
    assert A.size == 1 and S.name == "lamplighter_n(1)"
    assert A == A.adjoint()
