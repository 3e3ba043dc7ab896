import pytest

from l2rank.checks import SUITES, parse_range


def test_parse_range():
    assert parse_range("2..8") == list(range(2, 9))
    assert parse_range("3") == [3]
    assert parse_range("2,5") == [2, 5]


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    kw = {"homomorphism": {"count": 40}, "sylvester": {"trials": 10}, "shift": {"depth": 9}}.get(name, {})
    res = SUITES[name](**kw)
    assert res.ok, res.failures
    assert res.passed > 0
