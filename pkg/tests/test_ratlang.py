import json
import random
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest

from l2rank.ratlang import (
    Automaton,
    all_word_counts,
    all_words,
    alpha,
    alpha_enumerated,
    balanced_alpha,
    balanced_closed_form_square,
    balanced_predicate,
    brute_word_counts,
    complement,
    determinize,
    empty_language,
    encloses_sqrt,
    epsilon_language,
    gen_function,
    intersection,
    minimized,
    random_dfa,
    star_of_letter,
    union,
    word_counts,
)


def test_generating_functions():
    assert gen_function(epsilon_language(1)).series(4) == [1, 0, 0, 0]
    assert gen_function(star_of_letter(1, 1)).series(6) == [1, 0, 1, 0, 1, 0]
    s = gen_function(all_words(2)).series(20)
    assert s[:4] == [1, 0, 1, 1]
    assert all(s[j] == s[j - 2] + s[j - 3] for j in range(3, 20))


def test_alpha_values():
    assert alpha(epsilon_language(1)) == Fraction(1, 8)
    assert alpha(star_of_letter(1, 1)) == Fraction(1, 6)
    assert alpha(all_words(2)) == Fraction(1, 5)
    assert alpha(empty_language(3)) == 0


def test_enumeration_checks_alpha():
    e = alpha_enumerated(all_words(2), 2, Fraction(1, 10 ** 6))
    assert e.contains(Fraction(1, 5)) and e.width <= Fraction(1, 10 ** 6)
    e = alpha_enumerated(empty_language(2), 2, Fraction(1, 10 ** 6))
    assert e.lo == 0 and e.hi <= Fraction(1, 10 ** 6)


def test_nondeterministic_input():
    # two paths for the same word must not double count
    A = Automaton(1, 3, 0, {1, 2}, ((0, 1, 1), (0, 1, 2)))
    assert alpha(A) == Fraction(1, 32)
    assert determinize(A).deterministic


def test_json_roundtrip(tmp_path):
    A = random_dfa(random.Random(1), 3, 4)
    p = tmp_path / "a.json"
    p.write_text(json.dumps(A.to_json()))
    B = Automaton.load(str(p))
    assert B == A and alpha(B) == alpha(A)
    with pytest.raises(ValueError):
        Automaton.from_json({"states": 1, "transitions": [[0, 4, 0]]}, 3)


@pytest.mark.parametrize("seed", range(10))
def test_random_dfas(seed):
    rng = random.Random(seed)
    A = random_dfa(rng, rng.choice([2, 3]), rng.randint(1, 6))
    a = alpha(A)
    assert gen_function(A).series(13) == brute_word_counts(A, 12) == word_counts(A, 12)
    assert alpha_enumerated(A, A.n, Fraction(1, 10 ** 8)).contains(a)
    B = random_dfa(rng, A.n, 3)
    assert alpha(union(A, complement(A))) == alpha(all_words(A.n))
    assert alpha(intersection(A, B)) + alpha(intersection(A, complement(B))) == a
    assert alpha(union(A, B)) == a + alpha(B) - alpha(intersection(A, B))
    assert alpha(minimized(A)) == a


def test_all_word_counts():
    assert all_word_counts(2, 10) == brute_word_counts(all_words(2), 10)


def _sqrt_decimal(q, digits=30):
    getcontext().prec = digits
    return Decimal(q.numerator) / Decimal(q.denominator)


def test_balanced_values():
    sq = balanced_closed_form_square(1, 2)
    assert sq == Fraction(1, 16) * Fraction(2, 7)
    enc = balanced_alpha(1, 2, Fraction(1, 10 ** 8))
    assert enc.width <= Fraction(1, 10 ** 8)
    assert encloses_sqrt(enc, sq)
    root = _sqrt_decimal(sq).sqrt()
    assert str(root).startswith("0.1336306209")
    assert Decimal(enc.lo.numerator) / enc.lo.denominator <= root <= Decimal(enc.hi.numerator) / enc.hi.denominator
    assert encloses_sqrt(balanced_alpha(1, 3, Fraction(1, 10 ** 8)), Fraction(1, 64) * Fraction(16, 15))


def test_balanced_first_term_and_enumeration():
    enc = balanced_alpha(1, 2, Fraction(1, 10 ** 6))
    assert enc.lo >= Fraction(1, 8)
    e = alpha_enumerated(balanced_predicate(1, 2), 2, Fraction(1, 10 ** 5))
    assert e.lo <= enc.hi and enc.lo <= e.hi
