import pytest
from hypothesis import given, strategies as st

from qcluster import NotDivisible, QLaurent
from qcluster.qcoeff import ql_bar, ql_eval_one, ql_exact_div, ql_mul

t = QLaurent.monomial(1)  # q^(1/2)

laurents = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(QLaurent)


def test_mul_examples():
    assert ql_mul(1 + t, 1 - t) == 1 - QLaurent.monomial(2)
    assert ql_mul(t, t.bar()) == 1
    assert ql_mul(QLaurent(), 1 + t) == QLaurent()
    assert ql_mul(2 * t, QLaurent({2: 3})) == QLaurent({3: 6})
    assert ql_mul(1 + t, QLaurent(1)) == 1 + t


def test_bar_and_eval():
    assert ql_bar(QLaurent({1: 2, -3: 1})) == QLaurent({-1: 2, 3: 1})
    assert ql_bar(t) == QLaurent.monomial(-1)
    assert ql_bar(QLaurent(1)) == 1
    assert ql_bar(QLaurent({2: 1, -1: 2})) == QLaurent({-2: 1, 1: 2})
    assert ql_eval_one(QLaurent({0: 1, 1: 1, 2: 1})) == 3
    assert ql_eval_one(QLaurent.monomial(-3)) == 1
    assert ql_eval_one(QLaurent({2: 2, -2: -2})) == 0
    assert ql_eval_one(QLaurent({1: 2, -3: 1, 0: -4})) == -1
    assert ql_eval_one(QLaurent()) == 0


def test_canonical_form_drops_zeros():
    a = QLaurent({0: 1, 2: 0})
    assert a.to_pairs() == [[0, 1]]
    assert (1 + t) - t == 1
    assert QLaurent.from_pairs([[1, 1], [0, 1]]).to_pairs() == [[0, 1], [1, 1]]


def test_str():
    assert str(1 + t) == "1 + q^(1/2)"
    assert str(QLaurent({-2: 1, 0: -3, 4: 2})) == "q^-1 - 3 + 2q^2"
    assert str(QLaurent()) == "0"


def test_exact_division():
    assert ql_exact_div(1 - QLaurent.monomial(2), 1 + t) == 1 - t
    assert ql_exact_div(QLaurent({3: 6}), QLaurent({1: 3})) == QLaurent({2: 2})
    assert ql_exact_div(QLaurent(), 1 + t) == QLaurent()
    with pytest.raises(NotDivisible):
        ql_exact_div(QLaurent(1), 1 + t)
    with pytest.raises(NotDivisible):
        ql_exact_div(QLaurent(3), QLaurent(2))
    with pytest.raises(ZeroDivisionError):
        ql_exact_div(QLaurent(1), QLaurent())


def test_units_and_powers():
    assert t.is_unit() and (-t).is_unit()
    assert not QLaurent(2).is_unit()
    assert t ** -2 == QLaurent.monomial(-2)
    assert (1 + t) ** 2 == 1 + 2 * t + QLaurent.monomial(2)
    with pytest.raises(NotDivisible):
        (1 + t) ** -1


@given(laurents, laurents, laurents)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == QLaurent()


@given(laurents, laurents)
def test_bar_is_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a + b).bar() == a.bar() + b.bar()


@given(laurents, laurents)
def test_eval_is_homomorphism(a, b):
    assert (a * b).eval_one() == a.eval_one() * b.eval_one()
    assert (a + b).eval_one() == a.eval_one() + b.eval_one()


@given(laurents, laurents)
def test_division_round_trip(a, b):
    if b:
        assert ql_exact_div(a * b, b) == a


@given(laurents)
def test_pairs_round_trip(a):
    assert QLaurent.from_pairs(a.to_pairs()) == a
    assert hash(QLaurent.from_pairs(a.to_pairs())) == hash(a)
