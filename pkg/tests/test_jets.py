from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdecc.jets import (Jet, dim_jet, dim_sym, enumerate_jets, index_digits, indices_of_order,
                        janet_class, jet_key, jet_sort, multiplicative_vars,
                        parse_index_digits, render_jet)


def test_dim_sym_values():
    assert dim_sym(3, 3, 2) == 20
    assert dim_sym(0, 3, 1) == 1
    assert dim_sym(2, 3, 2) == 12


def test_dim_sym_by_enumeration():
    assert dim_sym(2, 3, 2) == 2 * len(list(indices_of_order(2, 3)))


def test_dim_jet_values():
    assert dim_jet(3, 3, 2) == 40
    assert dim_jet(2, 3, 2) == 20
    assert dim_jet(6, 3, 1) == 84


def test_jet_minus_sym_telescopes():
    for n, q in product(range(1, 5), range(1, 11)):
        for m in (1, 2):
            assert dim_jet(q, n, m) - dim_jet(q - 1, n, m) == dim_sym(q, n, m)


def test_janet_class_examples():
    assert janet_class((0, 0, 2)) == 3
    assert janet_class((0, 2, 0)) == 2
    assert janet_class((1, 1, 0)) == 1
    assert multiplicative_vars((0, 0, 2)) == (1, 2, 3)
    assert multiplicative_vars((1, 1, 0)) == (1,)


def test_janet_class_rejects_order_zero():
    with pytest.raises(ValueError):
        janet_class((0, 0, 0))


@given(st.integers(1, 6), st.integers(0, 6))
def test_janet_class_ignores_later_slots(a, b):
    assert janet_class((0, a, b)) == 2


def test_enumerate_counts():
    top = enumerate_jets(1, 3, 2, exact=True)
    assert len(top) == 6
    assert [render_jet("y", j.mu) for j in top] == ["y_33", "y_23", "y_22", "y_13", "y_12", "y_11"]
    assert len(enumerate_jets(2, 3, 1)) == 8
    assert len(enumerate_jets(1, 3, 3)) == 20 == dim_jet(3, 3)


def test_enumerate_strictly_sorted_no_duplicates():
    for m, n, q in [(1, 3, 3), (2, 3, 2), (2, 2, 4), (3, 1, 5)]:
        jets = enumerate_jets(m, n, q)
        keys = [jet_key(j) for j in jets]
        assert keys == sorted(keys)
        assert len(set(jets)) == len(jets)
        assert len(jets) == dim_jet(q, n, m)


def test_ordering_higher_order_first_then_class():
    jets = jet_sort([Jet(0, (1, 0, 0)), Jet(0, (0, 0, 2)), Jet(0, (1, 1, 0)), Jet(0, (0, 1, 1))])
    assert [j.mu for j in jets] == [(0, 0, 2), (0, 1, 1), (1, 1, 0), (1, 0, 0)]


def test_ordering_larger_unknown_first_within_index():
    assert jet_sort([Jet(0, (0, 1)), Jet(1, (0, 1))]) == [Jet(1, (0, 1)), Jet(0, (0, 1))]


def test_digit_syntax():
    assert index_digits((1, 0, 2)) == "133"
    assert parse_index_digits("31", 3) == parse_index_digits("13", 3) == (1, 0, 1)
    assert parse_index_digits("0", 2) == (0, 0)
    assert render_jet("y", (0, 0, 0)) == "y"
    with pytest.raises(IndexError):
        parse_index_digits("4", 3)


@given(st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_digits_round_trip(mu):
    mu = tuple(mu)
    d = index_digits(mu)
    assert parse_index_digits(d or "0", 3) == mu
