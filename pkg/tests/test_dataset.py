from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rulebases.dataset import (
    Dataset,
    ItemSet,
    Rule,
    confidence,
    equivalent_by_reflexivity,
    lectic_key,
    parse_transactions,
    support,
)

from conftest import datasets, itemsets
import oracles


def test_parse_two_transactions():
    d = parse_transactions(b"a b c\na b\n")
    assert len(d) == 2
    assert d.names == ("a", "b", "c")
    assert d.transactions[1] == d.itemset("ab")


def test_duplicates_collapse():
    d = parse_transactions("a a b\n")
    assert d.transactions == (d.itemset(["a", "b"]),)


def test_blank_lines_skipped():
    d = parse_transactions("a\n   \n\nb\n")
    assert len(d) == 2


@pytest.mark.parametrize("text", ["", "\n \n"])
def test_empty_input_rejected(text):
    with pytest.raises(ValueError, match="no transactions"):
        parse_transactions(text)


def test_numeric_labels_sorted_by_value():
    d = parse_transactions("10 9\n2\n")
    assert d.names == ("2", "9", "10")


def test_example_shape(example):
    assert len(example) == 12
    assert len(set(example.transactions)) == 7


def test_support_of_c_on_example(example):
    assert support(example, example.itemset("C")) >= Fraction(6, 10) * 12


def test_support_rejects_unknown_items(example):
    with pytest.raises(ValueError):
        support(example, ItemSet([40]))


def test_confidence_conventions(example):
    r = example.parse_rule
    assert confidence(example, r("A B -> A")) == 1
    assert confidence(example, r("-> C")) == Fraction(8, 12)
    # AF never occurs
    assert confidence(example, r("A F -> B")) == 1
    assert confidence(example, r("A -> B")) == Fraction(4, 5)


def test_equivalent_by_reflexivity(example):
    r = example.parse_rule
    assert equivalent_by_reflexivity(r("A -> B C"), r("A -> A B C"))
    assert not equivalent_by_reflexivity(r("A -> B C"), r("A B -> C"))


def test_rule_text_round_trip(example):
    for text in ["A C -> B", "-> C", "A ->"]:
        assert example.format_rule(example.parse_rule(text)) == text


def test_parse_rule_unknown_item(example):
    with pytest.raises(ValueError, match="unknown item"):
        example.parse_rule("A -> Z")


def test_lectic_order_puts_subsets_first():
    a, b = ItemSet([0, 2]), ItemSet([1, 2])
    assert sorted([b, a], key=lectic_key) == [a, b]
    assert lectic_key(ItemSet([0])) < lectic_key(ItemSet([0, 1]))


@given(st.sets(st.integers(0, 20)), st.sets(st.integers(0, 20)), st.sets(st.integers(0, 20)))
def test_itemset_algebra_matches_frozenset(a, b, c):
    A, B, C = ItemSet(a), ItemSet(b), ItemSet(c)
    assert set(A | B) == a | b
    assert set(A & B) == a & b
    assert set(A - B) == a - b
    assert (A <= B) == (a <= b)
    assert (A < B) == (a < b)
    assert len(A) == len(a)
    assert list(A) == sorted(a)
    assert (A | B) & C == (A & C) | (B & C)
    assert (A == B) == (a == b)


@given(datasets(), st.data())
def test_support_antitone_and_matches_oracle(d, data):
    x = data.draw(itemsets(d.n_items))
    y = data.draw(itemsets(d.n_items))
    T = oracles.transactions(d)
    assert support(d, x) == oracles.supp(T, frozenset(x))
    assert support(d, x | y) <= support(d, x)


@given(datasets(), st.data())
def test_confidence_invariant_under_reflexivity(d, data):
    x = data.draw(itemsets(d.n_items))
    y = data.draw(itemsets(d.n_items))
    x_part = ItemSet(i for i in x if data.draw(st.booleans()))
    c = confidence(d, Rule(x, y))
    assert c == confidence(d, Rule(x, x | y)) == confidence(d, Rule(x, x_part | y))
    assert 0 <= c <= 1
