import random

import pytest
from hypothesis import given, settings, strategies as st

from rulebases.closure import close, enumerate_closures
from rulebases.dataset import Dataset, ItemSet, Rule, confidence
from rulebases.implications import ImplicationSet, gd_basis, implies, iteration_free_basis, logical_closure

from conftest import datasets, random_dataset
import oracles

SIX = {"A C -> B", "B C -> A", "A D -> B", "B D -> A", "C F -> D", "D F -> C"}


def texts(d, rules):
    return {d.format_rule(r) for r in rules}


def test_logical_closure_basics():
    a, b, c = ItemSet([0]), ItemSet([1]), ItemSet([2])
    assert logical_closure(ImplicationSet(), a | c) == a | c
    B = ImplicationSet([Rule(a, b), Rule(b, c)])
    assert logical_closure(B, a) == a | b | c


def test_example_bases(example):
    L = enumerate_closures(example, 1)
    assert texts(example, iteration_free_basis(L, example)) == SIX
    gd = gd_basis(L, example)
    assert texts(example, gd) == SIX
    assert example.itemset("B") <= logical_closure(gd, example.itemset("AC"))
    assert gd.to_text(example).splitlines()[0] == "A C => B"


def test_full_lattice_adds_vacuous_implications(example):
    L = enumerate_closures(example, 0)
    gd = texts(example, gd_basis(L, example))
    assert SIX < gd
    assert "A F -> B C D" in gd


def test_no_implications():
    rows = [ItemSet(), ItemSet([0]), ItemSet([1]), ItemSet([0, 1])]
    d = Dataset(["a", "b"], rows)
    L = enumerate_closures(d, 1)
    assert len(iteration_free_basis(L, d)) == 0
    assert len(gd_basis(L, d)) == 0


def test_implies_simple():
    a, b, c = ItemSet([0]), ItemSet([1]), ItemSet([2])
    B = ImplicationSet([Rule(a, b)])
    assert implies(B, Rule(a | c, b))
    assert implies(ImplicationSet(), Rule(a, a))
    assert not implies(B, Rule(b, a))


def test_unknown_method(example):
    with pytest.raises(ValueError):
        gd_basis(enumerate_closures(example, 1), example, method="nope")


@settings(max_examples=80)
@given(datasets(max_items=6, max_rows=12), st.integers(0, 3))
def test_bases_generate_the_implication_theory(d, floor):
    L = enumerate_closures(d, floor)
    T, U = oracles.transactions(d), oracles.universe(d)
    itf = iteration_free_basis(L, d)
    gd = gd_basis(L, d)
    assert itf.holds_in(d) and gd.holds_in(d)
    assert len(gd) <= len(itf)
    for r in itf:
        assert implies(gd, r)
    for r in gd:
        assert implies(itf, r)
    # every confidence-1 rule with a frequent antecedent follows
    for x, y in oracles.all_implications(T, U, floor):
        assert implies(gd, Rule(ItemSet(x), ItemSet(y)))
    if floor == 0:
        for x in oracles.powerset(U):
            assert logical_closure(gd, ItemSet(x)) == close(d, ItemSet(x))


@settings(max_examples=80)
@given(datasets(max_items=6, max_rows=12), st.integers(0, 3))
def test_gd_equals_pseudo_closed_oracle(d, floor):
    L = enumerate_closures(d, floor)
    itf = [(frozenset(r.antecedent), frozenset(r.full)) for r in iteration_free_basis(L, d)]
    expected = oracles.pseudo_closed(oracles.universe(d), lambda x: oracles.imp_closure(itf, x))
    assert oracles.pairs(gd_basis(L, d)) == expected
    assert oracles.pairs(gd_basis(L, d, method="lectic")) == expected


@settings(max_examples=60)
@given(datasets(max_items=6, max_rows=12))
def test_gd_antecedents_are_pseudo_closed(d):
    L = enumerate_closures(d, 0)
    gd = list(gd_basis(L, d))
    for r in gd:
        p = r.antecedent
        assert close(d, p) != p
        for q in gd:
            if q.antecedent < p:
                assert close(d, q.antecedent) <= p


def test_larger_random_dataset_agrees_with_confidence():
    rng = random.Random(3)
    d = random_dataset(rng, 10, 40, 0.5)
    L = enumerate_closures(d, 0)
    gd = gd_basis(L, d)
    for _ in range(400):
        x = ItemSet(i for i in range(10) if rng.random() < 0.3)
        y = ItemSet(i for i in range(10) if rng.random() < 0.3)
        assert implies(gd, Rule(x, y)) == (confidence(d, Rule(x, y)) == 1)
