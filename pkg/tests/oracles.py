"""Brute-force reference implementations on plain frozensets.

Nothing here imports the package under test, apart from the conversion helpers at the
bottom, which only read transactions and rule sides.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import chain, combinations


def powerset(items):
    items = sorted(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))]


def supp(T, x):
    return sum(1 for t in T if x <= t)


def conf(T, x, y):
    sx = supp(T, x)
    return Fraction(1) if sx == 0 else Fraction(supp(T, x | y), sx)


def close(T, U, x):
    r = frozenset(U)
    for t in T:
        if x <= t:
            r &= t
    return r


def closed_sets(T, U, floor=0):
    return {close(T, U, x) for x in powerset(U) if supp(T, x) >= floor}


def min_generators(T, U, c):
    out = []
    for x in powerset(c):
        if close(T, U, x) == c and all(close(T, U, x - {i}) != c for i in x):
            out.append(x)
    return out


def all_implications(T, U, floor=0):
    """Every X -> Y (disjoint, Y nonempty) with confidence 1 and s(X) >= floor."""
    out = []
    for x in powerset(U):
        if supp(T, x) < floor:
            continue
        for y in powerset(frozenset(U) - x):
            if y and conf(T, x, y) == 1:
                out.append((x, y))
    return out


def imp_closure(imps, x):
    x = set(x)
    changed = True
    while changed:
        changed = False
        for a, b in imps:
            if a <= x and not b <= x:
                x |= b
                changed = True
    return frozenset(x)


def pseudo_closed(U, closure_fn):
    """Pseudo-closed sets of a closure operator, by increasing size."""
    found = []
    for p in sorted(powerset(U), key=len):
        cp = closure_fn(p)
        if cp == p:
            continue
        if all(closure_fn(q) <= p for q in found if q < p):
            found.append(p)
    return {(p, closure_fn(p) - p) for p in found}


def valid_rr(T, U, gamma, floor=1):
    """Representative rules straight from the valid-antecedent definition."""
    subsets = powerset(U)
    s = {x: supp(T, x) for x in subsets}

    def ant(x, y):
        return s[y] >= gamma * s[x]

    out = set()
    for y in subsets:
        if s[y] < floor:
            continue
        for x in powerset(y):
            if x == y or not ant(x, y):
                continue
            if any(ant(x2, y) for x2 in powerset(x) if x2 != x):
                continue
            if any(y < y2 and s[y2] >= floor and ant(x, y2) for y2 in subsets):
                continue
            out.add((x, y - x))
    return out


def basic_bstar(T, U, gamma, floor=1):
    """B* straight from the basic-antecedent definition over closed sets."""
    cs = [c for c in closed_sets(T, U) if supp(T, c) >= floor]
    s = {c: supp(T, c) for c in cs}
    out = set()
    for y in cs:
        for x in cs:
            if not x < y or not s[y] >= gamma * s[x]:
                continue
            if any(x2 < x and s[y] >= gamma * s[x2] for x2 in cs):
                continue
            if any(y < y2 and s[y2] >= gamma * s[x] for y2 in cs):
                continue
            out.add((x, y - x))
    return out


def count_rules(T, U, gamma, tau, singleton=True):
    n = 0
    for x in powerset(U):
        if not x:
            continue
        for y in powerset(frozenset(U) - x):
            if not y or (singleton and len(y) != 1):
                continue
            if supp(T, x | y) >= tau and conf(T, x, y) >= gamma:
                n += 1
    return n


# --- conversion helpers -----------------------------------------------------

def transactions(d):
    return [frozenset(t) for t in d.transactions]


def universe(d):
    return frozenset(range(d.n_items))


def pair(rule):
    return (frozenset(rule.antecedent), frozenset(rule.consequent - rule.antecedent))


def pairs(rules):
    return {pair(r) for r in rules}
