"""Full-confidence implications: logical closure, iteration-free and GD bases."""
from __future__ import annotations

from typing import Iterable, Iterator

from .closure import ClosureLattice
from .dataset import Dataset, ItemSet, Rule, confidence, rule_key


class ImplicationSet:
    """A list of implications ``X => Y`` kept with disjoint sides."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules: list[Rule] = [r.canonical() for r in rules]

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __contains__(self, r: Rule) -> bool:
        return r.canonical() in self.rules

    def __repr__(self) -> str:
        return f"ImplicationSet({self.rules!r})"

    def closure(self, x: ItemSet) -> ItemSet:
        return logical_closure(self, x)

    def holds_in(self, d: Dataset) -> bool:
        return all(confidence(d, r) == 1 for r in self.rules)

    def sorted(self) -> "ImplicationSet":
        return ImplicationSet(sorted(self.rules, key=rule_key))

    def to_text(self, d: Dataset) -> str:
        return "".join(d.format_rule(r, "=>") + "\n" for r in sorted(self.rules, key=rule_key))


def _closure_mask(pairs: list[tuple[int, int]], x: int) -> int:
    changed = True
    while changed:
        changed = False
        for lhs, rhs in pairs:
            if lhs & ~x == 0 and rhs & ~x:
                x |= rhs
                changed = True
    return x


def logical_closure(B: ImplicationSet | Iterable[Rule], x: ItemSet) -> ItemSet:
    """Smallest superset of ``x`` closed under every implication of ``B``."""
    pairs = [(r.antecedent.mask, r.consequent.mask) for r in B]
    return ItemSet.from_mask(_closure_mask(pairs, x.mask))


def implies(B: ImplicationSet | Iterable[Rule], r: Rule) -> bool:
    return r.consequent <= logical_closure(B, r.antecedent)


def iteration_free_basis(L: ClosureLattice, d: Dataset) -> ImplicationSet:
    """``g => cl(g) - g`` for every minimal generator ``g`` of a non-trivial closure."""
    L.ensure_generators()
    rules = []
    for node in L.nodes:
        for g in node.min_generators:
            if g != node.itemset:
                rules.append(Rule(g, node.itemset - g))
    basis = ImplicationSet(sorted(rules, key=rule_key))
    assert basis.holds_in(d)
    return basis


def gd_basis(L: ClosureLattice, d: Dataset, method: str = "saturate") -> ImplicationSet:
    """Guigues-Duquenne basis of the implications valid at the lattice's support floor.

    ``method="saturate"`` right-saturates the iteration-free basis and then
    left-saturates each clause against the others, dropping clauses whose
    saturated antecedent reaches the consequent. ``method="lectic"`` walks
    the pseudo-closed sets in lectic order; it is exponential in the number
    of items and meant for small universes.
    """
    base = iteration_free_basis(L, d)
    if method == "lectic":
        return _gd_lectic(base, d.universe)
    if method != "saturate":
        raise ValueError(f"unknown method {method!r}")
    clauses = [(r.antecedent.mask, r.full.mask) for r in base]
    # right-saturation
    clauses = [(a, _closure_mask(clauses, a)) for a, _ in clauses]
    k = 0
    while k < len(clauses):
        a, b = clauses.pop(k)
        a = _closure_mask(clauses, a)
        if a != b:
            clauses.insert(k, (a, b))
            k += 1
    rules = [Rule(ItemSet.from_mask(a), ItemSet.from_mask(b & ~a)) for a, b in clauses]
    return ImplicationSet(sorted(rules, key=rule_key))


def _gd_lectic(base: ImplicationSet, universe: ItemSet) -> ImplicationSet:
    theory = [(r.antecedent.mask, r.full.mask) for r in base]
    found: list[tuple[int, int]] = []

    def pseudo_hull(x: int) -> int:
        # close under the found clauses whose premise is a proper subset
        changed = True
        while changed:
            changed = False
            for p, c in found:
                if p & ~x == 0 and p != x and c & ~x:
                    x |= c
                    changed = True
        return x

    n = universe.mask.bit_length()
    top = universe.mask
    a = pseudo_hull(0)
    while True:
        full = _closure_mask(theory, a)
        if full != a:
            found.append((a, full))
        if a == top:
            break
        nxt = None
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if a & bit:
                continue
            low = bit - 1
            b = pseudo_hull((a & low) | bit)
            if b & low == a & low:
                nxt = b
                break
        if nxt is None:
            break
        a = nxt
    rules = [Rule(ItemSet.from_mask(p), ItemSet.from_mask(c & ~p)) for p, c in found]
    return ImplicationSet(sorted(rules, key=rule_key))
