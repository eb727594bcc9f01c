"""Rule bases: representative rules, B*, its variants, and their verifiers."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .closure import ClosureLattice, enumerate_closures
from .dataset import Dataset, ItemSet, Rule, confidence, rule_key, support
from .implications import ImplicationSet, _closure_mask


class Kind(str, enum.Enum):
    RR = "RR"
    Bstar = "Bstar"
    BstarMinMax = "BstarMinMax"
    BstarMinMin = "BstarMinMin"
    GD = "GD"
    IterFree = "IterFree"


def as_fraction(value) -> Fraction:
    """Exact rational from a Fraction, int, or string such as ``"3/4"`` or ``"0.75"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {value!r}") from None


@dataclass
class Basis:
    rules: list[Rule]
    gamma: Fraction
    support_floor: int
    kind: Kind

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def rule_set(self) -> set[Rule]:
        return {r.canonical() for r in self.rules}

    def partial_rules(self, d: Dataset) -> list[Rule]:
        return [r for r in self.rules if confidence(d, r) < 1]

    def to_text(self, d: Dataset, hide_empty_antecedent: bool = False) -> str:
        lines = [f"# {self.kind.value} {self.gamma} {self.support_floor}"]
        for r in sorted(self.rules, key=rule_key):
            if hide_empty_antecedent and not r.antecedent:
                continue
            c = confidence(d, r)
            lines.append(
                f"{d.format_rule(r)} ; supp={support(d, r.full)} "
                f"conf={c.numerator}/{c.denominator} ({float(c):.4f})"
            )
        return "\n".join(lines) + "\n"


def _meets(sy: int, sx: int, gamma: Fraction) -> bool:
    return sy * gamma.denominator >= gamma.numerator * sx


def is_gamma_antecedent(d: Dataset, x: ItemSet, y: ItemSet, gamma) -> bool:
    """``s(y) >= gamma * s(x)`` for ``x <= y``."""
    if not x <= y:
        raise ValueError("antecedent must be a subset of the itemset")
    return _meets(support(d, y), support(d, x), as_fraction(gamma))


def _maximal(masks: Iterable[int]) -> list[int]:
    out: list[int] = []
    for m in sorted(masks, key=lambda m: -m.bit_count()):
        if not any(m & ~o == 0 for o in out):
            out.append(m)
    return out


def _up_targets(L: ClosureLattice, gamma: Fraction) -> dict[int, list[int]]:
    """For each stored closure X, the maximal stored Y >= X with ``s(Y) >= gamma s(X)``."""
    nodes = [(n.itemset.mask, n.support) for n in L.nodes]
    out = {}
    for mx, sx in nodes:
        ups = [my for my, sy in nodes if mx & ~my == 0 and _meets(sy, sx, gamma)]
        out[mx] = _maximal(ups)
    return out


def representative_rules(d: Dataset, L: ClosureLattice, gamma) -> Basis:
    """Rules ``X -> Y - X`` for every valid gamma-antecedent ``X`` of ``Y``.

    Antecedents range over minimal generators and consequents over the
    maximal closures reachable at confidence ``gamma``; supersets beyond
    the lattice's support floor are not considered.
    """
    gamma = as_fraction(gamma)
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    L.ensure_generators()
    targets = _up_targets(L, gamma)
    rules = []
    for node in L.nodes:
        for my in targets[node.itemset.mask]:
            sy = L.nodes[L.index[my]].support
            for g in node.min_generators:
                if g.mask == my:
                    continue
                if all(not _meets(sy, support(d, g.discard(i)), gamma) for i in g):
                    rules.append(Rule(g, ItemSet.from_mask(my & ~g.mask)))
    rules.sort(key=rule_key)
    return Basis(rules, gamma, L.support_floor, Kind.RR)


def bstar(d: Dataset, L: ClosureLattice, gamma) -> Basis:
    """Partial rules ``X -> Y - X`` over closed ``Y`` and basic gamma-antecedents ``X``."""
    gamma = as_fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    targets = _up_targets(L, gamma)
    rules = []
    for node in L.nodes:
        mx = node.itemset.mask
        for my in targets[mx]:
            if my == mx:
                continue
            sy = L.nodes[L.index[my]].support
            # a closed subset that is an antecedent forces a lower cover to be one
            if any(_meets(sy, L.nodes[k].support, gamma) for k in node.lower_covers):
                continue
            rules.append(Rule(node.itemset, ItemSet.from_mask(my & ~mx)))
    rules.sort(key=rule_key)
    return Basis(rules, gamma, L.support_floor, Kind.Bstar)


def _generators_of(L: ClosureLattice, x: ItemSet) -> list[ItemSet]:
    node = L.node_of(x)
    if node is None:
        raise ValueError(f"{x!r} is not a closure stored in the lattice")
    L.ensure_generators()
    return node.min_generators


def minmax_variant(B: Basis, L: ClosureLattice) -> Basis:
    """Replace each antecedent by its lectic-least minimal generator."""
    rules = []
    for r in B.rules:
        g = _generators_of(L, r.antecedent)[0]
        rules.append(Rule(g, r.consequent - r.antecedent))
    rules.sort(key=rule_key)
    return Basis(rules, B.gamma, B.support_floor, Kind.BstarMinMax)


def minmin_variant(B: Basis, L: ClosureLattice) -> Basis:
    """Replace both sides by lectic-least generators of minimum cardinality."""
    def smallest(x: ItemSet) -> ItemSet:
        return min(_generators_of(L, x), key=lambda g: (len(g), g.mask))

    rules = []
    for r in B.rules:
        x, y = r.antecedent, r.full
        rules.append(Rule(smallest(x), smallest(y) - x))
    rules.sort(key=rule_key)
    return Basis(rules, B.gamma, B.support_floor, Kind.BstarMinMin)


def double_support_bstar(d: Dataset, gamma, tau: int, mode: str = "intersect") -> Basis:
    """B* restricted to support ``tau``.

    ``mode="intersect"`` mines closures of support ``ceil(gamma * tau)`` and
    keeps the rules of support at least ``tau``; the result equals the full
    B* filtered by support. ``mode="minimum"`` runs B* on the closures of
    support ``tau``, which gives a minimum-size basis for the rules meeting
    both thresholds.
    """
    gamma = as_fraction(gamma)
    if mode == "minimum":
        return bstar(d, enumerate_closures(d, tau), gamma)
    if mode != "intersect":
        raise ValueError(f"unknown mode {mode!r}")
    floor = math.ceil(gamma * tau)
    base = bstar(d, enumerate_closures(d, floor), gamma)
    rules = [r for r in base.rules if support(d, r.full) >= tau]
    return Basis(rules, gamma, tau, Kind.Bstar)


# --- verification -----------------------------------------------------------

def _support_table(d: Dataset) -> list[int]:
    n = d.n_items
    table = [0] * (1 << n)
    tids = [0] * (1 << n)
    tids[0] = (1 << len(d)) - 1
    table[0] = len(d)
    for m in range(1, 1 << n):
        low = m & -m
        tids[m] = tids[m ^ low] & d.item_tidset(low.bit_length() - 1)
        table[m] = tids[m].bit_count()
    return table


def candidate_rules(d: Dataset, gamma, tau: int, exhaustive_limit: int = 8) -> list[tuple[Rule, Fraction]]:
    """Rules with disjoint sides, nonempty consequent, confidence >= gamma, support >= tau.

    Exhaustive for small universes. Otherwise only ``g -> C - g`` with ``g`` a
    minimal generator and ``C`` closed, which is enough for coverage checks:
    any rule is covered by everything that covers such a candidate.
    """
    gamma = as_fraction(gamma)
    out = []
    if d.n_items <= exhaustive_limit:
        table = _support_table(d)
        full = d.universe.mask
        for x in range(1 << d.n_items):
            sx = table[x]
            rest = full & ~x
            y = rest
            while y:
                sxy = table[x | y]
                if sxy >= tau and _meets(sxy, sx, gamma):
                    c = Fraction(1) if sx == 0 else Fraction(sxy, sx)
                    out.append((Rule(ItemSet.from_mask(x), ItemSet.from_mask(y)), c))
                y = (y - 1) & rest
        return out
    L = enumerate_closures(d, tau)
    L.ensure_generators()
    for node in L.nodes:
        for g in node.min_generators:
            sg = node.support
            for other in L.nodes:
                if node.itemset <= other.itemset and other.itemset != g and _meets(other.support, sg, gamma):
                    c = Fraction(1) if sg == 0 else Fraction(other.support, sg)
                    out.append((Rule(g, other.itemset - g), c))
    return out


@dataclass
class CompletenessReport:
    checked: int
    violators: list[Rule] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violators


class _Coverage:
    """Memoized redundancy tests against a fixed implication set."""

    def __init__(self, mode: str, Bimp: ImplicationSet | None):
        if mode not in ("plain", "closure"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.pairs = [(r.antecedent.mask, r.consequent.mask) for r in (Bimp or ())]
        self.memo: dict[int, int] = {}

    def cl(self, x: int) -> int:
        got = self.memo.get(x)
        if got is None:
            got = _closure_mask(self.pairs, x)
            self.memo[x] = got
        return got

    def implied(self, r: Rule) -> bool:
        return r.consequent.mask & ~self.cl(r.antecedent.mask) == 0

    def redundant(self, r1: Rule, r0: Rule) -> bool:
        x0, full0 = r0.antecedent.mask, r0.full.mask
        x1, full1 = r1.antecedent.mask, r1.full.mask
        if self.mode == "plain":
            return full0 & ~x0 == 0 or (x1 & ~x0 == 0 and full0 & ~full1 == 0)
        c0 = self.cl(x0)
        if full0 & ~c0 == 0:
            return True
        return x1 & ~c0 == 0 and full0 & ~self.cl(full1) == 0


def verify_completeness(
    B: Basis | Iterable[Rule],
    d: Dataset,
    gamma,
    tau: int = 1,
    mode: str = "plain",
    Bimp: ImplicationSet | None = None,
) -> CompletenessReport:
    """Find rules at the thresholds that no basis rule makes redundant.

    In closure mode a rule also counts as covered when ``Bimp`` implies it.
    """
    cov = _Coverage(mode, Bimp)
    basis = list(B)
    report = CompletenessReport(0)
    for r0, _ in candidate_rules(d, gamma, tau):
        report.checked += 1
        if mode == "closure" and cov.implied(r0):
            continue
        if not any(cov.redundant(r1, r0) for r1 in basis):
            report.violators.append(r0)
    return report


@dataclass
class MinimalityReport:
    """Outcome of :func:`verify_minimality`.

    ``smaller_cover_exists`` is None when the exact search ran out of budget,
    in which case only the single-rule irredundancy result is available.
    """

    basis_size: int
    complete: bool
    redundant_rules: list[Rule]
    pool_size: int
    smaller_cover_exists: bool | None

    @property
    def exhaustive(self) -> bool:
        return self.smaller_cover_exists is not None

    @property
    def ok(self) -> bool:
        return self.complete and not self.redundant_rules and not self.smaller_cover_exists


def verify_minimality(
    B: Basis | Iterable[Rule],
    d: Dataset,
    gamma,
    mode: str = "plain",
    Bimp: ImplicationSet | None = None,
    tau: int = 1,
    node_budget: int = 2_000_000,
) -> MinimalityReport:
    """Irredundancy of each rule plus an exact search for a smaller complete basis.

    The rules to cover are the candidates at the thresholds (in closure mode,
    the partial ones not implied by ``Bimp``), and the pool of replacement
    rules is the same set. The search is a branch-and-bound set cover that
    gives up after ``node_budget`` nodes.
    """
    cov = _Coverage(mode, Bimp)
    basis = [r.canonical() for r in B]
    cands = candidate_rules(d, gamma, tau)
    if mode == "closure":
        targets = [r for r, c in cands if c < 1 and not cov.implied(r)]
    else:
        targets = [r for r, _ in cands]
    pool = list(dict.fromkeys(targets + basis))

    def cover_mask(r1: Rule) -> int:
        m = 0
        for k, r0 in enumerate(targets):
            if cov.redundant(r1, r0):
                m |= 1 << k
        return m

    everything = (1 << len(targets)) - 1
    basis_masks = [cover_mask(r) for r in basis]
    union = 0
    for m in basis_masks:
        union |= m
    complete = union == everything
    redundant = []
    for i, r in enumerate(basis):
        rest = 0
        for j, m in enumerate(basis_masks):
            if j != i:
                rest |= m
        if rest == everything:
            redundant.append(r)

    pool_masks = [cover_mask(r) for r in pool]
    limit = len(basis) - 1
    coverers = [[p for p, m in enumerate(pool_masks) if (m >> k) & 1] for k in range(len(targets))]
    nodes = 0
    exceeded = False

    def search(covered: int, depth: int) -> bool:
        # can the uncovered targets be covered with at most ``limit - depth`` more rules
        nonlocal nodes, exceeded
        nodes += 1
        if nodes > node_budget:
            exceeded = True
            return False
        if covered == everything:
            return True
        if depth == limit:
            return False
        best = None
        for k in range(len(targets)):
            if not (covered >> k) & 1:
                if best is None or len(coverers[k]) < len(coverers[best]):
                    best = k
                    if len(coverers[k]) <= 1:
                        break
        for p in coverers[best]:
            if search(covered | pool_masks[p], depth + 1):
                return True
            if exceeded:
                return False
        return False

    found = search(0, 0) if limit >= 0 else False
    smaller = None if exceeded else found
    return MinimalityReport(len(basis), complete, redundant, len(pool), smaller)


def all_rules_count(
    d: Dataset,
    gamma,
    tau: int,
    convention: str = "traditional_singleton",
    allow_empty_antecedent: bool = False,
) -> int:
    """Count rules ``X -> Y`` with ``X, Y`` disjoint meeting both thresholds.

    ``traditional_singleton`` counts one-item consequents; ``general`` counts
    every nonempty consequent. Antecedents are nonempty unless
    ``allow_empty_antecedent`` is set.
    """
    gamma = as_fraction(gamma)
    if convention not in ("traditional_singleton", "general"):
        raise ValueError(f"unknown convention {convention!r}")
    sup = frequent_itemsets(d, max(tau, 1) if len(d) else 1)
    n = len(d)
    total = 0
    for z, sz in sup.items():
        size = z.bit_count()
        if size == 0:
            continue
        if convention == "traditional_singleton":
            m = z
            while m:
                low = m & -m
                m ^= low
                x = z ^ low
                if (x or allow_empty_antecedent) and _meets(sz, sup[x], gamma):
                    total += 1
            continue
        # sets X <= Z with s(X) * gamma > s(Z) form a down-set; count it and take the rest
        low_count = _count_strong_subsets(z, sz, sup, gamma)
        up_count = (1 << size) - low_count  # includes Z itself, and maybe the empty set
        up_count -= 1
        if not allow_empty_antecedent and _meets(sz, n, gamma):
            up_count -= 1
        total += up_count
    return total


def _count_strong_subsets(z: int, sz: int, sup: dict[int, int], gamma: Fraction) -> int:
    items = [1 << i for i in range(z.bit_length()) if (z >> i) & 1]
    count = 0
    stack = [(0, 0)]
    while stack:
        x, start = stack.pop()
        if _meets(sz, sup[x], gamma):
            continue
        count += 1
        for k in range(start, len(items)):
            stack.append((x | items[k], k + 1))
    return count


def frequent_itemsets(d: Dataset, tau: int) -> dict[int, int]:
    """All itemsets of support >= tau as ``{mask: support}`` (depth-first, tidset based)."""
    out: dict[int, int] = {}
    if len(d) < tau:
        return out
    all_tids = (1 << len(d)) - 1
    out[0] = len(d)
    items = [(i, d.item_tidset(i)) for i in range(d.n_items) if d.item_tidset(i).bit_count() >= tau]
    stack = [(0, all_tids, 0)]
    while stack:
        mask, tids, start = stack.pop()
        for k in range(start, len(items)):
            i, t = items[k]
            nt = tids & t
            s = nt.bit_count()
            if s >= tau:
                m = mask | (1 << i)
                out[m] = s
                stack.append((m, nt, k + 1))
    return out
