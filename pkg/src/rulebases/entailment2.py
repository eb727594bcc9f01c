"""Entailment of a partial rule from two partial premises plus implications.

For confidence thresholds of at least one half, two premises can entail a
conclusion that neither entails alone; seven inclusion conditions on
closures characterize exactly when. Below one half this never happens.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .bases import Basis, as_fraction
from .dataset import Dataset, ItemSet, Rule, rule_key
from .implications import ImplicationSet, logical_closure
from .redundancy import DerivationTrace, Scheme, Tag, check_step, closure_redundant, two_a_implications

HALF = Fraction(1, 2)
ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii")


class Reason(str, enum.Enum):
    trivial = "trivial"
    single_premise_1 = "single_premise_1"
    single_premise_2 = "single_premise_2"
    seven_conditions = "seven_conditions"
    none = "none"


@dataclass(frozen=True)
class EntailmentVerdict:
    holds: bool
    reason: Reason
    failed_conditions: tuple[str, ...] = ()


class SideConditionError(ValueError):
    """A scheme side condition does not follow from the implications."""

    def __init__(self, condition: str):
        super().__init__(f"side condition {condition} does not hold")
        self.condition = condition


def _check_gamma(gamma) -> Fraction:
    gamma = as_fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    return gamma


def seven_conditions(B: ImplicationSet | Iterable[Rule], r1: Rule, r2: Rule, r0: Rule) -> dict[str, bool]:
    """Evaluate conditions (i) to (vii), keyed by roman numeral."""
    B = list(B)

    def cl(x: ItemSet) -> ItemSet:
        return logical_closure(B, x)

    x0, y0 = r0.antecedent, r0.consequent
    x1, y1, x2, y2 = r1.antecedent, r1.consequent, r2.antecedent, r2.consequent
    c0 = cl(x0)
    c1, c2 = cl(x1 | y1), cl(x2 | y2)
    return {
        "i": x1 <= c0,
        "ii": x2 <= c0,
        "iii": x1 <= c2,
        "iv": x2 <= c1,
        "v": x0 <= cl(x1 | y1 | x2 | y2),
        "vi": y0 <= cl(x0 | y1),
        "vii": y0 <= cl(x0 | y2),
    }


def two_premise_entails(B: ImplicationSet | Iterable[Rule], r1: Rule, r2: Rule, r0: Rule, gamma) -> EntailmentVerdict:
    """Decide whether ``r1, r2`` at confidence ``gamma`` force ``r0`` to ``gamma`` given ``B``."""
    gamma = _check_gamma(gamma)
    B = list(B)
    if r0.consequent <= logical_closure(B, r0.antecedent):
        return EntailmentVerdict(True, Reason.trivial)
    if closure_redundant(B, r1, r0):
        return EntailmentVerdict(True, Reason.single_premise_1)
    if closure_redundant(B, r2, r0):
        return EntailmentVerdict(True, Reason.single_premise_2)
    conds = seven_conditions(B, r1, r2, r0)
    failed = tuple(k for k in ROMAN if not conds[k])
    if gamma >= HALF and not failed:
        return EntailmentVerdict(True, Reason.seven_conditions)
    return EntailmentVerdict(False, Reason.none, failed)


def apply_2A(B: ImplicationSet | Iterable[Rule], r1: Rule, r2: Rule, z1: ItemSet, z2: ItemSet) -> Rule:
    """Conclusion ``X1 X2 Z1 -> Z2`` of the two-premise scheme.

    Raises SideConditionError naming the first implication premise that
    ``B`` does not imply.
    """
    B = list(B)
    names = ("X1Y1=>X2", "X2Y2=>X1", "X1Y1X2Y2=>Z1", "X1Y1Z1=>Z2", "X2Y2Z1=>Z2")
    imps = two_a_implications(r1, r2, z1, z2)
    for name, imp in zip(names, imps):
        if not imp.consequent <= logical_closure(B, imp.antecedent):
            raise SideConditionError(name)
    return Rule(r1.antecedent | r2.antecedent | z1, z2)


def derive_two_premise(B: ImplicationSet | Iterable[Rule], r1: Rule, r2: Rule, r0: Rule) -> DerivationTrace | None:
    """Trace ``(2A)`` then ``(lI)`` when all seven conditions hold, else None."""
    B = list(B)
    conds = seven_conditions(B, r1, r2, r0)
    if not all(conds.values()):
        return None
    c0 = logical_closure(B, r0.antecedent)
    concl = apply_2A(B, r1, r2, c0, r0.consequent)
    trace = DerivationTrace([r1, r2])
    trace.steps.append(Scheme(Tag.two_A, (r1, r2), two_a_implications(r1, r2, c0, r0.consequent), concl))
    if concl != r0:
        trace.steps.append(Scheme(Tag.lI, (concl,), (Rule(r0.antecedent, c0),), r0))
    assert all(check_step(B, s) for s in trace.steps)
    return trace


def counterexample_shapes(B: ImplicationSet | Iterable[Rule], r1: Rule, r2: Rule, r0: Rule) -> list[ItemSet]:
    """Closed transaction shapes used by the counterexample constructions, deduplicated."""
    B = list(B)
    x0 = r0.antecedent
    a, b = r1.full, r2.full
    raw = [x0, a, b, x0 | r1.consequent, x0 | r2.consequent, a | b, x0 | a | b]
    out: list[ItemSet] = []
    for s in raw:
        c = logical_closure(B, s)
        if c not in out:
            out.append(c)
    return out


@lru_cache(maxsize=None)
def _grid(k: int, bound: int) -> np.ndarray:
    axes = [np.arange(1, bound + 1)] * k
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, k)


@lru_cache(maxsize=200_000)
def _search(sig: tuple[tuple[int, int, int], ...], bound: int, max_support: int):
    # sig[j] = per-shape contributions to (premise 1 slack, premise 2 slack, conclusion slack)
    coef = np.array(sig, dtype=np.int64)
    for k in range(1, min(max_support, len(sig)) + 1):
        grid = _grid(k, bound)
        for combo in itertools.combinations(range(len(sig)), k):
            vals = grid @ coef[list(combo)]
            hit = np.nonzero((vals[:, 0] >= 0) & (vals[:, 1] >= 0) & (vals[:, 2] < 0))[0]
            if hit.size:
                return combo, tuple(int(c) for c in grid[hit[0]])
    return None


def counterexample_search(
    B: ImplicationSet | Iterable[Rule],
    r1: Rule,
    r2: Rule,
    r0: Rule,
    gamma,
    bound: int = 30,
    names: Sequence[str] | None = None,
    max_shapes: int = 3,
) -> Dataset | None:
    """Look for a dataset satisfying ``B`` where both premises reach ``gamma`` and ``r0`` does not.

    Transactions are copies of the closed shapes from
    :func:`counterexample_shapes`, each used between 1 and ``bound`` times,
    with at most ``max_shapes`` distinct shapes. The conditions are linear
    in the multiplicities, and a feasible linear system of this form always
    has a solution supported on three shapes, so three is the default.
    """
    gamma = _check_gamma(gamma)
    B = list(B)
    p, q = gamma.numerator, gamma.denominator
    shapes = counterexample_shapes(B, r1, r2, r0)

    def slack(r: Rule, t: ItemSet) -> int:
        return q * (r.full <= t) - p * (r.antecedent <= t)

    sig = tuple((slack(r1, t), slack(r2, t), slack(r0, t)) for t in shapes)
    found = _search(sig, bound, max_shapes)
    if found is None:
        return None
    combo, counts = found
    rows = [shapes[j] for j, c in zip(combo, counts) for _ in range(c)]
    top = max([s.mask for s in shapes] + [r.full.mask for r in (r0, r1, r2)] + [r.full.mask for r in B])
    n = max(top.bit_length(), len(names) if names else 0)
    labels = list(names) if names else [str(i) for i in range(n)]
    return Dataset(labels, rows)


def prune_basis_2premise(B: ImplicationSet | Iterable[Rule], basis: Basis, gamma=None) -> Basis:
    """Drop rules entailed by two other kept rules, greedily in lectic order.

    Leaves the basis unchanged below one half, where two premises never
    properly entail anything.
    """
    B = list(B)
    gamma = _check_gamma(basis.gamma if gamma is None else gamma)
    kept = sorted((r.canonical() for r in basis.rules), key=rule_key)
    if gamma < HALF:
        return Basis(kept, basis.gamma, basis.support_floor, basis.kind)
    removed = []
    for r0 in list(kept):
        others = [r for r in kept if r != r0]
        if _entailed_by_pair(B, others, r0, gamma):
            kept.remove(r0)
            removed.append(r0)
    # every removed rule must be recoverable from the kept ones
    have = list(kept)
    pending = list(removed)
    progress = True
    while pending and progress:
        progress = False
        for r0 in list(pending):
            if _entailed_by_pair(B, have, r0, gamma):
                have.append(r0)
                pending.remove(r0)
                progress = True
    assert not pending, "pruning lost a rule"
    return Basis(kept, basis.gamma, basis.support_floor, basis.kind)


def _entailed_by_pair(B, rules: list[Rule], r0: Rule, gamma: Fraction) -> bool:
    for i, r1 in enumerate(rules):
        for r2 in rules[i:]:
            if two_premise_entails(B, r1, r2, r0, gamma).holds:
                return True
    return False
