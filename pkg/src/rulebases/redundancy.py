"""Plain and closure-based redundancy: deciders, inference schemes, derivations."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .dataset import EMPTY, Dataset, ItemSet, Rule, confidence, parse_rule, split_rule_text
from .implications import ImplicationSet, implies, logical_closure


class Tag(str, enum.Enum):
    rR = "rR"
    rA_plain = "rA_plain"
    lA = "lA"
    rEmpty = "rEmpty"
    rA_clo = "rA_clo"
    rI = "rI"
    lI = "lI"
    two_A = "two_A"


PLAIN_TAGS = frozenset({Tag.rR, Tag.rA_plain, Tag.lA, Tag.rEmpty})
CLOSURE_TAGS = frozenset({Tag.rA_clo, Tag.rI, Tag.lA, Tag.lI, Tag.rEmpty})


def covers(r1: Rule, r0: Rule) -> bool:
    """``X1 <= X0`` and ``X0 Y0 <= X1 Y1``."""
    return r1.antecedent <= r0.antecedent and r0.full <= r1.full


def plainly_redundant(r1: Rule, r0: Rule) -> bool:
    """True iff ``c(r0) >= c(r1)`` in every dataset."""
    return r0.is_trivial() or covers(r1, r0)


def closure_redundant(B: ImplicationSet | Iterable[Rule], r1: Rule, r0: Rule) -> bool:
    """True iff ``c(r0) >= c(r1)`` in every dataset where all of ``B`` holds."""
    cl0 = logical_closure(B, r0.antecedent)
    if r0.consequent <= cl0:
        return True
    return r1.antecedent <= cl0 and r0.full <= logical_closure(B, r1.full)


@dataclass(frozen=True)
class Scheme:
    tag: Tag
    premises: tuple[Rule, ...]
    implication_premises: tuple[Rule, ...]
    conclusion: Rule


def check_step(B: ImplicationSet | Iterable[Rule], s: Scheme) -> bool:
    """Whether ``s`` is a correct instance of its scheme.

    Implication premises need not be members of ``B``; they must follow
    from it.
    """
    B = list(B)
    prem, imps, c = s.premises, s.implication_premises, s.conclusion
    n_prem, n_imp = _ARITY[s.tag]
    if len(prem) != n_prem or len(imps) != n_imp:
        return False
    if not all(implies(B, i) for i in imps):
        return False
    if s.tag is Tag.rEmpty:
        return not c.consequent
    if s.tag is Tag.two_A:
        return _check_two_a(prem, imps, c)
    x, y = prem[0].antecedent, prem[0].consequent
    if s.tag is Tag.rR:
        return c.antecedent == x and c.consequent <= y
    if s.tag is Tag.rA_plain:
        return c.antecedent == x and c.consequent == x | y
    if s.tag is Tag.lA:
        x2, z = c.antecedent, c.consequent
        return x <= x2 and z <= y and (x2 - x) <= y and y <= (x2 | z)
    i = imps[0]
    if s.tag is Tag.rA_clo:
        return i.antecedent == x and c.antecedent == x and c.consequent == y | i.consequent
    if s.tag is Tag.rI:
        return i.antecedent == y and c.antecedent == x and c.consequent == i.consequent
    if s.tag is Tag.lI:
        z = c.antecedent
        return z <= x and i.antecedent == z and i.consequent == x and c.consequent == y
    return False


_ARITY = {
    Tag.rR: (1, 0),
    Tag.rA_plain: (1, 0),
    Tag.lA: (1, 0),
    Tag.rEmpty: (0, 0),
    Tag.rA_clo: (1, 1),
    Tag.rI: (1, 1),
    Tag.lI: (1, 1),
    Tag.two_A: (2, 5),
}


def two_a_implications(r1: Rule, r2: Rule, z1: ItemSet, z2: ItemSet) -> tuple[Rule, ...]:
    """The five implication premises of the two-premise scheme, in order."""
    a, b = r1.full, r2.full
    return (
        Rule(a, r2.antecedent),
        Rule(b, r1.antecedent),
        Rule(a | b, z1),
        Rule(a | z1, z2),
        Rule(b | z1, z2),
    )


def _check_two_a(prem, imps, c) -> bool:
    r1, r2 = prem
    z1, z2 = imps[2].consequent, imps[3].consequent
    if tuple(imps) != two_a_implications(r1, r2, z1, z2):
        return False
    return c == Rule(r1.antecedent | r2.antecedent | z1, z2)


@dataclass
class DerivationTrace:
    root_premises: list[Rule]
    steps: list[Scheme] = field(default_factory=list)

    @property
    def final(self) -> Rule:
        return self.steps[-1].conclusion if self.steps else self.root_premises[0]

    def __len__(self) -> int:
        return len(self.steps)

    def to_text(self, d: Dataset) -> str:
        lines = []
        for s in self.steps:
            parts = [d.format_rule(r, "->", canonical=False) for r in s.premises]
            parts += [d.format_rule(r, "=>", canonical=False) for r in s.implication_premises]
            concl = d.format_rule(s.conclusion, "->", canonical=False)
            lines.append(f"{s.tag.value}: {', '.join(parts)} |- {concl}")
        return "\n".join(lines) + ("\n" if lines else "")


def replay(B: ImplicationSet | Iterable[Rule], trace: DerivationTrace) -> bool:
    """Check every step and that partial premises are roots or earlier conclusions."""
    B = list(B)
    known = {_key(r) for r in trace.root_premises}
    for s in trace.steps:
        if not check_step(B, s):
            return False
        if any(_key(p) not in known for p in s.premises):
            return False
        known.add(_key(s.conclusion))
    return True


def _key(r: Rule) -> tuple[int, int]:
    return (r.antecedent.mask, r.consequent.mask)


def parse_trace(text: str, index: dict[str, int], root_premises: Sequence[Rule]) -> DerivationTrace:
    """Inverse of :meth:`DerivationTrace.to_text`."""
    steps = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        tag_text, _, rest = line.partition(":")
        try:
            tag = Tag(tag_text.strip())
        except ValueError:
            raise ValueError(f"unknown scheme {tag_text.strip()!r}") from None
        lhs, sep, rhs = rest.partition("|-")
        if not sep:
            raise ValueError(f"missing '|-' in {line!r}")
        prem, imps = [], []
        for part in (p for p in lhs.split(",") if p.strip()):
            (imps if "=>" in part else prem).append(parse_rule(part, index))
        steps.append(Scheme(tag, tuple(prem), tuple(imps), parse_rule(rhs, index)))
    return DerivationTrace(list(root_premises), steps)


def derive(B: ImplicationSet | Iterable[Rule], r1: Rule, r0: Rule, mode: str = "closure") -> DerivationTrace | None:
    """Canonical derivation of ``r0`` from ``r1``, or None if ``r0`` is not redundant.

    Identity steps of the canonical chain are left out.
    """
    if mode == "plain":
        return _derive_plain(r1, r0)
    if mode == "closure":
        return _derive_closure(list(B), r1, r0)
    raise ValueError(f"unknown mode {mode!r}")


def _derive_plain(r1: Rule, r0: Rule) -> DerivationTrace | None:
    x0, y0 = r0.antecedent, r0.consequent
    trace = DerivationTrace([r1])
    if r1 == r0:
        return trace
    if r0.is_trivial():
        _push(trace, Tag.rEmpty, (), (), Rule(x0, EMPTY))
        _push(trace, Tag.rA_plain, (trace.final,), (), Rule(x0, x0))
        if y0 != x0:
            _push(trace, Tag.rR, (trace.final,), (), r0)
        return trace
    if not covers(r1, r0):
        return None
    x1, full1 = r1.antecedent, r1.full
    cur = r1
    if cur.consequent != full1:
        cur = _push(trace, Tag.rA_plain, (cur,), (), Rule(x1, full1))
    if r0.full != full1:
        cur = _push(trace, Tag.rR, (cur,), (), Rule(x1, r0.full))
    if cur != r0:
        _push(trace, Tag.lA, (cur,), (), r0)
    return trace


def _derive_closure(B: list[Rule], r1: Rule, r0: Rule) -> DerivationTrace | None:
    x0, y0 = r0.antecedent, r0.consequent
    cl0 = logical_closure(B, x0)
    trace = DerivationTrace([r1])
    if r1 == r0:
        return trace
    if y0 <= cl0:
        _push(trace, Tag.rEmpty, (), (), Rule(x0, EMPTY))
        _push(trace, Tag.rA_clo, (trace.final,), (Rule(x0, y0),), r0)
        return trace
    x1 = r1.antecedent
    if not (x1 <= cl0 and r0.full <= logical_closure(B, r1.full)):
        return None
    cur = r1
    if not x1 <= cur.consequent:
        cur = _push(trace, Tag.rA_clo, (cur,), (Rule(x1, x1),), Rule(x1, r1.full))
    target = cl0 | y0
    if cur.consequent != target:
        cur = _push(trace, Tag.rI, (cur,), (Rule(cur.consequent, target),), Rule(x1, target))
    if cur != Rule(cl0, y0):
        cur = _push(trace, Tag.lA, (cur,), (), Rule(cl0, y0))
    if cur != r0:
        _push(trace, Tag.lI, (cur,), (Rule(x0, cl0),), r0)
    return trace


def _push(trace: DerivationTrace, tag: Tag, prem, imps, conclusion: Rule) -> Rule:
    trace.steps.append(Scheme(tag, tuple(prem), tuple(imps), conclusion))
    return conclusion


def _shape_counts(shapes: Sequence[int], counts: Sequence[int], x: int) -> int:
    return sum(c for s, c in zip(shapes, counts) if x & ~s == 0)


def _conf_from(shapes, counts, r: Rule) -> Fraction:
    sx = _shape_counts(shapes, counts, r.antecedent.mask)
    return Fraction(1) if sx == 0 else Fraction(_shape_counts(shapes, counts, r.full.mask), sx)


def _search_two_shapes(shapes: Sequence[int], r1: Rule, r0: Rule, bound: int, n_items: int):
    best, best_gap = None, Fraction(0)
    for a in range(bound + 1):
        for b in range(bound + 1):
            if a == b == 0:
                continue
            gap = _conf_from(shapes, (a, b), r1) - _conf_from(shapes, (a, b), r0)
            if gap > best_gap:
                best, best_gap = (a, b), gap
    if best is None:
        return None
    rows = [ItemSet.from_mask(s) for s, c in zip(shapes, best) for _ in range(c)]
    return Dataset([str(i) for i in range(n_items)], rows)


def _oracle_items(*rules: Rule) -> int:
    # universe: mentioned items plus one fresh item
    top = 0
    for r in rules:
        top |= r.full.mask
    return top.bit_length() + 1


def plain_counterexample(r1: Rule, r0: Rule, bound: int = 20) -> Dataset | None:
    """Dataset with ``c(r0) < c(r1)`` built from copies of ``X0`` and ``X1 Y1``.

    Returns the candidate with the widest confidence gap, or None.
    """
    shapes = (r0.antecedent.mask, r1.full.mask)
    return _search_two_shapes(shapes, r1, r0, bound, _oracle_items(r0, r1))


def closure_counterexample(B: ImplicationSet | Iterable[Rule], r1: Rule, r0: Rule, bound: int = 20) -> Dataset | None:
    """As :func:`plain_counterexample`, with transactions closed under ``B``."""
    B = list(B)
    shapes = (logical_closure(B, r0.antecedent).mask, logical_closure(B, r1.full).mask)
    n = max(_oracle_items(r0, r1, *B), max(shapes).bit_length())
    return _search_two_shapes(shapes, r1, r0, bound, n)


def confidence_gap(d: Dataset, r1: Rule, r0: Rule) -> Fraction:
    return confidence(d, r1) - confidence(d, r0)
