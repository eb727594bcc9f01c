"""Transactions, itemsets, rules, and the support/confidence primitives.

Itemsets are stored as Python ints used as bitmasks over dense item ids,
which keeps subset tests and intersections cheap for every other module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class ItemSet:
    """Immutable set of item ids backed by an int bitmask.

    Comparison operators follow ``frozenset``: ``<=`` is inclusion and
    ``<`` is proper inclusion. Use :func:`lectic_key` for a total order.
    """

    __slots__ = ("_mask",)

    def __init__(self, items: Iterable[int] = ()):
        mask = 0
        for i in items:
            if i < 0:
                raise ValueError(f"negative item id {i}")
            mask |= 1 << i
        self._mask = mask

    @classmethod
    def from_mask(cls, mask: int) -> "ItemSet":
        if mask < 0:
            raise ValueError("mask must be non-negative")
        obj = cls.__new__(cls)
        obj._mask = mask
        return obj

    @property
    def mask(self) -> int:
        return self._mask

    def __iter__(self) -> Iterator[int]:
        m = self._mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self._mask.bit_count()

    def __bool__(self) -> bool:
        return self._mask != 0

    def __contains__(self, item: int) -> bool:
        return item >= 0 and (self._mask >> item) & 1 == 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ItemSet) and other._mask == self._mask

    def __hash__(self) -> int:
        return hash(("ItemSet", self._mask))

    def __or__(self, other: "ItemSet") -> "ItemSet":
        return ItemSet.from_mask(self._mask | other._mask)

    def __and__(self, other: "ItemSet") -> "ItemSet":
        return ItemSet.from_mask(self._mask & other._mask)

    def __sub__(self, other: "ItemSet") -> "ItemSet":
        return ItemSet.from_mask(self._mask & ~other._mask)

    def __xor__(self, other: "ItemSet") -> "ItemSet":
        return ItemSet.from_mask(self._mask ^ other._mask)

    def __le__(self, other: "ItemSet") -> bool:
        return self._mask & ~other._mask == 0

    def __lt__(self, other: "ItemSet") -> bool:
        return self._mask != other._mask and self <= other

    def __ge__(self, other: "ItemSet") -> bool:
        return other <= self

    def __gt__(self, other: "ItemSet") -> bool:
        return other < self

    def issubset(self, other: "ItemSet") -> bool:
        return self <= other

    def issuperset(self, other: "ItemSet") -> bool:
        return other <= self

    def isdisjoint(self, other: "ItemSet") -> bool:
        return self._mask & other._mask == 0

    def add(self, item: int) -> "ItemSet":
        return ItemSet.from_mask(self._mask | (1 << item))

    def discard(self, item: int) -> "ItemSet":
        return ItemSet.from_mask(self._mask & ~(1 << item))

    def __repr__(self) -> str:
        return f"ItemSet({sorted(self)})"


EMPTY = ItemSet()


def lectic_key(x: ItemSet) -> int:
    """Sort key for the lectic order in which the highest item is most significant.

    This is the numeric order of the bitmasks: every set precedes its proper
    supersets, and ``{a, c}`` precedes ``{b, c}``.
    """
    return x.mask


@dataclass(frozen=True)
class Rule:
    """Association rule ``antecedent -> consequent``.

    Sides may overlap; :meth:`canonical` removes the antecedent from the
    consequent, which yields a rule equivalent by reflexivity.
    """

    antecedent: ItemSet
    consequent: ItemSet

    @property
    def full(self) -> ItemSet:
        return self.antecedent | self.consequent

    def canonical(self) -> "Rule":
        return Rule(self.antecedent, self.consequent - self.antecedent)

    def is_trivial(self) -> bool:
        return self.consequent <= self.antecedent

    def __repr__(self) -> str:
        return f"Rule({sorted(self.antecedent)} -> {sorted(self.consequent)})"


def rule_key(r: Rule):
    return (lectic_key(r.antecedent), lectic_key(r.consequent))


def equivalent_by_reflexivity(r0: Rule, r1: Rule) -> bool:
    """Same antecedent and same union of both sides."""
    return r0.antecedent == r1.antecedent and r0.full == r1.full


class Dataset:
    """A multiset of transactions over a dense item universe.

    Args:
        names: item labels; item ``i`` is ``names[i]``.
        transactions: one ItemSet per transaction; the tid is the position.
    """

    def __init__(self, names: Sequence[str], transactions: Iterable[ItemSet]):
        self.names: tuple[str, ...] = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("item names must be unique")
        self.index = {name: i for i, name in enumerate(self.names)}
        self.transactions: tuple[ItemSet, ...] = tuple(transactions)
        self.universe = ItemSet.from_mask((1 << len(self.names)) - 1)
        tidsets = [0] * len(self.names)
        for tid, t in enumerate(self.transactions):
            if not t <= self.universe:
                raise ValueError(f"transaction {tid} has items outside the universe")
            bit = 1 << tid
            for i in t:
                tidsets[i] |= bit
        self._tidsets = tuple(tidsets)
        self._all_tids = (1 << len(self.transactions)) - 1

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[str]], names: Sequence[str] | None = None) -> "Dataset":
        """Build from rows of item labels; the universe defaults to the sorted labels seen."""
        rows = [list(r) for r in rows]
        if names is None:
            names = sorted({x for r in rows for x in r})
        index = {n: i for i, n in enumerate(names)}
        return cls(names, [ItemSet(index[x] for x in r) for r in rows])

    def __len__(self) -> int:
        return len(self.transactions)

    @property
    def n_items(self) -> int:
        return len(self.names)

    @property
    def tids(self) -> range:
        return range(len(self.transactions))

    def item_tidset(self, item: int) -> int:
        return self._tidsets[item]

    def tidset(self, x: ItemSet) -> int:
        """Bitmask of the transactions containing ``x``."""
        self._check(x)
        tids = self._all_tids
        for i in x:
            tids &= self._tidsets[i]
            if not tids:
                break
        return tids

    def _check(self, x: ItemSet) -> None:
        if not x <= self.universe:
            bad = sorted(x - self.universe)
            raise ValueError(f"items {bad} are outside the universe")

    def itemset(self, labels: Iterable[str]) -> ItemSet:
        try:
            return ItemSet(self.index[n] for n in labels)
        except KeyError as exc:
            raise ValueError(f"unknown item {exc.args[0]!r}") from None

    def labels(self, x: ItemSet) -> list[str]:
        return [self.names[i] for i in x]

    def format_itemset(self, x: ItemSet) -> str:
        return " ".join(self.labels(x))

    def format_rule(self, r: Rule, arrow: str = "->", canonical: bool = True) -> str:
        if canonical:
            r = r.canonical()
        lhs = self.format_itemset(r.antecedent)
        rhs = self.format_itemset(r.consequent)
        return f"{lhs} {arrow} {rhs}".strip() if lhs else f"{arrow} {rhs}".rstrip()

    def parse_rule(self, text: str) -> Rule:
        """Parse ``"a b -> c d"`` (``=>`` is also accepted) with this dataset's labels."""
        return parse_rule(text, self.index)

    def to_fimi(self) -> str:
        return "".join(self.format_itemset(t) + "\n" for t in self.transactions)

    def __repr__(self) -> str:
        return f"Dataset({len(self.transactions)} transactions, {self.n_items} items)"


def split_rule_text(text: str) -> tuple[list[str], list[str]]:
    for arrow in ("=>", "->"):
        if arrow in text:
            lhs, _, rhs = text.partition(arrow)
            return lhs.split(), rhs.split()
    raise ValueError(f"rule {text!r} has no '->' or '=>'")


def parse_rule(text: str, index: dict[str, int]) -> Rule:
    lhs, rhs = split_rule_text(text)
    try:
        return Rule(ItemSet(index[n] for n in lhs), ItemSet(index[n] for n in rhs))
    except KeyError as exc:
        raise ValueError(f"unknown item {exc.args[0]!r} in rule {text!r}") from None


def _label_key(label: str):
    return (0, int(label), "") if label.isdigit() else (1, 0, label)


def parse_transactions(text: str | bytes, format: str = "fimi") -> Dataset:
    """Read a FIMI file: one transaction per line, whitespace-separated tokens.

    Blank lines are skipped. Item ids follow the sorted labels, numeric
    labels by value, so ``"10"`` comes after ``"9"``.
    """
    if format.lower() != "fimi":
        raise ValueError(f"unsupported format {format!r}")
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = [line.split() for line in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows:
        raise ValueError("no transactions")
    names = sorted({tok for r in rows for tok in r}, key=_label_key)
    return Dataset.from_rows(rows, names)


def support(d: Dataset, x: ItemSet) -> int:
    """Number of transactions containing ``x``."""
    return d.tidset(x).bit_count()


def confidence(d: Dataset, r: Rule) -> Fraction:
    """Exact confidence; 1 when the antecedent has zero support."""
    sx = support(d, r.antecedent)
    if sx == 0:
        return Fraction(1)
    return Fraction(support(d, r.full), sx)
