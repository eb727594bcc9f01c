"""Closure operator, closed-itemset lattice, Hasse order, minimal generators."""
from __future__ import annotations

from dataclasses import dataclass, field

from .dataset import Dataset, ItemSet, lectic_key


def _close_tids(d: Dataset, tids: int) -> int:
    # items present in every transaction of ``tids``; the empty tidset closes to U
    if tids == 0:
        return d.universe.mask
    mask = 0
    for i in range(d.n_items):
        if d.item_tidset(i) & tids == tids:
            mask |= 1 << i
    return mask


def close(d: Dataset, x: ItemSet) -> ItemSet:
    """Intersection of the transactions containing ``x`` (the universe if none do)."""
    return ItemSet.from_mask(_close_tids(d, d.tidset(x)))


@dataclass
class ClosedNode:
    itemset: ItemSet
    support: int
    lower_covers: list[int] = field(default_factory=list)
    upper_covers: list[int] = field(default_factory=list)
    min_generators: list[ItemSet] | None = None


class ClosureLattice:
    """Closed itemsets with support at least ``support_floor``, in lectic order."""

    def __init__(self, dataset: Dataset, nodes: list[ClosedNode], support_floor: int):
        self.dataset = dataset
        self.support_floor = support_floor
        self.nodes = sorted(nodes, key=lambda n: lectic_key(n.itemset))
        self.index = {n.itemset.mask: k for k, n in enumerate(self.nodes)}
        self._link_covers()
        self._generators_ready = False

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def node_of(self, x: ItemSet) -> ClosedNode | None:
        k = self.index.get(x.mask)
        return None if k is None else self.nodes[k]

    def _link_covers(self) -> None:
        d = self.dataset
        for k, node in enumerate(self.nodes):
            tids = d.tidset(node.itemset)
            cands = set()
            for i in range(d.n_items):
                if i in node.itemset:
                    continue
                j = self.index.get(_close_tids(d, tids & d.item_tidset(i)))
                if j is not None:
                    cands.add(j)
            masks = {j: self.nodes[j].itemset.mask for j in cands}
            for j in sorted(cands):
                mj = masks[j]
                if not any(j2 != j and masks[j2] & ~mj == 0 for j2 in cands):
                    node.upper_covers.append(j)
                    self.nodes[j].lower_covers.append(k)
        for node in self.nodes:
            node.lower_covers.sort()

    def hasse(self) -> list[tuple[int, int]]:
        """Covering pairs ``(parent, child)`` with child a maximal proper closed subset."""
        return [(k, c) for k, n in enumerate(self.nodes) for c in n.lower_covers]

    def ensure_generators(self) -> None:
        if self._generators_ready:
            return
        groups: dict[int, list[ItemSet]] = {n.itemset.mask: [] for n in self.nodes}
        d = self.dataset
        for mask, tids in free_sets(d, self.support_floor).items():
            c = _close_tids(d, tids)
            if c in groups:
                groups[c].append(ItemSet.from_mask(mask))
        for node in self.nodes:
            node.min_generators = sorted(groups[node.itemset.mask], key=lectic_key)
        self._generators_ready = True

    def to_text(self) -> str:
        d = self.dataset
        lines = [f"# nodes {len(self.nodes)} support_floor {self.support_floor}"]
        for n in self.nodes:
            items = d.format_itemset(n.itemset)
            lines.append(f"{items} | {n.support}" if items else f"| {n.support}")
        edges = self.hasse()
        lines.append(f"# edges {len(edges)}")
        lines.extend(f"{p} {c}" for p, c in edges)
        return "\n".join(lines) + "\n"


def enumerate_closures(d: Dataset, support_floor: int = 0) -> ClosureLattice:
    """All closed sets of support >= ``support_floor`` by Close-by-One search."""
    if support_floor < 0:
        raise ValueError("support floor must be non-negative")
    n = d.n_items
    nodes: list[ClosedNode] = []
    all_tids = (1 << len(d)) - 1
    root_sup = len(d)
    if root_sup < support_floor:
        return ClosureLattice(d, [], support_floor)
    root = _close_tids(d, all_tids)
    nodes.append(ClosedNode(ItemSet.from_mask(root), root_sup))
    tidsets = [d.item_tidset(i) for i in range(n)]
    stack = [(root, all_tids, 0)]
    # explicit stack: deep universes would otherwise hit the recursion limit
    while stack:
        closed, tids, start = stack.pop()
        children = []
        for i in range(start, n):
            if (closed >> i) & 1:
                continue
            new_tids = tids & tidsets[i]
            sup = new_tids.bit_count()
            if sup < support_floor:
                continue
            new_closed = _close_tids(d, new_tids)
            low = (1 << i) - 1
            if new_closed & low != closed & low:
                continue
            nodes.append(ClosedNode(ItemSet.from_mask(new_closed), sup))
            children.append((new_closed, new_tids, i + 1))
        stack.extend(reversed(children))
    return ClosureLattice(d, nodes, support_floor)


def free_sets(d: Dataset, support_floor: int = 0) -> dict[int, int]:
    """Minimal generators (free sets) of support >= floor, as ``{mask: tidset}``.

    Levelwise: every subset of a free set is free, so candidates of size k+1
    extend free k-sets and must have all their k-subsets free.
    """
    all_tids = (1 << len(d)) - 1
    if len(d) < support_floor:
        return {}
    result = {0: all_tids}
    level = {0: all_tids}
    tidsets = [d.item_tidset(i) for i in range(d.n_items)]
    while level:
        nxt: dict[int, int] = {}
        for mask, tids in level.items():
            start = mask.bit_length()
            sup = tids.bit_count()
            for j in range(start, d.n_items):
                new_tids = tids & tidsets[j]
                s = new_tids.bit_count()
                if s < support_floor or s == sup:
                    continue
                cand = mask | (1 << j)
                ok = True
                m = mask
                while m:
                    low = m & -m
                    m ^= low
                    sub = cand ^ low
                    sub_tids = level.get(sub)
                    if sub_tids is None or sub_tids.bit_count() == s:
                        ok = False
                        break
                if ok:
                    nxt[cand] = new_tids
        result.update(nxt)
        level = nxt
    return result


def minimal_generators(L: ClosureLattice, d: Dataset, node: ClosedNode) -> list[ItemSet]:
    """Inclusion-minimal sets whose closure is ``node.itemset``, lectic-sorted."""
    if L.dataset is not d:
        raise ValueError("lattice was built from a different dataset")
    L.ensure_generators()
    return list(node.min_generators)


def hasse(L: ClosureLattice) -> list[tuple[int, int]]:
    return L.hasse()
