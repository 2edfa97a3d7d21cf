"""Treebank-driven word reordering.

Ordering statistics are collected per subtree (a head plus its direct
dependents, the head labeled by its own relation). A source tree is then
relinearized bottom-up: each subtree's elements are permuted to satisfy the
majority pairwise order observed in the target treebank, with every child
subtree kept contiguous.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .corpus_io import _read_lines, write_lines
from .exceptions import FormatError, InvariantError
from .tree import DependencyTree, Node

STATS_HEADER = "head_label\tlabel_i\tlabel_j\tbefore\ttotal"


@dataclass
class OrderingStats:
    """Pairwise precedence counts keyed by ``(head_label, label_a, label_b)``.

    Only the canonical orientation ``label_a < label_b`` is stored; the
    reverse orientation is derived, which keeps the counts symmetric.
    """

    _counts: dict = field(default_factory=dict)

    def add(self, head_label: str, first: str, second: str, n: int = 1) -> None:
        """Record ``n`` observations of ``first`` preceding ``second``."""
        if first == second:
            return
        if first < second:
            key, before = (head_label, first, second), n
        else:
            key, before = (head_label, second, first), 0
        cell = self._counts.setdefault(key, [0, 0])
        cell[0] += before
        cell[1] += n

    def counts(self, head_label: str, label_i: str, label_j: str) -> tuple[int, int]:
        """``(before, total)``: how often ``label_i`` preceded ``label_j`` out of ``total``."""
        if label_i == label_j:
            return 0, 0
        if label_i < label_j:
            before, total = self._counts.get((head_label, label_i, label_j), (0, 0))
            return before, total
        before, total = self._counts.get((head_label, label_j, label_i), (0, 0))
        return total - before, total

    def probability(self, head_label: str, label_i: str, label_j: str) -> float | None:
        """Share of observations with ``label_i`` first, or None if never seen."""
        before, total = self.counts(head_label, label_i, label_j)
        return before / total if total else None

    def __len__(self) -> int:
        return len(self._counts)

    def __bool__(self) -> bool:
        return bool(self._counts)

    def __eq__(self, other):
        if not isinstance(other, OrderingStats):
            return NotImplemented
        return {k: tuple(v) for k, v in self._counts.items()} == {k: tuple(v) for k, v in other._counts.items()}

    def __add__(self, other: "OrderingStats") -> "OrderingStats":
        out = OrderingStats({k: list(v) for k, v in self._counts.items()})
        for k, (b, t) in other._counts.items():
            cell = out._counts.setdefault(k, [0, 0])
            cell[0] += b
            cell[1] += t
        return out

    def items(self):
        """Canonical rows ``((head, a, b), (before, total))`` in sorted order."""
        return [(k, tuple(self._counts[k])) for k in sorted(self._counts)]

    @classmethod
    def from_probabilities(cls, probs: dict, total: int = 100) -> "OrderingStats":
        """Build stats from ``{(head, label_i, label_j): P(label_i first)}``.

        Convenient for hand-written fixtures; ``total`` pseudo-observations
        are spread according to each probability.
        """
        stats = cls()
        for (k, i, j), p in probs.items():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"probability {p} out of range")
            before = round(p * total)
            stats.add(k, i, j, before)
            stats.add(k, j, i, total - before)
        return stats


def subtree_elements(tree: DependencyTree, nid: int, coarse: bool = False) -> list[tuple[int, str]]:
    """``(position, label)`` of a head and its direct dependents, in surface order."""
    node = tree.node(nid)
    elems = [(nid, node.label(coarse))]
    elems.extend((c, tree.node(c).label(coarse)) for c in tree.children(nid))
    elems.sort()
    return elems


def estimate_ordering_stats(treebank: Iterable[DependencyTree], coarse: bool = False) -> OrderingStats:
    """Count, for every subtree and every pair of its elements, which came first."""
    stats = OrderingStats()
    for tree in treebank:
        for node in tree:
            if not tree.children(node.id):
                continue
            head_label = node.label(coarse)
            elems = subtree_elements(tree, node.id, coarse)
            for (_, a), (_, b) in combinations(elems, 2):
                stats.add(head_label, a, b)
    return stats


ConstraintSet = frozenset  # of (label_before, label_after)


def extract_constraints(labels: Iterable[str], head_label: str, stats: OrderingStats) -> ConstraintSet:
    """Orient every pair of distinct labels by majority order; unseen pairs stay free.

    Each pair is evaluated once, in lexicographic orientation, so a 50/50
    split resolves in favor of the lexicographically smaller label first.
    """
    out = set()
    for a, b in combinations(sorted(set(labels)), 2):
        before, total = stats.counts(head_label, a, b)
        if not total:
            continue
        out.add((a, b) if 2 * before >= total else (b, a))
    return frozenset(out)


def _stable_topological_order(labels: Sequence[str], constraints: ConstraintSet) -> list[int] | None:
    n = len(labels)
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for i, j in combinations(range(n), 2):
        li, lj = labels[i], labels[j]
        if li == lj or (li, lj) in constraints:
            succ[i].append(j)
            indeg[j] += 1
        elif (lj, li) in constraints:
            succ[j].append(i)
            indeg[i] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    return order if len(order) == n else None


def solve_order(labels: Sequence[str], constraints: ConstraintSet) -> list[int]:
    """Stable ordering of elements that satisfies the label constraints.

    ``labels`` are given in original order. Equal labels keep their relative
    order; remaining ties go to the earlier original position. Returns the
    identity permutation when the constraints are cyclic.
    """
    order = _stable_topological_order(labels, constraints)
    return list(range(len(labels))) if order is None else order


def constraints_satisfiable(labels: Sequence[str], constraints: ConstraintSet) -> bool:
    return _stable_topological_order(labels, constraints) is not None


def reorder_tree(tree: DependencyTree, stats: OrderingStats, coarse: bool = False) -> list[Node]:
    """Relinearize ``tree`` bottom-up; returns its nodes in the new order."""
    blocks: dict[int, list[Node]] = {}
    # children before parents: reverse of a pre-order walk
    walk = []
    stack = [tree.root.id]
    while stack:
        nid = stack.pop()
        walk.append(nid)
        stack.extend(tree.children(nid))
    for nid in reversed(walk):
        kids = tree.children(nid)
        if not kids:
            blocks[nid] = [tree.node(nid)]
            continue
        elems = subtree_elements(tree, nid, coarse)
        labels = [lab for _, lab in elems]
        constraints = extract_constraints(labels, tree.node(nid).label(coarse), stats)
        out: list[Node] = []
        for k in solve_order(labels, constraints):
            pos = elems[k][0]
            if pos == nid:
                out.append(tree.node(nid))
            else:
                out.extend(blocks.pop(pos))
        blocks[nid] = out
    return blocks[tree.root.id]


def reorder_sentence(tree: DependencyTree, stats: OrderingStats, coarse: bool = False) -> str:
    return " ".join(n.form for n in reorder_tree(tree, stats, coarse))


# ---------------------------------------------------------------------------
# Stats file

def write_ordering_stats(stats: OrderingStats, path) -> None:
    rows = [STATS_HEADER]
    for (k, a, b), (before, total) in stats.items():
        for lab in (k, a, b):
            if not lab or "\t" in lab:
                raise InvariantError(f"label {lab!r} cannot be written to TSV")
        rows.append(f"{k}\t{a}\t{b}\t{before}\t{total}")
    write_lines(path, rows)


def read_ordering_stats(path) -> OrderingStats:
    lines = _read_lines(path)
    if not lines or lines[0] != STATS_HEADER:
        raise FormatError(f"missing header {STATS_HEADER!r}", path, 1)
    cells: dict = defaultdict(lambda: [0, 0])
    seen = set()
    for lineno, line in enumerate(lines[1:], 2):
        cols = line.split("\t")
        if len(cols) != 5:
            raise FormatError(f"expected 5 columns, found {len(cols)}", path, lineno)
        k, a, b, before, total = cols
        try:
            before, total = int(before), int(total)
        except ValueError:
            raise FormatError("counts must be integers", path, lineno) from None
        if a == b or not 0 <= before <= total or total == 0:
            raise FormatError(f"invalid row {line!r}", path, lineno)
        key = (k, a, b) if a < b else (k, b, a)
        if key in seen:
            raise FormatError(f"duplicate entry for {key}", path, lineno)
        seen.add(key)
        cells[key] = [before, total] if a < b else [total - before, total]
    return OrderingStats(dict(cells))
