"""UD-style dependency trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .exceptions import InvariantError


@dataclass(frozen=True)
class Node:
    id: int
    form: str
    lemma: str
    head: int
    deprel: str

    def label(self, coarse: bool = False) -> str:
        # `nmod:poss` -> `nmod` when coarse labels are requested
        return self.deprel.split(":", 1)[0] if coarse else self.deprel


@dataclass(frozen=True)
class DependencyTree:
    """A single-rooted dependency tree over 1-based node ids.

    Nodes are stored in surface order, so ``nodes[i].id == i + 1``.
    Construction validates the tree and raises :class:`InvariantError`
    on zero or multiple roots, dangling heads, or cycles.
    """

    nodes: tuple[Node, ...]
    metadata: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        n = len(nodes)
        if n == 0:
            raise InvariantError("empty tree")
        for i, node in enumerate(nodes):
            if node.id != i + 1:
                raise InvariantError(f"node ids must be 1..{n} in order, got {node.id} at position {i + 1}")
            if not node.form:
                raise InvariantError(f"node {node.id} has an empty form")
            if node.head < 0 or node.head > n:
                raise InvariantError(f"node {node.id} has dangling head {node.head}")
            if node.head == node.id:
                raise InvariantError(f"node {node.id} is its own head")
        roots = [node.id for node in nodes if node.head == 0]
        if len(roots) != 1:
            raise InvariantError(f"expected exactly one root, found {len(roots)}")
        children: list[list[int]] = [[] for _ in range(n + 1)]
        for node in nodes:
            children[node.head].append(node.id)
        # every node must be reachable from the root, otherwise there is a cycle
        seen = 0
        stack = [roots[0]]
        while stack:
            nid = stack.pop()
            seen += 1
            stack.extend(children[nid])
        if seen != n:
            raise InvariantError("head references contain a cycle")
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))

    @classmethod
    def from_lists(cls, forms: Sequence[str], heads: Sequence[int], deprels: Sequence[str],
                   lemmas: Sequence[str] | None = None) -> "DependencyTree":
        if lemmas is None:
            lemmas = forms
        if not (len(forms) == len(heads) == len(deprels) == len(lemmas)):
            raise InvariantError("forms, heads, deprels and lemmas must have equal length")
        return cls(tuple(Node(i + 1, f, l, h, d)
                         for i, (f, l, h, d) in enumerate(zip(forms, lemmas, heads, deprels))))

    def __len__(self) -> int:
        return len(self.nodes)

    def __iter__(self) -> Iterator[Node]:
        return iter(self.nodes)

    def node(self, nid: int) -> Node:
        return self.nodes[nid - 1]

    @property
    def root(self) -> Node:
        return self.node(self._children[0][0])

    def children(self, nid: int) -> tuple[int, ...]:
        """Ids of the direct dependents of ``nid`` (0 for the virtual root), ascending."""
        return self._children[nid]

    def subtree_ids(self, nid: int) -> list[int]:
        out = []
        stack = [nid]
        while stack:
            cur = stack.pop()
            out.append(cur)
            stack.extend(self._children[cur])
        return sorted(out)

    @property
    def forms(self) -> list[str]:
        return [node.form for node in self.nodes]

    def text(self) -> str:
        return " ".join(self.forms)
