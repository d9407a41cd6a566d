"""Rooted out-trees inside a digraph.

An :class:`OutTree` records the parent of every non-root vertex, the
children of every vertex in insertion order, and the global order in which
vertices joined the tree.  The branching solvers pick their next pivot from
the end of that order.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional

from .digraph import Digraph, derived_masks, iter_bits

__all__ = ["OutTree", "subtree", "grow_tree", "extend_to_branching", "is_out_branching"]


class OutTree:
    __slots__ = ("root", "parent", "children", "order", "vertex_mask", "_n_leaves")

    def __init__(self, root: int):
        self.root = root
        self.parent: dict[int, int] = {}
        self.children: dict[int, list[int]] = {root: []}
        self.order: list[int] = [root]
        self.vertex_mask = 1 << root
        self._n_leaves = 1

    @classmethod
    def from_arcs(cls, root: int, arcs: Iterable[tuple[int, int]]) -> "OutTree":
        """Build a tree from arcs given in any order (parents first not required)."""
        pending: dict[int, list[int]] = {}
        for u, v in arcs:
            pending.setdefault(u, []).append(v)
        t = cls(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in pending.pop(u, []):
                t.add_arc(u, v)
                queue.append(v)
        if pending:
            raise ValueError("arcs do not form an out-tree rooted at %d" % root)
        return t

    @classmethod
    def from_parents(cls, root: int, parent: dict[int, int]) -> "OutTree":
        return cls.from_arcs(root, ((p, v) for v, p in sorted(parent.items())))

    def copy(self) -> "OutTree":
        t = OutTree.__new__(OutTree)
        t.root = self.root
        t.parent = dict(self.parent)
        t.children = {v: list(ch) for v, ch in self.children.items()}
        t.order = list(self.order)
        t.vertex_mask = self.vertex_mask
        t._n_leaves = self._n_leaves
        return t

    def __contains__(self, v: int) -> bool:
        return (self.vertex_mask >> v) & 1 == 1

    def __len__(self) -> int:
        return len(self.order)

    def add_arc(self, u: int, v: int) -> None:
        if u not in self:
            raise ValueError(f"tail {u} is not in the tree")
        if v in self:
            raise ValueError(f"head {v} is already in the tree")
        # a leaf tail swaps places with its new child; otherwise one more leaf
        if self.children[u]:
            self._n_leaves += 1
        self.children[u].append(v)
        self.children[v] = []
        self.parent[v] = u
        self.order.append(v)
        self.vertex_mask |= 1 << v

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    @property
    def leaf_count(self) -> int:
        return self._n_leaves

    def leaves(self) -> list[int]:
        """Leaves in insertion order."""
        return [v for v in self.order if not self.children[v]]

    def internal(self) -> list[int]:
        return [v for v in self.order if self.children[v]]

    def arcs(self) -> list[tuple[int, int]]:
        return sorted((p, v) for v, p in self.parent.items())

    def vertices(self) -> list[int]:
        return list(self.order)

    def child_masks(self, n: int) -> list[int]:
        masks = [0] * n
        for v, p in self.parent.items():
            masks[p] |= 1 << v
        return masks

    def ancestors(self, v: int):
        """Proper ancestors of ``v``, nearest first."""
        while v in self.parent:
            v = self.parent[v]
            yield v

    def subtree_mask(self, x: int) -> int:
        mask = 0
        stack = [x]
        while stack:
            v = stack.pop()
            mask |= 1 << v
            stack.extend(self.children[v])
        return mask

    def subtree_leaves(self, x: int) -> list[int]:
        out = []
        stack = [x]
        while stack:
            v = stack.pop()
            ch = self.children[v]
            if ch:
                stack.extend(ch)
            else:
                out.append(v)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, OutTree):
            return NotImplemented
        return self.root == other.root and self.parent == other.parent

    def __repr__(self) -> str:
        return f"OutTree(root={self.root}, size={len(self)}, leaves={self.leaf_count})"


def subtree(t: OutTree, x: int) -> OutTree:
    """The maximal subtree of ``t`` rooted at ``x``."""
    if x not in t:
        raise KeyError(f"vertex {x} is not in the tree")
    sub = OutTree(x)
    stack = [x]
    while stack:
        u = stack.pop()
        for v in t.children[u]:
            sub.add_arc(u, v)
            stack.append(v)
    # keep the original relative insertion order
    rank = {v: i for i, v in enumerate(t.order)}
    sub.order.sort(key=rank.__getitem__)
    return sub


def grow_tree(state, x: int) -> OutTree:
    """Grow the tree of ``state`` from the free leaf ``x``.

    Follows the unique derived-graph out-arc while there is exactly one,
    then attaches every out-arc of the last vertex reached.  The state's
    tree is extended in place; the grown part (rooted at ``x``) is
    returned.
    """
    tree = state.tree
    if x not in tree or not tree.is_leaf(x):
        raise ValueError(f"{x} is not a leaf of the tree")
    if state.in_l(x):
        raise ValueError(f"{x} is constrained to be a leaf")
    if not state.dhat[x]:
        raise ValueError(f"{x} has no out-arc in the derived graph")
    cur = x
    while True:
        out = state.dhat[cur]
        if out and out & (out - 1) == 0:
            y = out.bit_length() - 1
            state.add_arc(cur, y)
            cur = y
            continue
        for y in iter_bits(out):
            state.add_arc(cur, y)
        break
    return subtree(tree, x)


def extend_to_branching(
    g: Digraph, t: OutTree, leaves: Iterable[int] = ()
) -> Optional[OutTree]:
    """Extend ``t`` to a spanning out-tree of ``g`` keeping its root and arcs.

    Breadth-first search in the derived graph of ``(t, leaves)`` attaches each
    newly reached vertex by its discovery arc, so vertices of ``leaves`` stay
    leaves and the leaf count never drops.  Returns ``None`` when no such
    extension exists.
    """
    l_mask = 0
    for v in leaves:
        l_mask |= 1 << v
    dhat = derived_masks(g.out_masks(), t.vertex_mask, t.child_masks(g.n), l_mask)
    out = t.copy()
    queue = deque(t.order)
    while queue:
        u = queue.popleft()
        for v in iter_bits(dhat[u] & ~out.vertex_mask):
            out.add_arc(u, v)
            queue.append(v)
    if len(out) != g.n:
        return None
    return out


def is_out_branching(g: Digraph, t: OutTree) -> bool:
    """True if ``t`` is a spanning out-tree of ``g`` using only arcs of ``g``."""
    if len(t) != g.n or t.root >= g.n:
        return False
    if t.root in t.parent:
        return False
    for v, p in t.parent.items():
        if not g.has_arc(p, v):
            return False
    for v in range(g.n):
        seen = set()
        while v != t.root:
            if v in seen or v not in t.parent:
                return False
            seen.add(v)
            v = t.parent[v]
    return True
