"""Simple digraphs, strong components and reachability.

Vertices are the integers ``0 .. n-1``.  Besides the adjacency sets the
graph lazily builds per-vertex bitmasks (Python ints) which the solvers use
for fast reachability on small and medium instances.
"""

from __future__ import annotations

from typing import Callable, Iterable, Optional

__all__ = [
    "Digraph",
    "strong_components",
    "out_branching_root_component",
    "reachable_set",
    "derived_graph",
    "reach_mask",
    "iter_bits",
]


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def reach_mask(out_masks, start: int) -> int:
    """Forward reachability over bitmask adjacency, returned as a mask."""
    seen = 1 << start
    frontier = seen
    while frontier:
        new = 0
        while frontier:
            low = frontier & -frontier
            new |= out_masks[low.bit_length() - 1]
            frontier ^= low
        frontier = new & ~seen
        seen |= frontier
    return seen


class Digraph:
    """Mutable simple digraph on vertices ``0 .. n-1``.

    Self-loops are rejected; adding an existing arc is a no-op.
    """

    __slots__ = ("n", "out_adj", "in_adj", "_m", "_masks")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self.out_adj: list[set[int]] = [set() for _ in range(n)]
        self.in_adj: list[set[int]] = [set() for _ in range(n)]
        self._m = 0
        self._masks = None
        for u, v in arcs:
            self.add_arc(u, v)

    @classmethod
    def from_masks(cls, out_masks) -> "Digraph":
        g = cls(len(out_masks))
        for u, mask in enumerate(out_masks):
            for v in iter_bits(mask):
                g.add_arc(u, v)
        return g

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return self.n

    def _check(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range [0, {self.n})")

    def add_arc(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if v in self.out_adj[u]:
            return False
        self.out_adj[u].add(v)
        self.in_adj[v].add(u)
        self._m += 1
        self._masks = None
        return True

    def remove_arc(self, u: int, v: int) -> None:
        self.out_adj[u].remove(v)
        self.in_adj[v].remove(u)
        self._m -= 1
        self._masks = None

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.out_adj[u]

    def arcs(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in range(self.n) for v in self.out_adj[u])

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def out_masks(self) -> tuple[int, ...]:
        if self._masks is None:
            outs = tuple(sum(1 << v for v in nb) for nb in self.out_adj)
            ins = tuple(sum(1 << u for u in nb) for nb in self.in_adj)
            self._masks = (outs, ins)
        return self._masks[0]

    def in_masks(self) -> tuple[int, ...]:
        self.out_masks()
        return self._masks[1]

    def copy(self) -> "Digraph":
        g = Digraph(self.n)
        g.out_adj = [set(s) for s in self.out_adj]
        g.in_adj = [set(s) for s in self.in_adj]
        g._m = self._m
        return g

    def is_acyclic(self) -> bool:
        indeg = [len(s) for s in self.in_adj]
        stack = [v for v in range(self.n) if indeg[v] == 0]
        seen = 0
        while stack:
            u = stack.pop()
            seen += 1
            for v in self.out_adj[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    stack.append(v)
        return seen == self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.out_adj == other.out_adj

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def strong_components(g: Digraph) -> list[list[int]]:
    """Strongly connected components in reverse topological order.

    Iterative Tarjan; the first component returned is a sink of the
    condensation, the last one a source.
    """
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    succ = [sorted(s) for s in g.out_adj]

    for start in range(n):
        if index[start] != -1:
            continue
        work = [(start, 0)]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def out_branching_root_component(g: Digraph) -> Optional[list[int]]:
    """The unique strong component without incoming arcs, if there is one.

    A digraph has an out-branching exactly when such a component exists,
    and then every vertex of it can serve as the root.
    """
    if g.n == 0:
        return None
    comps = strong_components(g)
    comp_of = [0] * g.n
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    has_in = [False] * len(comps)
    for u in range(g.n):
        for v in g.out_adj[u]:
            if comp_of[u] != comp_of[v]:
                has_in[comp_of[v]] = True
    sources = [comps[i] for i in range(len(comps)) if not has_in[i]]
    if len(sources) != 1:
        return None
    return sources[0]


def reachable_set(
    g: Digraph,
    start: int,
    forbidden: Optional[Callable[[int, int], bool]] = None,
) -> set[int]:
    """Vertices reachable from ``start``, skipping arcs where ``forbidden(u, v)``."""
    g._check(start)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in g.out_adj[u]:
            if v in seen or (forbidden is not None and forbidden(u, v)):
                continue
            seen.add(v)
            stack.append(v)
    return seen


def derived_masks(out_masks, tree_mask: int, child_masks, l_mask: int) -> list[int]:
    """Bitmask form of the derived graph.

    Arcs out of ``l_mask`` vertices are dropped, and an arc into a tree
    vertex survives only if it is a tree arc (``child_masks[u]``).
    """
    keep = ~tree_mask
    dhat = [(out & keep) | ch for out, ch in zip(out_masks, child_masks)]
    for v in iter_bits(l_mask):
        dhat[v] = 0
    return dhat


def derived_graph(g: Digraph, t, l: Iterable[int] = ()) -> Digraph:
    """The derived graph for the pair (out-tree ``t``, leaf-constraint set ``l``).

    Starts from ``g``, deletes every arc leaving a vertex of ``l`` and every
    non-tree arc entering a vertex of ``t``.
    """
    l_set = set(l)
    bad = [v for v in l_set if v in t and not t.is_leaf(v)]
    if bad:
        raise ValueError(f"internal tree vertices in leaf set: {sorted(bad)}")
    child_masks = [0] * g.n
    for v, p in t.parent.items():
        child_masks[p] |= 1 << v
    l_mask = sum(1 << v for v in l_set)
    return Digraph.from_masks(derived_masks(g.out_masks(), t.vertex_mask, child_masks, l_mask))
