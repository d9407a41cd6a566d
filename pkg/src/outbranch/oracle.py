"""Brute-force ground truth for small digraphs.

Every out-branching is enumerated by choosing an in-arc for each non-root
vertex and rejecting choices that close a cycle.  Exponential; meant for
``n <= 10`` and for checking the real solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .digraph import Digraph
from .outtree import OutTree

__all__ = [
    "OracleBudget",
    "BudgetExceeded",
    "iter_out_branchings",
    "count_out_branchings",
    "oracle_max_leaves",
    "oracle_tl_max",
]


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class OracleBudget:
    max_vertices: int = 10
    max_arborescences: int = 20_000_000
    overflow: bool = False


def _check_size(g: Digraph, budget: OracleBudget) -> None:
    if g.n > budget.max_vertices:
        raise BudgetExceeded(f"oracle limited to {budget.max_vertices} vertices, got {g.n}")


def iter_out_branchings(
    g: Digraph,
    root: int,
    fixed: Optional[dict[int, int]] = None,
    no_children: Iterable[int] = (),
    budget: Optional[OracleBudget] = None,
) -> Iterator[dict[int, int]]:
    """Yield parent maps of all out-branchings of ``g`` rooted at ``root``.

    ``fixed`` pins parents of some vertices; vertices in ``no_children`` are
    never used as parents.  The same dict object is yielded each time.
    """
    budget = budget or OracleBudget()
    parent: dict[int, int] = dict(fixed or {})
    banned = set(no_children)
    free = [v for v in range(g.n) if v != root and v not in parent]
    options = [sorted(u for u in g.in_adj[v] if u not in banned) for v in free]
    produced = 0

    def closes_cycle(v: int) -> bool:
        u = parent[v]
        steps = 0
        while u != root and u in parent:
            if u == v:
                return True
            u = parent[u]
            steps += 1
            if steps > g.n:
                return True
        return u == v

    # fixed parents may themselves be inconsistent
    for v in list(parent):
        if closes_cycle(v):
            return

    def rec(i: int):
        nonlocal produced
        if i == len(free):
            produced += 1
            if produced > budget.max_arborescences:
                budget.overflow = True
                raise BudgetExceeded("too many out-branchings to enumerate")
            yield parent
            return
        v = free[i]
        for u in options[i]:
            parent[v] = u
            if not closes_cycle(v):
                yield from rec(i + 1)
        parent.pop(v, None)

    yield from rec(0)


def _leaves(n: int, parent: dict[int, int]) -> int:
    return n - len(set(parent.values()))


def count_out_branchings(g: Digraph, root: int) -> int:
    return sum(1 for _ in iter_out_branchings(g, root))


def oracle_max_leaves(
    g: Digraph, budget: Optional[OracleBudget] = None
) -> tuple[int, Optional[OutTree]]:
    """Maximum leaf count over all out-branchings (0, None if there are none)."""
    budget = budget or OracleBudget()
    _check_size(g, budget)
    if g.n == 1:
        return 1, OutTree(0)
    best, best_tree = 0, None
    for root in range(g.n):
        for parent in iter_out_branchings(g, root, budget=budget):
            leaves = _leaves(g.n, parent)
            if leaves > best:
                best = leaves
                best_tree = (root, dict(parent))
    if best_tree is None:
        return 0, None
    return best, OutTree.from_parents(*best_tree)


def oracle_tl_max(
    g: Digraph, t: OutTree, l: Iterable[int] = (), budget: Optional[OracleBudget] = None
) -> int:
    """Maximum leaf count over out-branchings that contain ``t`` and leave ``l`` as leaves."""
    budget = budget or OracleBudget()
    _check_size(g, budget)
    l_set = set(l)
    if any(v in t and not t.is_leaf(v) for v in l_set):
        raise ValueError("leaf set contains an internal vertex of the tree")
    for v, p in t.parent.items():
        if not g.has_arc(p, v):
            raise ValueError(f"tree arc {p}->{v} is not in the digraph")
    if g.n == 1:
        return 1
    best = 0
    for parent in iter_out_branchings(g, t.root, fixed=t.parent, no_children=l_set, budget=budget):
        best = max(best, _leaves(g.n, parent))
    return best
