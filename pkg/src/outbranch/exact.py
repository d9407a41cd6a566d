"""Exact maximum-leaf out-branching in O(1.9973^n).

Stage 1 asks the 3.72^k decision procedure whether ``ceil(0.526 n)`` leaves
are possible; if not, a binary search with the same procedure pins the
optimum.  Otherwise Stage 2 enumerates leaf sets ``S`` of growing size and
tests whether removing their out-arcs still leaves an out-branching.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .digraph import Digraph, out_branching_root_component
from .outtree import OutTree, extend_to_branching
from .search import algo_b

__all__ = [
    "LEAF_FRACTION",
    "ExactOutcome",
    "Stage2Refused",
    "adml",
    "leaves_feasible",
    "stage_one_threshold",
]

LEAF_FRACTION = 0.526


def stage_one_threshold(n: int) -> int:
    # exact ceil(0.526 n) without float rounding surprises
    return -(-526 * n // 1000)


class Stage2Refused(RuntimeError):
    """Stage 2 was needed but the digraph exceeds the configured size cap."""

    def __init__(self, n: int, lower_bound: int, cap: int):
        self.n = n
        self.lower_bound = lower_bound
        super().__init__(
            f"n={n} exceeds the subset-enumeration cap {cap}; max leaves >= {lower_bound}"
        )


@dataclass
class ExactOutcome:
    max_leaves: int
    witness: Optional[OutTree] = None
    stage_reached: int = 1
    timings: dict = field(default_factory=dict)
    solver_calls: int = 0


def _cut_leaves(g: Digraph, s: Iterable[int]) -> Digraph:
    h = g.copy()
    for x in s:
        for y in list(h.out_adj[x]):
            h.remove_arc(x, y)
    return h


def leaves_feasible(g: Digraph, s: Iterable[int]) -> bool:
    """Does ``g`` minus all out-arcs of ``s`` still have an out-branching?"""
    return out_branching_root_component(_cut_leaves(g, s)) is not None


def _branching_with_leaves(g: Digraph, s) -> Optional[OutTree]:
    h = _cut_leaves(g, s)
    comp = out_branching_root_component(h)
    if comp is None:
        return None
    return extend_to_branching(h, OutTree(comp[0]))


def adml(g: Digraph, max_stage2_n: Optional[int] = None) -> ExactOutcome:
    """Maximum number of leaves of an out-branching of ``g`` (0 if none).

    ``max_stage2_n`` caps the vertex count for which the subset enumeration
    of Stage 2 may run; above it :class:`Stage2Refused` is raised.
    """
    if g.n < 1:
        raise ValueError("empty digraph")
    n = g.n
    out = ExactOutcome(0)
    t0 = time.perf_counter()
    k = stage_one_threshold(n)
    first = algo_b(g, k)
    out.solver_calls += 1
    if not first.decision:
        if out_branching_root_component(g) is None:
            out.timings["stage1"] = time.perf_counter() - t0
            return out
        # invariant: lo is achievable, hi + 1 is not
        lo, hi = 1, k - 1
        best = None
        while lo < hi:
            mid = (lo + hi + 1) // 2
            res = algo_b(g, mid)
            out.solver_calls += 1
            if res.decision:
                lo, best = mid, res.witness
            else:
                hi = mid - 1
        if best is None:
            comp = out_branching_root_component(g)
            best = extend_to_branching(g, OutTree(comp[0]))
        out.max_leaves = lo
        out.witness = best
        out.timings["stage1"] = time.perf_counter() - t0
        return out

    out.timings["stage1"] = time.perf_counter() - t0
    if max_stage2_n is not None and n > max_stage2_n:
        raise Stage2Refused(n, k, max_stage2_n)
    out.stage_reached = 2
    t1 = time.perf_counter()
    best_k, best_set = k, None
    for size in range(k + 1, n + 1):
        found = None
        for s in combinations(range(n), size):
            if leaves_feasible(g, s):
                found = s
                break
        if found is None:
            break
        assert leaves_feasible(g, found[1:]), "feasibility must survive dropping a leaf"
        best_k, best_set = size, found
    out.max_leaves = best_k
    if best_set is None:
        out.witness = first.witness
    else:
        out.witness = _branching_with_leaves(g, best_set)
    out.timings["stage2"] = time.perf_counter() - t1
    return out
