"""Linear kernel for the k-leaf problem on acyclic digraphs with one source.

Two reduction rules remove in-degree-1 vertices:

* **A** -- an arc ``xy`` with ``d+(x) = d-(y) = 1`` is contracted (the merged
  vertex keeps the label ``x``);
* **B** -- for an arc ``xy`` with ``d+(x) >= 2``, ``d-(y) = 1`` and ``x`` not
  the source, ``x`` is deleted and every in-neighbour of ``x`` is joined to
  every out-neighbour of ``x``.

In the reduced digraph only the source and some of its out-neighbours keep
in-degree 1.  If it still has at least ``6.6 (k + 2)`` vertices, a greedy
bidominating set yields a branching with at least ``k`` leaves directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .digraph import Digraph, iter_bits
from .outtree import OutTree

__all__ = [
    "YES_WITH_WITNESS",
    "REDUCED",
    "ReductionRecord",
    "ReductionTrace",
    "KernelResult",
    "check_single_source",
    "reduce",
    "replay",
    "lift_witness",
    "greedy_cover",
    "bidominate",
    "branching_from_bidominating_set",
    "kernel_threshold_met",
    "kernelize",
]

YES_WITH_WITNESS = "YES_with_witness"
REDUCED = "REDUCED"


@dataclass(frozen=True)
class ReductionRecord:
    rule: str
    x: int
    y: int
    in_nbrs: tuple[int, ...]
    out_nbrs: tuple[int, ...]
    added: tuple[tuple[int, int], ...]
    removed: tuple[tuple[int, int], ...]


@dataclass
class ReductionTrace:
    """Rule applications in order, on original vertex labels.

    ``labels[i]`` is the original label of vertex ``i`` of the reduced digraph.
    """

    n_original: int
    records: list[ReductionRecord] = field(default_factory=list)
    labels: list[int] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def counts(self) -> dict[str, int]:
        a = sum(1 for r in self.records if r.rule == "A")
        return {"A": a, "B": len(self.records) - a}


@dataclass
class KernelResult:
    verdict: str
    k: int
    trace: ReductionTrace
    source: int
    reduced: Optional[Digraph] = None
    witness: Optional[OutTree] = None
    reduced_source: Optional[int] = None

    @property
    def n_star(self) -> int:
        return len(self.trace.labels)


def check_single_source(g: Digraph) -> Optional[int]:
    """The unique in-degree-0 vertex of an acyclic digraph, or ``None``."""
    if not g.is_acyclic():
        raise ValueError("digraph is not acyclic")
    sources = [v for v in range(g.n) if not g.in_adj[v]]
    return sources[0] if len(sources) == 1 else None


class _Labelled:
    """Adjacency on arbitrary vertex labels, for the reduction loop."""

    def __init__(self, g: Digraph):
        self.out = {v: set(g.out_adj[v]) for v in range(g.n)}
        self.inn = {v: set(g.in_adj[v]) for v in range(g.n)}

    def add(self, u: int, v: int) -> bool:
        if v in self.out[u]:
            return False
        self.out[u].add(v)
        self.inn[v].add(u)
        return True

    def drop(self, u: int, v: int) -> None:
        self.out[u].discard(v)
        self.inn[v].discard(u)

    def delete_vertex(self, x: int) -> None:
        for v in self.out.pop(x):
            self.inn[v].discard(x)
        for u in self.inn.pop(x):
            self.out[u].discard(x)

    def apply(self, rec: ReductionRecord) -> None:
        if rec.rule == "A":
            for u, v in rec.removed:
                self.drop(u, v)
            del self.out[rec.y], self.inn[rec.y]
            for u, v in rec.added:
                self.add(u, v)
        else:
            self.delete_vertex(rec.x)
            for u, v in rec.added:
                self.add(u, v)

    def to_digraph(self, labels: list[int]) -> Digraph:
        index = {v: i for i, v in enumerate(labels)}
        return Digraph(len(labels), ((index[u], index[v]) for u in labels for v in self.out[u]))


def _find_rule_a(w: _Labelled) -> Optional[ReductionRecord]:
    for x in sorted(w.out):
        if len(w.out[x]) != 1:
            continue
        (y,) = w.out[x]
        if len(w.inn[y]) != 1:
            continue
        outs = tuple(sorted(w.out[y]))
        return ReductionRecord(
            "A", x, y, (x,), outs,
            added=tuple((x, v) for v in outs),
            removed=((x, y),) + tuple((y, v) for v in outs),
        )
    return None


def _find_rule_b(w: _Labelled, s: int) -> Optional[ReductionRecord]:
    for x in sorted(w.out):
        if x == s or len(w.out[x]) < 2:
            continue
        ys = [y for y in sorted(w.out[x]) if len(w.inn[y]) == 1]
        if not ys:
            continue
        ins = tuple(sorted(w.inn[x]))
        outs = tuple(sorted(w.out[x]))
        added = tuple((u, v) for u in ins for v in outs if v not in w.out[u])
        removed = tuple((u, x) for u in ins) + tuple((x, v) for v in outs)
        return ReductionRecord("B", x, ys[0], ins, outs, added, removed)
    return None


def reduce(g: Digraph) -> tuple[Digraph, ReductionTrace]:
    """Apply rules A and B until neither applies.

    Rule A is exhausted before every single application of rule B.
    Returns the reduced digraph (vertices renumbered compactly) and the
    trace needed to lift solutions back.
    """
    s = check_single_source(g)
    if s is None:
        raise ValueError("digraph must have exactly one source")
    w = _Labelled(g)
    trace = ReductionTrace(g.n)
    while True:
        rec = _find_rule_a(w) or _find_rule_b(w, s)
        if rec is None:
            break
        w.apply(rec)
        trace.records.append(rec)
    trace.labels = sorted(w.out)
    return w.to_digraph(trace.labels), trace


def replay(g: Digraph, trace: ReductionTrace) -> Digraph:
    """Re-apply a trace to ``g``; reproduces the reduced digraph."""
    w = _Labelled(g)
    for rec in trace.records:
        w.apply(rec)
    return w.to_digraph(trace.labels)


def lift_witness(trace: ReductionTrace, t_star: OutTree) -> OutTree:
    """Turn an out-branching of the reduced digraph into one of the original.

    Undoes the rules in reverse.  A contracted arc ``xy`` is re-expanded
    with ``y`` taking over the children of the merged vertex.  A vertex
    removed by rule B goes back under the tree parent of its in-degree-1
    out-neighbour and re-adopts every child that hangs on an arc the rule
    had created.  The leaf count never decreases.
    """
    labels = trace.labels
    if len(t_star) != len(labels):
        raise ValueError("tree does not span the reduced digraph")
    root = labels[t_star.root]
    parent = {labels[v]: labels[p] for v, p in t_star.parent.items()}
    for rec in reversed(trace.records):
        if rec.rule == "A":
            if rec.y in parent or rec.y == root:
                raise ValueError(f"trace/tree mismatch at contraction of {rec.x}->{rec.y}")
            for c, p in list(parent.items()):
                if p == rec.x:
                    parent[c] = rec.y
            parent[rec.y] = rec.x
        else:
            if rec.x in parent or rec.y not in parent:
                raise ValueError(f"trace/tree mismatch at deletion of {rec.x}")
            added = set(rec.added)
            anchor = parent[rec.y]
            if anchor not in rec.in_nbrs:
                raise ValueError(f"trace/tree mismatch at deletion of {rec.x}")
            parent[rec.x] = anchor
            for c in rec.out_nbrs:
                if (parent.get(c), c) in added:
                    parent[c] = rec.x
    return OutTree.from_parents(root, parent)


def greedy_cover(g: Digraph, candidates, targets: int) -> list[int]:
    """Greedy covering of ``targets`` (a vertex mask) by out-neighbourhoods.

    Repeatedly takes the candidate covering the most uncovered targets,
    lowest index on ties.
    """
    outs = g.out_masks()
    pool = sorted(candidates)
    chosen: list[int] = []
    left = targets
    while left:
        best, best_deg = -1, 0
        for u in pool:
            deg = bin(outs[u] & left).count("1")
            if deg > best_deg:
                best, best_deg = u, deg
        if best < 0:
            raise ValueError("targets cannot be covered")
        chosen.append(best)
        pool.remove(best)
        left &= ~outs[best]
    return chosen


def _uncovered_by_source(g: Digraph, s: int) -> int:
    x_mask = sum(1 << v for v in g.out_adj[s] if len(g.in_adj[v]) == 1)
    full = (1 << g.n) - 1
    return full & ~(1 << s) & ~x_mask


def bidominate(g: Digraph, s: int) -> set[int]:
    """Bidominating set of the reduced digraph, always containing ``s``.

    The greedy cover skips the in-degree-1 out-neighbours of ``s``, which
    ``s`` itself dominates.
    """
    chosen = greedy_cover(g, range(g.n), _uncovered_by_source(g, s))
    return set(chosen) | {s}


def branching_from_bidominating_set(g: Digraph, s: int, dominators) -> OutTree:
    """Give every non-source vertex its lowest in-neighbour from ``dominators``."""
    dom = set(dominators)
    parent = {}
    for v in range(g.n):
        if v == s:
            continue
        ps = sorted(u for u in g.in_adj[v] if u in dom)
        if not ps:
            raise ValueError(f"vertex {v} is not dominated")
        parent[v] = ps[0]
    return OutTree.from_parents(s, parent)


def kernel_threshold_met(n_star: int, k: int) -> bool:
    """``n* >= 6.6 (k + 2)`` in exact integer arithmetic."""
    return 10 * n_star >= 66 * (k + 2)


def kernelize(g: Digraph, k: int) -> KernelResult:
    s = check_single_source(g)
    if s is None:
        raise ValueError("digraph must have exactly one source")
    dstar, trace = reduce(g)
    s_star = trace.labels.index(s)
    if not kernel_threshold_met(dstar.n, k):
        return KernelResult(REDUCED, k, trace, s, reduced=dstar, reduced_source=s_star)
    t_star = branching_from_bidominating_set(dstar, s_star, bidominate(dstar, s_star))
    if t_star.leaf_count < k:
        from .search import algo_b

        res = algo_b(dstar, k)
        if not res.decision:
            raise RuntimeError("large reduced instance without a k-leaf branching")
        t_star = res.witness
    witness = lift_witness(trace, t_star)
    return KernelResult(
        YES_WITH_WITNESS, k, trace, s, reduced=dstar, witness=witness, reduced_source=s_star
    )
