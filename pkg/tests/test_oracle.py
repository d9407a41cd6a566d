import itertools
import random

import pytest

from outbranch.digraph import Digraph
from outbranch.oracle import (
    BudgetExceeded,
    OracleBudget,
    count_out_branchings,
    iter_out_branchings,
    oracle_max_leaves,
    oracle_tl_max,
)
from outbranch.outtree import OutTree, is_out_branching

from graphs import all_digraphs, random_digraph


def product_count(g, root):
    """Count parent choices whose parent graph has no cycle."""
    others = [v for v in range(g.n) if v != root]
    total = 0
    for choice in itertools.product(*(sorted(g.in_adj[v]) for v in others)):
        parent = dict(zip(others, choice))
        acyclic = True
        for v in others:
            seen = set()
            while v != root:
                if v in seen:
                    acyclic = False
                    break
                seen.add(v)
                v = parent[v]
            if not acyclic:
                break
        total += acyclic
    return total


def test_examples():
    star = Digraph(5, [(0, i) for i in range(1, 5)])
    assert oracle_max_leaves(star)[0] == 4
    path = Digraph(5, [(i, i + 1) for i in range(4)])
    assert oracle_max_leaves(path)[0] == 1
    k3 = Digraph(3, [(u, v) for u in range(3) for v in range(3) if u != v])
    best, witness = oracle_max_leaves(k3)
    assert best == 2 and is_out_branching(k3, witness) and witness.leaf_count == 2


def test_no_branching_and_single_vertex():
    assert oracle_max_leaves(Digraph(2)) == (0, None)
    best, t = oracle_max_leaves(Digraph(1))
    assert best == 1 and len(t) == 1


def test_counts_match_product_enumeration():
    for n in range(1, 5):
        for g in all_digraphs(n):
            for root in range(n):
                assert count_out_branchings(g, root) == product_count(g, root)
    rng = random.Random(5)
    for _ in range(40):
        g = random_digraph(rng, 5, 0.5)
        for root in range(5):
            assert count_out_branchings(g, root) == product_count(g, root)


def test_enumeration_yields_distinct_branchings():
    g = Digraph(4, [(u, v) for u in range(4) for v in range(4) if u != v])
    seen = set()
    for parent in iter_out_branchings(g, 0):
        key = tuple(sorted(parent.items()))
        assert key not in seen
        seen.add(key)
        assert is_out_branching(g, OutTree.from_parents(0, parent))
    assert len(seen) == 16  # Cayley: 4^(4-2)


def test_tl_examples():
    g = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    spanning = OutTree.from_arcs(0, [(0, 1), (0, 2), (1, 3)])
    assert oracle_tl_max(g, spanning, {2, 3}) == 2
    with pytest.raises(ValueError):
        oracle_tl_max(g, spanning, {1})  # internal tree vertex: improper argument
    g2 = Digraph(3, [(0, 1), (1, 2)])
    assert oracle_tl_max(g2, OutTree.from_arcs(0, [(0, 1)]), {1}) == 0
    root_only = OutTree(0)
    rooted_best = max(
        len(range(g.n)) - len(set(p.values())) for p in iter_out_branchings(g, 0)
    )
    assert oracle_tl_max(g, root_only) == rooted_best == 2


def test_tl_rejects_improper():
    g = Digraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        oracle_tl_max(g, OutTree.from_arcs(0, [(0, 1)]), {0})


def test_budget():
    big = Digraph(11)
    with pytest.raises(BudgetExceeded):
        oracle_max_leaves(big)
    k5 = Digraph(5, [(u, v) for u in range(5) for v in range(5) if u != v])
    budget = OracleBudget(max_arborescences=10)
    with pytest.raises(BudgetExceeded):
        oracle_max_leaves(k5, budget)
    assert budget.overflow
