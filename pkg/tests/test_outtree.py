import random

import pytest

from outbranch.digraph import Digraph
from outbranch.oracle import oracle_tl_max
from outbranch.outtree import OutTree, extend_to_branching, grow_tree, is_out_branching, subtree
from outbranch.search import SearchState

from graphs import random_triple, state_from

R, A, B, C, D = range(5)


def sample_tree():
    return OutTree.from_arcs(R, [(R, A), (A, B), (A, C)])


def test_leaf_bookkeeping():
    t = OutTree(0)
    assert t.leaf_count == 1 and t.leaves() == [0]
    t.add_arc(0, 1)
    assert t.leaf_count == 1 and t.internal() == [0]
    t.add_arc(0, 2)
    t.add_arc(1, 3)
    assert t.leaf_count == 2 and t.leaves() == [2, 3]
    with pytest.raises(ValueError):
        t.add_arc(3, 2)


def test_subtree_examples():
    t = sample_tree()
    sub = subtree(t, A)
    assert sub.root == A and sub.arcs() == [(A, B), (A, C)]
    assert subtree(t, R) == t
    leaf = subtree(t, B)
    assert len(leaf) == 1 and leaf.leaf_count == 1
    with pytest.raises(KeyError):
        subtree(t, D)


def test_grow_tree_chain_then_fan():
    # derived out-arcs a->b; b->c, b->d
    g = Digraph(5, [(R, A), (A, B), (B, C), (B, D)])
    st = SearchState(g, R)
    st.add_arc(R, A)
    part = grow_tree(st, A)
    assert part.arcs() == [(A, B), (B, C), (B, D)]
    assert part.leaf_count == 2
    assert st.tree.leaf_count == 2


def test_grow_tree_pure_path():
    g = Digraph(4, [(R, A), (A, B), (B, C)])
    st = SearchState(g, R)
    st.add_arc(R, A)
    part = grow_tree(st, A)
    assert part.arcs() == [(A, B), (B, C)]
    assert part.leaves() == [C]


def test_grow_tree_fan_only():
    g = Digraph(4, [(R, A), (A, B), (A, C)])
    st = SearchState(g, R)
    st.add_arc(R, A)
    part = grow_tree(st, A)
    assert sorted(part.leaves()) == [B, C]


def test_grow_tree_contract_violation():
    g = Digraph(2, [(R, A)])
    st = SearchState(g, R)
    st.add_arc(R, A)
    with pytest.raises(ValueError):
        grow_tree(st, A)


def test_grow_tree_properties_random():
    rng = random.Random(3)
    checked = 0
    while checked < 300:
        g, t, l_set = random_triple(rng)
        st = state_from(g, t, l_set)
        for x in st.free_leaves():
            if not st.dhat[x]:
                continue
            clone = st.clone()
            part = grow_tree(clone, x)
            last = part.internal()[-1] if part.internal() else x
            assert part.leaf_count >= 1
            # a final vertex with derived out-degree >= 2 yields >= 2 leaves
            if len(part.children[last]) >= 2:
                assert part.leaf_count >= 2
            assert clone.is_proper()
            checked += 1


def test_extend_examples():
    g = Digraph(4, [(R, A), (R, B), (A, C)])
    t = OutTree.from_arcs(R, [(R, A), (R, B)])
    ext = extend_to_branching(g, t)
    assert ext.arcs() == [(R, A), (R, B), (A, C)]
    assert sorted(ext.leaves()) == [B, C]

    full = OutTree.from_arcs(R, [(R, A), (R, B), (A, C)])
    assert extend_to_branching(g, full) == full

    path = Digraph(3, [(R, A), (A, B)])
    ext = extend_to_branching(path, OutTree.from_arcs(R, [(R, A)]))
    assert ext.arcs() == [(R, A), (A, B)] and ext.leaf_count == 1


def test_extend_impossible():
    g = Digraph(3, [(R, A), (C - 1, A)])
    assert extend_to_branching(g, OutTree(R)) is None


def test_extend_never_loses_leaves():
    rng = random.Random(11)
    done = 0
    while done < 300:
        g, t, _ = random_triple(rng)
        ext = extend_to_branching(g, t)
        best = oracle_tl_max(g, t)
        if ext is None:
            assert best == 0
            continue
        assert is_out_branching(g, ext)
        assert all(ext.parent[v] == p for v, p in t.parent.items())
        assert t.leaf_count <= ext.leaf_count <= best
        done += 1


def test_is_out_branching_rejects():
    g = Digraph(3, [(0, 1), (1, 2), (2, 1)])
    assert is_out_branching(g, OutTree.from_arcs(0, [(0, 1), (1, 2)]))
    assert not is_out_branching(g, OutTree.from_arcs(0, [(0, 1)]))
    assert not is_out_branching(Digraph(3, [(0, 1)]), OutTree.from_arcs(0, [(0, 1), (1, 2)]))
