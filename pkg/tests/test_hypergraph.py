import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcpp.errors import InvalidJoinTree, NotAlphaAcyclic
from mcpp.hypergraph import (
    Hypergraph,
    JoinTree,
    all_join_trees,
    build_join_tree,
    downward_closure,
    is_alpha_acyclic,
    is_downward_closed,
)

EDGE = Hypergraph((1, 2), ((1, 2),))
PATH3 = Hypergraph((1, 2, 3), ((1, 2), (2, 3)))
TRI = Hypergraph((1, 2, 3), ((1, 2), (2, 3), (1, 3)))


def test_acyclicity_examples():
    assert is_alpha_acyclic(EDGE)[0]
    ok, tree = is_alpha_acyclic(PATH3)
    assert ok and tree.tree_edges == (((1, 2), (2, 3)),)
    ok, residual = is_alpha_acyclic(TRI)
    assert not ok and residual.edge_set == TRI.edge_set
    assert all_join_trees(TRI) == []


def test_join_tree_examples():
    t = build_join_tree(EDGE)
    assert t.nodes == ((1, 2),) and t.tree_edges == ()
    star = Hypergraph((0, 1, 2, 3, 4), tuple((0, k) for k in range(1, 5)))
    t = build_join_tree(star)
    assert len(t.tree_edges) == 3 and t.verify(star)
    with pytest.raises(NotAlphaAcyclic):
        build_join_tree(TRI)


def test_join_tree_on_disconnected_hypergraph():
    H = Hypergraph((1, 2, 3, 4, 5), ((1, 2), (3, 4), (4, 5)))
    assert build_join_tree(H).verify(H)


def test_invalid_join_tree_rejected():
    H = Hypergraph((1, 2, 3, 4), ((1, 2), (2, 3), (3, 4), (1, 4)))
    bad = JoinTree(H.edges, (((1, 2), (2, 3)), ((2, 3), (3, 4)), ((1, 4), (3, 4))))
    assert not bad.verify(H)
    with pytest.raises(InvalidJoinTree):
        bad.check(H)


def test_downward_closed_examples():
    assert is_downward_closed(TRI)
    e3 = Hypergraph((1, 2, 3), ((1, 2, 3),))
    assert not is_downward_closed(e3)
    full = downward_closure(e3)
    assert len(full.edges) == 4 and is_downward_closed(full)
    assert downward_closure(full) == full


@st.composite
def hypergraphs(draw, max_edges=5):
    n = draw(st.integers(2, 5))
    vs = tuple(range(1, n + 1))
    subsets = [c for k in range(2, n + 1) for c in itertools.combinations(vs, k)]
    edges = draw(st.lists(st.sampled_from(subsets), max_size=max_edges, unique=True))
    return Hypergraph(vs, tuple(edges))


@settings(max_examples=150, deadline=None)
@given(hypergraphs())
def test_gyo_agrees_with_exhaustive_search(H):
    ok, witness = is_alpha_acyclic(H)
    trees = all_join_trees(H)
    assert ok == bool(trees)
    if ok:
        assert witness.verify(H)


@settings(max_examples=100, deadline=None)
@given(hypergraphs())
def test_closure_idempotent(H):
    c = downward_closure(H)
    assert is_downward_closed(c) and downward_closure(c) == c
    assert H.is_subhypergraph_of(c)
