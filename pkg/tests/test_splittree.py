import pytest
from hypothesis import given, settings

from dhkit import oracles, patterns
from dhkit.graph import Graph, is_connected
from dhkit.splittree import (
    CLIQUE, LEAF, STAR, CographEdge, Fail, SplitTree, SplitTreeError, StarPair,
    atfree_condition, build_split_tree, check_invariants, class_condition, cograph_condition,
    is_cutvertex_leaf, parse_tree, realize_adjacent, realized_graph, serialize_tree,
    validate_split_tree,
)
from dhkit.workbench import gen_instance

from .test_graph import graphs


def connected_instance(n, seed):
    while True:
        g = gen_instance(n, seed)
        if is_connected(g):
            return g
        seed += 1000


def test_p4_tree_shape():
    t = build_split_tree(patterns.P4)
    assert t.kind[4:] == (STAR, STAR)
    assert t.internal_edges() == [(4, 5)]
    # centres sit on the leaves of the two middle path vertices
    assert t.center == {4: 1, 5: 2}
    assert not realize_adjacent(t, 0, 3)
    assert realize_adjacent(t, 1, 2)


def test_bull_tree_shape():
    t = build_split_tree(patterns.BULL)
    assert [t.kind[x] for x in t.internal_nodes()] == [STAR, CLIQUE, STAR]
    assert t.internal_edges() == [(5, 6), (6, 7)]
    # each star's centre is the triangle vertex carrying the pendant, not the clique
    assert t.center == {5: 1, 7: 3}
    assert not realize_adjacent(t, 0, 4)
    rep = validate_split_tree(t, patterns.BULL)
    assert rep.ok and not rep.skipped


def test_clique_is_one_node():
    for k in range(3, 8):
        t = build_split_tree(patterns.clique(k))
        assert list(t.internal_nodes()) == [k] and t.kind[k] == CLIQUE
        assert len(t.nbrs[k]) == k


def test_non_dh_input_raises():
    with pytest.raises(SplitTreeError):
        build_split_tree(patterns.C5)


def test_validation_examples():
    assert validate_split_tree(build_split_tree(patterns.P4), patterns.P4).ok
    # two adjacent clique nodes: reduction (a) must be reported
    t = SplitTree(4, [LEAF] * 4 + [CLIQUE, CLIQUE], [[4], [4], [5], [5], [0, 1, 5], [2, 3, 4]], {})
    assert any("reduction (a)" in f for f in check_invariants(t))
    assert any("reduction (a)" in f for f in validate_split_tree(t, patterns.clique(4)).failures)
    # a star centre facing an extremity: reduction (b)
    t = SplitTree(4, [LEAF] * 4 + [STAR, STAR], [[4], [4], [5], [5], [0, 1, 5], [2, 3, 4]], {4: 5, 5: 2})
    assert any("reduction (b)" in f for f in check_invariants(t))
    wrong = validate_split_tree(build_split_tree(patterns.P4), patterns.cycle(4))
    assert any("adjacency" in f for f in wrong.failures)


def test_large_trees_skip_oracle_but_keep_adjacency():
    g = connected_instance(14, 3)
    rep = validate_split_tree(build_split_tree(g), g)
    assert rep.ok and rep.skipped


def test_cograph_condition_examples():
    t = build_split_tree(patterns.cycle(4))
    assert cograph_condition(t) == t.internal_edges()[0]
    assert t.center[4] == 5 and t.center[5] == 4
    assert cograph_condition(build_split_tree(patterns.P4)) is None
    k5 = build_split_tree(patterns.clique(5))
    assert cograph_condition(k5) == min(k5.edges())
    assert cograph_condition(build_split_tree(patterns.K1)) == (0, 0)


def test_atfree_condition_examples():
    assert atfree_condition(build_split_tree(patterns.P4)) == [0, 4, 5, 2]
    assert atfree_condition(build_split_tree(patterns.BULL)) is not None
    spider = Graph(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
    assert oracles.is_dh_by_forbidden(spider) and oracles.has_asteroidal_triple(spider)
    assert atfree_condition(build_split_tree(spider)) is None


def test_class_condition_examples():
    w = class_condition(build_split_tree(patterns.P4))
    assert w == StarPair(4, 5, None)
    w = class_condition(build_split_tree(patterns.BULL))
    assert w == StarPair(5, 7, 6)
    assert isinstance(class_condition(build_split_tree(patterns.P5)), Fail)
    assert isinstance(class_condition(build_split_tree(patterns.clique(4))), CographEdge)


def test_cutvertex_leaves():
    t = build_split_tree(patterns.BULL)
    assert [v for v in range(5) if is_cutvertex_leaf(t, v)] == [1, 3]


def test_dot_output_for_bull():
    dot = serialize_tree(build_split_tree(patterns.BULL), "dot")
    assert dot.count("shape=box") == 5
    assert dot.count("shape=circle") == 3
    assert dot.count('label="S"') == 2 and dot.count('label="K"') == 1
    assert dot.count("dir=") == 2


def test_json_roundtrip_is_byte_identical():
    for g in (patterns.K1, patterns.P4, patterns.BULL, patterns.clique(6), connected_instance(30, 1)):
        text = serialize_tree(build_split_tree(g))
        assert serialize_tree(parse_tree(text)) == text
    assert serialize_tree(build_split_tree(patterns.K1)) == (
        '{"n":1,"nodes":[{"id":0,"kind":"leaf","neighbors":[],"vertex":0}]}')
    with pytest.raises(ValueError):
        serialize_tree(build_split_tree(patterns.P4), "xml")


@given(graphs(max_n=10))
@settings(max_examples=250, deadline=None)
def test_random_dh_graphs_validate(g):
    if g.n == 0 or not is_connected(g) or not oracles.is_dh_by_forbidden(g):
        return
    t = build_split_tree(g)
    assert validate_split_tree(t, g).ok
    assert realized_graph(t) == g
    assert (cograph_condition(t) is not None) == oracles.is_cograph(g)
    assert (atfree_condition(t) is not None) == (not oracles.has_asteroidal_triple(g))
    assert (not isinstance(class_condition(t), Fail)) == oracles.in_class_by_forbidden(g)


def test_generated_instances_keep_tree_canonical_under_relabelling():
    # the tree is a function of the graph, not of the pruning order
    g = connected_instance(12, 9)
    perm = list(reversed(range(12)))
    h = Graph(12, [(perm[u], perm[v]) for u, v in g.edges()])
    tg, th = build_split_tree(g), build_split_tree(h)
    assert sorted(tg.kind) == sorted(th.kind)
    assert validate_split_tree(th, h).ok
