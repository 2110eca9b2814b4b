from fractions import Fraction

import pytest

from superspecial.brandt import brandt_matrix
from superspecial.graphs import (
    Edge,
    WeightedGraph,
    build_big,
    build_enhanced,
    build_little,
    graph_to_dict,
    is_connected,
    strip_half_edges,
    to_dot,
    validate_weight_axioms,
)
from superspecial.hermitian import class_set
from superspecial.quat import ConstructionError


def test_big_graph_matches_brandt_p5():
    cs = class_set(5, 1)
    big = build_big(cs, 2)
    assert big.n_vertices == 1
    assert big.adjacency() == [[3]]
    assert not big.has_opposites
    cs2 = class_set(5, 2)
    big2 = build_big(cs2, 2)
    assert big2.adjacency() == brandt_matrix(cs2, 2).as_int_rows()


def test_big_graph_row_sums():
    cs = class_set(7, 2)
    big = build_big(cs, 3)
    target = (3 + 1) * (9 + 1)
    assert all(sum(row) == target for row in big.adjacency())


def test_little_graph_axioms_and_weights():
    for p, g, ell in ((5, 1, 2), (5, 2, 2), (7, 2, 2), (11, 1, 2), (5, 2, 3)):
        cs = class_set(p, g)
        little = build_little(cs, ell)
        validate_weight_axioms(little)
        ad = little.adjacency()
        assert ad == [list(r) for r in zip(*ad)], "Ad(little) must be symmetric"
        adw = little.weighted_adjacency()
        B = brandt_matrix(cs, ell)
        assert [[Fraction(v) for v in row] for row in B.entries] == adw
        # weights divide the origin vertex weight
        for e in little.edges:
            assert little.vertex_weights[e.origin] % e.weight == 0


def test_little_p5_ell2_single_half_edge():
    # three kernels form one orbit under the six units; stabilizer {+-1}
    cs = class_set(5, 1)
    little = build_little(cs, 2)
    assert len(little.edges) == 1
    assert little.edges[0].weight == 2
    assert little.half_edge_indices() == [0]
    stripped = strip_half_edges(little)
    assert len(stripped.edges) == 0
    assert stripped.kind == "little*"


def test_strip_half_edges_noop_and_reindex():
    cs = class_set(5, 2)
    little = build_little(cs, 2)
    stripped = strip_half_edges(little)
    assert len(stripped.edges) == len(little.edges) - len(little.half_edge_indices())
    if stripped.edges:
        validate_weight_axioms(stripped)
    with pytest.raises(ValueError):
        strip_half_edges(build_big(cs, 2))


def test_enhanced_structure():
    cs = class_set(5, 2)
    little = build_little(cs, 2)
    enh = build_enhanced(little)
    g = enh.graph
    h = enh.h
    assert g.n_vertices == 2 * h
    ad = g.adjacency()
    small = little.adjacency()
    for i in range(h):
        for j in range(h):
            assert ad[i][j] == 0 and ad[h + i][h + j] == 0
            assert ad[i][h + j] == small[i][j]
            assert ad[h + i][j] == small[i][j]
    adw = g.weighted_adjacency()
    B = brandt_matrix(cs, 2).entries
    for i in range(h):
        for j in range(h):
            assert adw[h + i][j] == B[i][j]
            assert adw[i][h + j] == B[i][j]
    assert g.half_edge_indices() == []
    # involution: fixed point free, exchanges the parts
    for v in range(2 * h):
        assert enh.iota_vertices[v] == (v + h) % (2 * h)


def test_enhanced_even_with_half_edges_downstairs():
    cs = class_set(5, 1)
    little = build_little(cs, 2)
    assert little.half_edge_indices()
    enh = build_enhanced(little)
    assert enh.graph.half_edge_indices() == []
    validate_weight_axioms(enh.graph)


def test_connectivity_and_negative_control():
    for p, g, ell in ((5, 1, 2), (5, 2, 3), (7, 2, 2)):
        cs = class_set(p, g)
        assert is_connected(build_big(cs, ell))
        little = build_little(cs, ell)
        assert is_connected(little)
        assert is_connected(build_enhanced(little).graph)
    # single vertex, no edges: connected
    single = WeightedGraph(
        kind="test", p=0, g=0, ell=0, vertex_weights=(2,), edges=(),
        has_opposites=False, allows_half_edges=False,
    )
    assert is_connected(single)
    # two components: not connected
    two = WeightedGraph(
        kind="test", p=0, g=0, ell=0, vertex_weights=(2, 2), edges=(),
        has_opposites=False, allows_half_edges=False,
    )
    assert not is_connected(two)


def test_dot_output():
    cs = class_set(5, 1)
    little = build_little(cs, 2)
    dot = to_dot(little)
    assert "graph little_p5_g1_l2 {" in dot
    assert 'label="v0 (e=6)"' in dot
    assert 'label="w=2"' in dot and "style=dashed" in dot
    big = build_big(cs, 2)
    dot_big = to_dot(big)
    assert "digraph" in dot_big and dot_big.count("->") == 3


def test_json_structure():
    cs = class_set(5, 2)
    little = build_little(cs, 2)
    data = graph_to_dict(little)
    assert data["kind"] == "little" and data["has_opposites"]
    assert len(data["vertices"]) == 2
    for entry in data["edges"]:
        opp = data["edges"][entry["opposite"]]
        assert opp["opposite"] == entry["index"]
        assert (opp["origin"], opp["target"]) == (entry["target"], entry["origin"])
        assert entry["half_edge"] == (entry["opposite"] == entry["index"])


def test_kernel_counts_match_brandt_on_rank_one_pair():
    # two-class case exercises off-diagonal kernels
    cs = class_set(11, 1)
    B = brandt_matrix(cs, 2).as_int_rows()
    big = build_big(cs, 2)
    assert big.adjacency() == B


def test_level_validation():
    cs = class_set(5, 1)
    with pytest.raises(ValueError):
        build_big(cs, 5)
    with pytest.raises(ValueError):
        build_little(cs, 4)
