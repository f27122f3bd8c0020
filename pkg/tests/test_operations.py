import pytest

from rigicount import gallery
from rigicount.graphs import Graph, triangulation_graph
from rigicount.operations import (
    ConstructionSequence,
    apply_step,
    contract_edge,
    contract_triangulation_edge,
    link_cycle,
    one_extension,
    spider_split,
    split_triangulation_vertex,
    steinitz_contract,
    subgraph_substitution,
    vertex_split,
    xv_replacement,
    zero_extension,
)
from rigicount.rigidity import is_d_rigid, is_minimally_d_rigid


def test_zero_extension_k3():
    g, step = zero_extension(gallery.complete(3), 2, (0, 1))
    assert g == gallery.complete(4).without_edge(2, 3)
    assert step.predicted_effect == ("exact_factor", 2)


def test_zero_extension_k4_3d():
    g, _ = zero_extension(gallery.complete(4), 3, (0, 1, 2))
    assert (g.n, g.num_edges) == (5, 9)
    assert is_minimally_d_rigid(g, 3)


def test_zero_extension_rejects_repeat():
    with pytest.raises(ValueError):
        zero_extension(gallery.complete(4), 3, (0, 0, 1))


def test_zero_extension_bookkeeping():
    for d in (1, 2, 3):
        base = gallery.complete(d + 1)
        g, _ = zero_extension(base, d, tuple(range(d)))
        assert g.n == base.n + 1
        assert g.num_edges == base.num_edges + d


def test_one_extension_k4_clique_prediction():
    g, step = one_extension(gallery.complete(4), 2, (0, 1), (2,))
    assert g.n == 5
    assert g.num_edges == 6 - 1 + 3
    assert step.predicted_effect == ("exact_factor", 2)


def test_one_extension_no_clique_no_prediction():
    base, _ = zero_extension(gallery.complete(3), 2, (0, 1))  # K4 - e(2,3)
    g, step = one_extension(base, 2, (0, 1), (3,))  # 0,1,3 not a triangle? 0-1,0-3,1-3 all edges
    assert step.predicted_effect == ("exact_factor", 2)
    g, step = one_extension(base, 2, (0, 2), (3,))  # 0,2,3: edge 2-3 missing
    assert step.predicted_effect == ("none",)


def test_one_extension_1d():
    g, _ = one_extension(gallery.complete(3), 1, (0, 1), ())
    assert g.n == 4
    assert g.num_edges == 4


def test_one_extension_validation():
    with pytest.raises(Exception):
        one_extension(gallery.complete(4), 2, (0, 5), (2,))
    with pytest.raises(ValueError):
        one_extension(gallery.complete(4), 2, (0, 1), (0,))


def test_vertex_split_partition_validation():
    g = gallery.complete(4)
    with pytest.raises(ValueError):
        vertex_split(g, 3, 0, {1}, {2}, {3, 1})  # not a partition
    with pytest.raises(ValueError):
        vertex_split(g, 3, 0, {1}, {2}, {3})  # w too small for d=3


def test_vertex_split_k4_structure():
    g, step = vertex_split(gallery.complete(4), 3, 0, {1}, set(), {2, 3})
    assert (g.n, g.num_edges) == (5, 9)
    assert step.predicted_effect == ("lower_bound_factor", 2)
    # bookkeeping: +1 vertex, +d edges
    assert g.num_edges == gallery.complete(4).num_edges + 3


def test_spider_split_edge_count_identity():
    g = triangulation_graph(gallery.octahedron())
    x = 0
    nbrs = sorted(g.neighbors(x))
    n1, n2, w = {nbrs[0]}, set(), set(nbrs[1:])
    out, step = spider_split(g, 3, x, n1, n2, w)
    assert out.num_edges == g.num_edges - g.degree(x) + len(n1) + len(n2) + 2 * 3
    assert step.predicted_effect == ("lower_bound_factor", 1)
    assert not out.has_edge(x, out.n - 1)


def test_vertex_split_preserves_rigidity_small():
    g = triangulation_graph(gallery.octahedron())
    out, _ = vertex_split(g, 3, 2, {3}, {5}, {0, 1})
    rigid, _ = is_d_rigid(out, 3)
    assert rigid
    assert out.num_edges == 3 * out.n - 6


def test_xv_replacement_structure_and_gate():
    k5e = gallery.complete(5).without_edge(3, 4)
    host = k5e
    # X-replacement inside K5-e: disjoint edges (0,3) and (1,4), extra vertex 2
    out, step = xv_replacement(host, "X", (0, 3), (1, 4), (2,), 3)
    assert out.n == 6
    assert step.kind == "x_replacement"
    assert step.predicted_effect == ("exact_factor", 2)
    # same edges but inside K5 (induces 10 edges, not K5-e): no prediction
    out2, step2 = xv_replacement(gallery.complete(5), "X", (0, 3), (1, 4), (2,), 3)
    assert step2.predicted_effect == ("none",)


def test_xv_replacement_validation():
    g = gallery.complete(5)
    with pytest.raises(ValueError):
        xv_replacement(g, "X", (0, 1), (1, 2), (3,), 3)  # edges share a vertex
    with pytest.raises(ValueError):
        xv_replacement(g, "V", (0, 1), (2, 3), (4,), 3)  # edges disjoint
    with pytest.raises(ValueError):
        xv_replacement(g, "V", (0, 1), (1, 2), (), 3)  # attachment set too small


def test_subgraph_substitution_identity():
    g = gallery.complete(4)
    h_vertices = (0, 1, 2, 3)
    h_edges = g.edges
    out, step = subgraph_substitution(g, h_vertices, h_edges, gallery.complete(4),
                                      {i: i for i in range(4)}, 2)
    assert out == g
    ratio = step.predicted_effect
    assert ratio[0] == "exact_ratio"
    assert ratio[1] == ratio[2]


def test_subgraph_substitution_k5_for_k5e():
    # replace a K5 block by K5 minus an edge inside a host: host is two K5s sharing a triangle
    host_edges = set(gallery.complete(5).edges)
    for u, v in gallery.complete(5).edges:
        host_edges.add((u + 0, v + 0))
    shift = {0: 0, 1: 1, 2: 2, 3: 5, 4: 6}
    extra = [(shift.get(u, u), shift.get(v, v)) for u, v in gallery.complete(5).edges]
    host = Graph.from_edges(7, sorted(host_edges | {tuple(sorted(e)) for e in extra}))
    h_vertices = (0, 1, 2, 5, 6)
    h_edges = [e for e in host.edges if set(e) <= set(h_vertices)]
    replacement = gallery.complete(5).without_edge(3, 4)
    anchor = {0: 0, 1: 1, 2: 2, 3: 5, 4: 6}
    out, step = subgraph_substitution(host, h_vertices, h_edges, replacement, anchor, 3)
    assert out.n == 7
    assert out.num_edges == host.num_edges - 1


def test_contract_edge_relabeling():
    g = gallery.complete(4)
    out, step = contract_edge(g, 1, 3)
    assert out == gallery.complete(3)
    assert step.params["kept"] == 1
    assert step.params["removed"] == 3


def test_contract_triangulation_octahedron():
    t = gallery.octahedron()
    g = triangulation_graph(t)
    u, v = g.edges[0]
    out = contract_triangulation_edge(t, u, v)
    assert out.n == 5
    assert out.num_faces == 6


def test_steinitz_tetrahedron_empty():
    seq = steinitz_contract(gallery.tetrahedron())
    assert len(seq.steps) == 0
    assert seq.base == seq.final


def test_steinitz_octahedron():
    seq = steinitz_contract(gallery.octahedron())
    assert len(seq.steps) == 2
    assert seq.replay() == triangulation_graph(gallery.octahedron())


def test_steinitz_icosahedron_replay():
    seq = steinitz_contract(gallery.icosahedron())
    assert len(seq.steps) == 8
    assert seq.base == triangulation_graph(gallery.tetrahedron())
    assert seq.replay() == triangulation_graph(gallery.icosahedron())


@pytest.mark.parametrize("t", [gallery.bipyramid(3), gallery.bipyramid(5),
                               gallery.stacked_sphere(3), gallery.stacked_sphere(4)])
def test_steinitz_various_spheres(t):
    seq = steinitz_contract(t)
    assert len(seq.steps) == t.n - 4
    assert seq.replay() == triangulation_graph(t)


def test_sequence_json_roundtrip():
    seq = steinitz_contract(gallery.octahedron())
    doc = seq.to_json()
    back = ConstructionSequence.from_json(doc)
    assert back.replay() == seq.final


def test_split_triangulation_vertex_inverse_of_contraction():
    t = gallery.octahedron()
    ring = link_cycle(t, 0)
    assert len(ring) == 4
    out = split_triangulation_vertex(t, 0, 0, 2)
    assert out.n == 7
    assert out.num_faces == t.num_faces + 2
    g = triangulation_graph(out)
    assert g.num_edges == 3 * 7 - 6
    back = contract_triangulation_edge(out, 0, 6)
    assert back == t


def test_apply_step_covers_replacements():
    k5e = gallery.complete(5).without_edge(3, 4)
    out, step = xv_replacement(k5e, "X", (0, 3), (1, 4), (2,), 3)
    assert apply_step(k5e, step) == out
