import json

import pytest

from rigicount import gallery
from rigicount.certificates import (
    Certificate,
    HypothesisNotEstablished,
    certify_sphere_bound,
    check_edge_addition_drop,
    check_spanning_divisibility,
    check_subgraph_divisibility,
    graph_hash,
    greedy_augment,
    prime_factors,
    verify_certificate,
    verify_operation_effect,
)
from rigicount.config import RunConfig
from rigicount.operations import spider_split, vertex_split, zero_extension

CFG = RunConfig(seed=20259)


def test_prime_factors():
    assert prime_factors(45) == [3, 3, 5]
    assert prime_factors(32) == [2, 2, 2, 2, 2]
    assert prime_factors(1) == []
    assert prime_factors(97) == [97]


def test_prime_factor_budget():
    from rigicount.certificates import PrimeFactorBudget

    b = PrimeFactorBudget.of(45)
    assert (b.c, b.k) == (45, 3)
    assert b.factorization == (3, 3, 5)
    assert PrimeFactorBudget.of(1).k == 0
    with pytest.raises(ValueError):
        PrimeFactorBudget(10, (2, 3))


def test_graph_hash_stable():
    g = gallery.complete(4)
    assert graph_hash(g) == graph_hash(gallery.complete(4))
    assert graph_hash(g) != graph_hash(g.without_edge(0, 1))


def test_spanning_divisibility_trivial_pair():
    g = gallery.complete(4)
    cert = check_spanning_divisibility(g, g, 2, CFG)
    assert cert.verdict == "verified"


def test_spanning_divisibility_k4_pair():
    # K4 (count 1) spans K4-e (count 2): 1 | 2
    cert = check_spanning_divisibility(gallery.complete(4),
                                       gallery.complete(4).without_edge(0, 1), 2, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["count_graph"]["c"] == 1
    assert cert.evidence["count_subgraph"]["c"] == 2


def test_spanning_divisibility_requires_subgraph():
    with pytest.raises(ValueError):
        check_spanning_divisibility(gallery.complete(4).without_edge(0, 1),
                                    gallery.complete(4), 2, CFG)


def test_spanning_divisibility_requires_rigid():
    with pytest.raises(HypothesisNotEstablished):
        check_spanning_divisibility(gallery.complete(4), gallery.cycle(4), 2, CFG)


def test_subgraph_divisibility_identity():
    g = gallery.complete_multipartite([1, 1, 3])
    cert = check_subgraph_divisibility(g, range(g.n), g.edges, 2, CFG)
    assert cert.verdict == "verified"


def test_subgraph_divisibility_extension_host():
    # host = K5-e plus a degree-3 vertex; subgraph = the K5-e block
    h = gallery.complete(5).without_edge(3, 4)
    g, _ = zero_extension(h, 3, (0, 1, 2))
    cert = check_subgraph_divisibility(g, range(5), h.edges, 3, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["count_subgraph"]["c"] == 2
    assert cert.evidence["count_graph"]["c"] % 2 == 0


def test_subgraph_divisibility_hypothesis_failure():
    # K4 inside K5 in the plane: the exchange can never be minimally rigid
    g = gallery.complete(5)
    h_vertices = [0, 1, 2, 3]
    h_edges = [e for e in g.edges if set(e) <= {0, 1, 2, 3}]
    with pytest.raises(HypothesisNotEstablished):
        check_subgraph_divisibility(g, h_vertices, h_edges, 2, CFG)


def test_edge_addition_drop_k4e():
    cert = check_edge_addition_drop(gallery.complete(4).without_edge(0, 1), (0, 1), 2, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["count_before"]["c"] == 2
    assert cert.evidence["count_after"]["c"] == 1
    assert cert.evidence["dropped"] is True


def test_edge_addition_no_drop_branch():
    # globally rigid: adding an edge keeps count 1
    g = gallery.complete(5).without_edge(0, 1)
    cert = check_edge_addition_drop(g, (0, 1), 2, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["dropped"] is False


def test_greedy_augment_multipartite():
    # one part of size 3: count 4 = 2*2, factor count 2, needs exactly 2 edges
    g = gallery.complete_multipartite([1, 1, 3])
    cert = greedy_augment(g, 2, config=CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["initial_count"] == 4
    assert cert.evidence["prime_factors"] == [2, 2]
    assert len(cert.evidence["added_edges"]) == 2
    assert cert.evidence["final_count"] == 1


def test_greedy_augment_globally_rigid_is_empty():
    cert = greedy_augment(gallery.complete(4), 2, config=CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["added_edges"] == []


def test_sphere_bound_tetrahedron():
    cert = certify_sphere_bound(gallery.tetrahedron(), CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["bound"] == 1
    assert cert.evidence["count"]["c"] == 1


def test_sphere_bound_bipyramid():
    cert = certify_sphere_bound(gallery.bipyramid(3), CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["bound"] == 2
    assert cert.evidence["count"]["c"] >= 2


def test_sphere_bound_seven_vertex_no_count():
    t = gallery.stacked_sphere(3)
    cert = certify_sphere_bound(t, CFG, count_max_equations=12)
    assert cert.verdict == "verified"
    assert cert.evidence["bound"] == 8
    assert cert.evidence["sequence_length"] == 3
    assert "count" not in cert.evidence


def test_operation_effect_zero_extension():
    g = gallery.complete(4).without_edge(0, 1)
    out, step = zero_extension(g, 2, (0, 1))
    cert = verify_operation_effect(step, g, out, 2, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["count_before"]["c"] == 2
    assert cert.evidence["count_after"]["c"] == 4


def test_operation_effect_spider_split_k5e():
    g = gallery.complete(5).without_edge(3, 4)
    x = 0
    nbrs = sorted(g.neighbors(x))
    out, step = spider_split(g, 3, x, set(nbrs[:1]), set(), set(nbrs[1:]))
    cert = verify_operation_effect(step, g, out, 3, CFG)
    assert cert.verdict == "verified"
    assert cert.evidence["count_after"]["c"] >= cert.evidence["count_before"]["c"] >= 2


def test_operation_effect_requires_hypotheses():
    g = gallery.complete(4)  # not minimally 2-rigid
    out, step = vertex_split(g, 2, 0, {1}, {2}, {3})
    with pytest.raises(HypothesisNotEstablished):
        verify_operation_effect(step, g, out, 2, CFG)


def test_operation_effect_checks_structure():
    g = gallery.complete(4).without_edge(0, 1)
    out, step = zero_extension(g, 2, (0, 1))
    with pytest.raises(ValueError):
        verify_operation_effect(step, g, gallery.complete(5), 2, CFG)


def test_certificate_json_roundtrip_and_recheck():
    g = gallery.complete(4).without_edge(0, 1)
    cert = check_edge_addition_drop(g, (0, 1), 2, CFG)
    doc = json.loads(json.dumps(cert.to_json()))
    fresh = verify_certificate(doc)
    assert fresh.verdict == cert.verdict
    assert fresh.to_json() == doc  # deterministic end-to-end recheck


def test_certificate_schema_guard():
    with pytest.raises(ValueError):
        Certificate.from_json({"schema": "bogus", "kind": "x", "d": 2,
                               "inputs": {}, "config": {}, "evidence": {}, "verdict": "verified"})
