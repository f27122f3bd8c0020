"""Graph construction operations and the sphere contraction search.

Every operation is a pure function ``graph -> (graph, step)`` where the step
records the parameters and the predicted effect on realisation numbers.
Operations never check rigidity themselves; the certificate checkers
establish hypotheses and confirm predictions with the counting engine.

Predicted effects:

* ``("exact_factor", k)``   -- the count is multiplied by exactly ``k``
* ``("lower_bound_factor", k)`` -- the count is multiplied by at least ``k``
* ``("exact_ratio", h, h')``    -- multiplied by count(h')/count(h), resolved
  by the engine
* ``("none",)``             -- no prediction under the recorded hypotheses
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .graphs import Graph, Triangulation, common_neighbors, graph_from_json, graph_to_json, triangulation_graph


class NoContractibleEdge(RuntimeError):
    """No edge with exactly two common endpoints' neighbours was found;
    impossible for a valid triangulated sphere with more than 4 vertices."""


@dataclass(frozen=True)
class ConstructionStep:
    kind: str
    params: Mapping
    predicted_effect: tuple = ("none",)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": {k: _jsonify(v) for k, v in self.params.items()},
            "predicted_effect": [_jsonify(x) for x in self.predicted_effect],
        }


def _jsonify(v):
    if isinstance(v, Graph):
        return graph_to_json(v)
    if isinstance(v, (tuple, list, frozenset, set)):
        return sorted(_jsonify(x) for x in v) if isinstance(v, (set, frozenset)) else [_jsonify(x) for x in v]
    return v


@dataclass(frozen=True)
class ConstructionSequence:
    """A base graph, an ordered step list, and the claimed final graph.

    ``replay`` re-applies every step and verifies the outcome structurally.
    """

    base: Graph
    steps: tuple[ConstructionStep, ...]
    final: Graph

    def replay(self) -> Graph:
        g = self.base
        for step in self.steps:
            g = apply_step(g, step)
        if g != self.final:
            raise ValueError("replaying the construction does not reproduce the final graph")
        return g

    def to_json(self) -> dict:
        return {
            "base": graph_to_json(self.base),
            "final": graph_to_json(self.final),
            "steps": [s.to_json() for s in self.steps],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ConstructionSequence":
        steps = tuple(
            ConstructionStep(s["kind"], s["params"], tuple(s["predicted_effect"]))
            for s in doc["steps"]
        )
        return cls(graph_from_json(doc["base"]), steps, graph_from_json(doc["final"]))


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------


def zero_extension(g: Graph, d: int, neighbors: Sequence[int]) -> tuple[Graph, ConstructionStep]:
    """Add one vertex joined to ``d`` distinct existing vertices.

    Doubles the realisation number of a d-rigid graph exactly (complex and
    real).
    """
    neighbors = [int(v) for v in neighbors]
    if len(neighbors) != d or len(set(neighbors)) != d:
        raise ValueError(f"need {d} distinct neighbors, got {neighbors}")
    new = g.n
    out = Graph.from_edges(g.n + 1, list(g.edges) + [(v, new) for v in neighbors])
    step = ConstructionStep(
        "zero_extension",
        {"neighbors": sorted(neighbors), "d": d, "new_vertex": new},
        ("exact_factor", 2),
    )
    return out, step


def one_extension(
    g: Graph, d: int, removed_edge: Sequence[int], extra: Sequence[int]
) -> tuple[Graph, ConstructionStep]:
    """Delete an edge and join a new vertex to its endpoints plus ``d-1`` more.

    Predicted to double the count exactly when the ``d+1`` attachment
    vertices form a clique in the input; no prediction otherwise.
    """
    v1, v2 = int(removed_edge[0]), int(removed_edge[1])
    extra = [int(v) for v in extra]
    if len(extra) != d - 1 or len(set(extra)) != d - 1 or v1 in extra or v2 in extra:
        raise ValueError(f"need {d - 1} extra vertices distinct from the edge, got {extra}")
    attach = [v1, v2, *extra]
    new = g.n
    stripped = g.without_edge(v1, v2)
    out = Graph.from_edges(g.n + 1, list(stripped.edges) + [(v, new) for v in attach])
    clique = all(g.has_edge(a, b) for i, a in enumerate(attach) for b in attach[i + 1 :])
    effect = ("exact_factor", 2) if clique else ("none",)
    step = ConstructionStep(
        "one_extension",
        {"removed_edge": sorted((v1, v2)), "extra": sorted(extra), "d": d, "new_vertex": new},
        effect,
    )
    return out, step


def _split_common(g: Graph, x: int, n1, n2, w, w_size: int) -> tuple[set, set, set]:
    n1, n2, w = set(map(int, n1)), set(map(int, n2)), set(map(int, w))
    nbrs = set(g.neighbors(x))
    if len(w) != w_size:
        raise ValueError(f"w must have {w_size} vertices, got {sorted(w)}")
    if n1 | n2 | w != nbrs or (n1 & n2) or (n1 & w) or (n2 & w):
        raise ValueError(f"{{n1, n2, w}} must partition N({x})")
    return n1, n2, w


def vertex_split(
    g: Graph, d: int, x: int, n1, n2, w
) -> tuple[Graph, ConstructionStep]:
    """Split ``x`` into an adjacent pair sharing the ``d-1`` vertices of ``w``.

    For minimally d-rigid inputs the realisation number at least doubles.
    """
    n1, n2, w = _split_common(g, x, n1, n2, w, d - 1)
    x2 = g.n
    edges = [e for e in g.edges if not (x in e and (e[0] in n2 or e[1] in n2))]
    edges += [(x2, v) for v in sorted(n2 | w)] + [(x, x2)]
    out = Graph.from_edges(g.n + 1, edges)
    step = ConstructionStep(
        "vertex_split",
        {"vertex": x, "n1": sorted(n1), "n2": sorted(n2), "w": sorted(w), "d": d, "new_vertex": x2},
        ("lower_bound_factor", 2),
    )
    return out, step


def spider_split(
    g: Graph, d: int, x: int, n1, n2, w
) -> tuple[Graph, ConstructionStep]:
    """Split ``x`` into a non-adjacent pair sharing the ``d`` vertices of ``w``.

    For minimally d-rigid inputs the realisation number does not drop.
    """
    n1, n2, w = _split_common(g, x, n1, n2, w, d)
    x2 = g.n
    edges = [e for e in g.edges if not (x in e and (e[0] in n2 or e[1] in n2))]
    edges += [(x2, v) for v in sorted(n2 | w)]
    out = Graph.from_edges(g.n + 1, edges)
    step = ConstructionStep(
        "spider_split",
        {"vertex": x, "n1": sorted(n1), "n2": sorted(n2), "w": sorted(w), "d": d, "new_vertex": x2},
        ("lower_bound_factor", 1),
    )
    return out, step


def xv_replacement(
    g: Graph, kind: str, e1: Sequence[int], e2: Sequence[int], extra: Sequence[int], d: int
) -> tuple[Graph, ConstructionStep]:
    """Replace two edges by a new vertex of degree ``d+2``.

    ``kind`` is ``"X"`` (vertex-disjoint edges) or ``"V"`` (edges sharing one
    vertex).  The new vertex is joined to the edges' endpoints and to
    ``extra`` vertices to reach degree ``d+2``.  When ``d == 3`` and the five
    attachment vertices induce K5 minus one edge, the count doubles exactly.
    """
    if kind not in ("X", "V"):
        raise ValueError(f"kind must be 'X' or 'V', got {kind!r}")
    a, b = sorted((int(e1[0]), int(e1[1])))
    c, e = sorted((int(e2[0]), int(e2[1])))
    shared = {a, b} & {c, e}
    if kind == "X" and shared:
        raise ValueError("X-replacement needs vertex-disjoint edges")
    if kind == "V" and len(shared) != 1:
        raise ValueError("V-replacement needs edges sharing exactly one vertex")
    endpoints = sorted({a, b, c, e})
    attach = sorted(set(endpoints) | set(map(int, extra)))
    if len(attach) != d + 2:
        raise ValueError(f"attachment set must have d+2={d + 2} vertices, got {attach}")
    stripped = g.without_edge(a, b).without_edge(c, e)
    new = g.n
    out = Graph.from_edges(g.n + 1, list(stripped.edges) + [(v, new) for v in attach])
    effect = ("none",)
    if d == 3 and _induces_k5_minus_edge(g, attach):
        effect = ("exact_factor", 2)
    step = ConstructionStep(
        f"{kind.lower()}_replacement",
        {"e1": [a, b], "e2": [c, e], "extra": sorted(set(map(int, extra))), "d": d, "new_vertex": new},
        effect,
    )
    return out, step


def _induces_k5_minus_edge(g: Graph, vertices: Sequence[int]) -> bool:
    vs = set(vertices)
    if len(vs) != 5:
        return False
    induced = [e for e in g.edges if e[0] in vs and e[1] in vs]
    return len(induced) == 9


def subgraph_substitution(
    g: Graph,
    h_vertices: Sequence[int],
    h_edges: Sequence[Sequence[int]],
    replacement: Graph,
    anchor: Mapping[int, int],
    d: int,
) -> tuple[Graph, ConstructionStep]:
    """Replace the subgraph ``(h_vertices, h_edges)`` of ``g`` by ``replacement``.

    ``anchor`` maps replacement vertices onto the original subgraph's
    vertices; unanchored replacement vertices are appended as new ids.  The
    predicted effect is the ratio of the two subgraphs' realisation numbers,
    recorded symbolically for the engine to resolve.
    """
    h_vertices = sorted(set(map(int, h_vertices)))
    h_edge_set = {tuple(sorted(map(int, e))) for e in h_edges}
    g_edges = set(g.edges)
    for e in h_edge_set:
        if e not in g_edges:
            raise ValueError(f"subgraph edge {e} is not an edge of the host")
        if e[0] not in h_vertices or e[1] not in h_vertices:
            raise ValueError(f"subgraph edge {e} leaves the subgraph vertex set")
    anchor = {int(k): int(v) for k, v in anchor.items()}
    if sorted(anchor.values()) != h_vertices:
        raise ValueError("anchor must map replacement vertices onto the subgraph vertices")
    mapping = dict(anchor)
    next_id = g.n
    for v in range(replacement.n):
        if v not in mapping:
            mapping[v] = next_id
            next_id += 1
    new_edges = (g_edges - h_edge_set) | {
        tuple(sorted((mapping[u], mapping[v]))) for u, v in replacement.edges
    }
    out = Graph.from_edges(next_id, sorted(new_edges))

    relabel = {v: i for i, v in enumerate(h_vertices)}
    h_standalone = Graph.from_edges(
        len(h_vertices), [(relabel[u], relabel[v]) for u, v in sorted(h_edge_set)]
    )
    step = ConstructionStep(
        "subgraph_substitution",
        {
            "h_vertices": h_vertices,
            "h_edges": sorted(h_edge_set),
            "anchor": {str(k): v for k, v in sorted(anchor.items())},
            "d": d,
        },
        ("exact_ratio", h_standalone, replacement),
    )
    return out, step


# ---------------------------------------------------------------------------
# contraction and replay
# ---------------------------------------------------------------------------


def contract_edge(g: Graph, u: int, v: int) -> tuple[Graph, ConstructionStep]:
    """Contract edge ``uv``; the smaller id survives, larger ids shift down."""
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    x, y = min(u, v), max(u, v)
    relabel = {w: (x if w == y else w if w < y else w - 1) for w in range(g.n)}
    edges = {
        (min(relabel[a], relabel[b]), max(relabel[a], relabel[b]))
        for a, b in g.edges
        if {a, b} != {x, y}
    }
    out = Graph.from_edges(g.n - 1, sorted(edges))
    step = ConstructionStep(
        "edge_contraction",
        {"edge": [x, y], "kept": x, "removed": y, "relabel": [relabel[w] for w in range(g.n)]},
        ("none",),
    )
    return out, step


def contract_triangulation_edge(t: Triangulation, u: int, v: int) -> Triangulation:
    """Contract an edge of a triangulated sphere whose endpoints have exactly
    two common neighbours; the result is again a triangulated sphere."""
    g = triangulation_graph(t)
    if len(common_neighbors(g, u, v)) != 2:
        raise ValueError(f"edge ({u}, {v}) is not contractible (link condition fails)")
    x, y = min(u, v), max(u, v)
    relabel = {w: (x if w == y else w if w < y else w - 1) for w in range(t.n)}
    faces = [
        tuple(sorted(relabel[w] for w in f))
        for f in t.faces
        if not {x, y} <= set(f)
    ]
    return Triangulation(t.n - 1, tuple(faces))


def _insertion_perm(n_after_split: int, insert_at: int) -> list[int]:
    # the split appended the new vertex at id n-1; move it to insert_at
    last = n_after_split - 1
    return [v if v < insert_at else (insert_at if v == last else v + 1) for v in range(n_after_split)]


def apply_step(g: Graph, step: ConstructionStep) -> Graph:
    """Re-apply a recorded step; used by :meth:`ConstructionSequence.replay`."""
    p = step.params
    if step.kind == "zero_extension":
        out, _ = zero_extension(g, p["d"], p["neighbors"])
    elif step.kind == "one_extension":
        out, _ = one_extension(g, p["d"], p["removed_edge"], p["extra"])
    elif step.kind == "vertex_split":
        out, _ = vertex_split(g, p["d"], p["vertex"], p["n1"], p["n2"], p["w"])
    elif step.kind == "spider_split":
        out, _ = spider_split(g, p["d"], p["vertex"], p["n1"], p["n2"], p["w"])
    elif step.kind == "edge_contraction":
        out, _ = contract_edge(g, *p["edge"])
    elif step.kind in ("x_replacement", "v_replacement"):
        out, _ = xv_replacement(
            g, step.kind[0].upper(), p["e1"], p["e2"], p["extra"], p["d"]
        )
    elif step.kind == "subgraph_substitution":
        replacement = step.predicted_effect[2]
        if not isinstance(replacement, Graph):
            replacement = graph_from_json(replacement)
        anchor = {int(k): int(v) for k, v in p["anchor"].items()}
        out, _ = subgraph_substitution(
            g, p["h_vertices"], p["h_edges"], replacement, anchor, p["d"]
        )
    else:
        raise ValueError(f"cannot replay step kind {step.kind!r}")
    if "insert_at" in p:
        out = out.relabel(_insertion_perm(out.n, p["insert_at"]))
    return out


def steinitz_contract(t: Triangulation) -> ConstructionSequence:
    """Reduce a triangulated sphere to the tetrahedron by edge contractions.

    Scans edges in sorted order and contracts the first whose endpoints have
    exactly two common neighbours; records the inverse vertex splits so the
    sphere's 1-skeleton can be replayed from K4.  The sequence has length
    ``n - 4`` and every intermediate complex is a valid triangulated sphere.
    """
    current = t
    split_steps: list[ConstructionStep] = []
    while current.n > 4:
        g = triangulation_graph(current)
        adj = g.adjacency()
        pick = None
        for u, v in g.edges:
            if len(adj[u] & adj[v]) == 2:
                pick = (u, v)
                break
        if pick is None:
            raise NoContractibleEdge(f"no contractible edge in {current!r}")
        x, y = pick
        w_pre = sorted(adj[x] & adj[y])
        n1_pre = sorted(adj[x] - adj[y] - {y})
        n2_pre = sorted(adj[y] - adj[x] - {x})
        relabel = {w: (x if w == y else w if w < y else w - 1) for w in range(current.n)}
        step = ConstructionStep(
            "vertex_split",
            {
                "vertex": x,
                "n1": sorted(relabel[w] for w in n1_pre),
                "n2": sorted(relabel[w] for w in n2_pre),
                "w": sorted(relabel[w] for w in w_pre),
                "d": 3,
                "insert_at": y,
                "contracted_edge": [x, y],
            },
            ("lower_bound_factor", 2),
        )
        split_steps.append(step)
        current = contract_triangulation_edge(current, x, y)

    seq = ConstructionSequence(
        base=triangulation_graph(current),
        steps=tuple(reversed(split_steps)),
        final=triangulation_graph(t),
    )
    seq.replay()
    return seq


# ---------------------------------------------------------------------------
# triangulation-level vertex split (inverse of sphere edge contraction)
# ---------------------------------------------------------------------------


def link_cycle(t: Triangulation, v: int) -> list[int]:
    """The link of ``v`` as an ordered cycle of vertices."""
    link_edges = [tuple(sorted(set(f) - {v})) for f in t.faces if v in f]
    adj: dict[int, list[int]] = {}
    for a, b in link_edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    cycle_order = [start, min(adj[start])]
    while len(cycle_order) < len(adj):
        nxt = [w for w in adj[cycle_order[-1]] if w != cycle_order[-2]]
        cycle_order.append(nxt[0])
    return cycle_order


def split_triangulation_vertex(t: Triangulation, x: int, i: int, j: int) -> Triangulation:
    """Split vertex ``x`` along its link cycle between positions ``i < j``.

    The link vertices at the cut positions become the two common neighbours
    of the new adjacent pair; this is the 3-dimensional vertex split at the
    level of the sphere.
    """
    ring = link_cycle(t, x)
    if not (0 <= i < j < len(ring)):
        raise ValueError(f"need cut positions 0 <= i < j < {len(ring)}")
    arc1 = ring[i : j + 1]
    arc2 = ring[j:] + ring[: i + 1]
    x2 = t.n
    faces = [f for f in t.faces if x not in f]
    faces += [(x, arc1[k], arc1[k + 1]) for k in range(len(arc1) - 1)]
    faces += [(x2, arc2[k], arc2[k + 1]) for k in range(len(arc2) - 1)]
    faces += [(x, x2, ring[i]), (x, x2, ring[j])]
    return Triangulation(t.n + 1, tuple(tuple(sorted(f)) for f in faces))
