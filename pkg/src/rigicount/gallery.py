"""Named graphs and triangulations used as fixtures and benchmarks."""

from __future__ import annotations

from itertools import combinations

from .graphs import Graph, Triangulation


def complete(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def complete_multipartite(parts: list[int]) -> Graph:
    """Complete multipartite graph; part ``i`` holds a consecutive id block."""
    blocks = []
    start = 0
    for size in parts:
        blocks.append(range(start, start + size))
        start += size
    edges = [
        (u, v)
        for i, bi in enumerate(blocks)
        for bj in blocks[i + 1 :]
        for u in bi
        for v in bj
    ]
    return Graph.from_edges(start, edges)


def cone(g: Graph) -> Graph:
    """Add an apex vertex adjacent to every existing vertex."""
    return Graph.from_edges(g.n + 1, list(g.edges) + [(v, g.n) for v in range(g.n)])


def k33_cone() -> Graph:
    """K_{3,3} plus a vertex adjacent to all six; minimally 3-rigid, 7 vertices."""
    return cone(complete_bipartite(3, 3))


def double_banana() -> Graph:
    """Two K5-minus-an-edge blocks glued on the missing edge's endpoints.

    The classic 8-vertex, 18-edge graph that meets the 3-dimensional edge
    count but is flexible (generic rank 17).
    """
    edges = []
    for block in ((0, 1, 2, 3, 4), (0, 1, 5, 6, 7)):
        edges.extend((u, v) for u, v in combinations(block, 2) if (u, v) != (0, 1))
    return Graph.from_edges(8, edges)


def flip_demo_graph() -> Graph:
    """5-vertex minimally 2-rigid graph whose real realisation count depends
    on the edge lengths: generic samples see either 2 or 4 real realisations.

    K4 minus one edge, plus a degree-2 vertex attached across the gap.
    """
    g = complete(4).without_edge(2, 3)
    return Graph.from_edges(5, list(g.edges) + [(4, 2), (4, 3)])


_BENCH8_EDGES = (
    (0, 3), (1, 4), (2, 5), (0, 1), (0, 2), (3, 4), (3, 5),
    (1, 6), (3, 6), (2, 6), (4, 7), (0, 7), (5, 7), (6, 7),
)


def benchmark8_count1() -> Graph:
    """8-vertex, 14-edge globally 2-rigid benchmark (2-realisation count 1).

    Isomorphic to K_{4,4} minus a 2-edge matching.
    """
    return Graph.from_edges(8, _BENCH8_EDGES)


def benchmark8_count45() -> Graph:
    """8-vertex, 13-edge minimally 2-rigid benchmark with count 45."""
    return benchmark8_count1().without_edge(6, 7)


def benchmark8_count32() -> Graph:
    """8-vertex, 13-edge minimally 2-rigid benchmark with count 32."""
    return benchmark8_count1().without_edge(2, 5)


# --- triangulated spheres ---------------------------------------------------


def tetrahedron() -> Triangulation:
    return Triangulation(4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))


def bipyramid(k: int) -> Triangulation:
    """Two poles (ids 0, 1) over a k-cycle equator (ids 2..k+1)."""
    if k < 3:
        raise ValueError("bipyramid needs an equator cycle of length >= 3")
    eq = [2 + i for i in range(k)]
    faces = []
    for i in range(k):
        a, b = eq[i], eq[(i + 1) % k]
        faces.append((0, a, b))
        faces.append((1, a, b))
    return Triangulation(k + 2, tuple(faces))


def octahedron() -> Triangulation:
    return bipyramid(4)


def icosahedron() -> Triangulation:
    faces = [
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
        (1, 2, 6), (2, 3, 7), (3, 4, 8), (4, 5, 9), (5, 1, 10),
        (2, 6, 7), (3, 7, 8), (4, 8, 9), (5, 9, 10), (1, 10, 6),
        (6, 7, 11), (7, 8, 11), (8, 9, 11), (9, 10, 11), (10, 6, 11),
    ]
    return Triangulation(12, tuple(faces))


def stacked_sphere(extra: int) -> Triangulation:
    """Tetrahedron with ``extra`` vertices stacked into successive faces."""
    t = tetrahedron()
    for _ in range(extra):
        a, b, c = t.faces[0]
        new = t.n
        faces = list(t.faces[1:]) + [(a, b, new), (a, c, new), (b, c, new)]
        t = Triangulation(t.n + 1, tuple(faces))
    return t
