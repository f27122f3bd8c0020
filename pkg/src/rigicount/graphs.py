"""Graph and triangulated-sphere data model, validation and file I/O.

Vertices are dense integer ids in ``[0, n)``; everything downstream indexes
linear algebra by vertex position.  Graphs and triangulations are immutable
and hashable, so they are safe to share across threads and to use as cache
keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised for malformed graph input (bad syntax, loops, duplicates)."""


def _normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple graph with vertices ``0..n-1``.

    Edges are stored as a sorted tuple of ordered pairs ``(u, v)`` with
    ``u < v``, so iteration order is deterministic.
    """

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphFormatError(f"vertex count must be nonnegative, got {self.n}")
        seen: set[Edge] = set()
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError(f"loop edge ({u}, {v})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={self.n}")
            e = _normalize_edge(u, v)
            if e in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})")
            seen.add(e)
        object.__setattr__(self, "edges", tuple(sorted(seen)))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        return cls(n, tuple(_normalize_edge(int(u), int(v)) for u, v in edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in set(self.edges)

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def neighbors(self, v: int) -> frozenset[int]:
        self._check_vertex(v)
        return frozenset(b if a == v else a for a, b in self.edges if v in (a, b))

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def non_edges(self) -> tuple[Edge, ...]:
        present = set(self.edges)
        return tuple(
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if (u, v) not in present
        )

    def with_edge(self, u: int, v: int) -> "Graph":
        if self.has_edge(u, v):
            raise GraphFormatError(f"edge ({u}, {v}) already present")
        return Graph(self.n, self.edges + (_normalize_edge(u, v),))

    def without_edge(self, u: int, v: int) -> "Graph":
        e = _normalize_edge(u, v)
        if e not in set(self.edges):
            raise GraphFormatError(f"edge ({u}, {v}) not present")
        return Graph(self.n, tuple(f for f in self.edges if f != e))

    def is_complete(self) -> bool:
        return self.num_edges == self.n * (self.n - 1) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Apply the vertex relabeling ``old id -> perm[old id]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphFormatError("relabeling is not a permutation of the vertex set")
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphFormatError(f"vertex id {v} out of range for n={self.n}")


def common_neighbors(g: Graph, u: int, v: int) -> frozenset[int]:
    """The set ``N(u) & N(v)``; ``u`` and ``v`` must be distinct valid ids."""
    if u == v:
        raise GraphFormatError("common_neighbors requires distinct vertices")
    g._check_vertex(u)
    g._check_vertex(v)
    return g.neighbors(u) & g.neighbors(v)


@dataclass(frozen=True)
class Triangulation:
    """A triangulated 2-sphere given by its face list.

    Validation enforces: every edge lies in exactly two faces, every vertex
    link is a single cycle, the Euler count ``V - E + F = 2`` and ``n >= 4``.
    """

    n: int
    faces: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 4:
            raise GraphFormatError(f"triangulated sphere needs n >= 4, got n={self.n}")
        norm_faces = []
        seen = set()
        for f in self.faces:
            if len(f) != 3 or len(set(f)) != 3:
                raise GraphFormatError(f"face {f} is not a triple of distinct vertices")
            for v in f:
                if not (0 <= v < self.n):
                    raise GraphFormatError(f"face vertex {v} out of range for n={self.n}")
            t = tuple(sorted(f))
            if t in seen:
                raise GraphFormatError(f"duplicate face {f}")
            seen.add(t)
            norm_faces.append(t)
        object.__setattr__(self, "faces", tuple(sorted(norm_faces)))
        self._validate()

    def _validate(self) -> None:
        edge_faces: dict[Edge, list[tuple[int, int, int]]] = {}
        for f in self.faces:
            a, b, c = f
            for e in ((a, b), (a, c), (b, c)):
                edge_faces.setdefault(e, []).append(f)
        for e, fs in edge_faces.items():
            if len(fs) != 2:
                raise GraphFormatError(f"edge {e} lies in {len(fs)} faces, expected 2")
        num_e = len(edge_faces)
        num_f = len(self.faces)
        touched = {v for f in self.faces for v in f}
        if touched != set(range(self.n)):
            raise GraphFormatError("every vertex must lie in some face")
        if self.n - num_e + num_f != 2:
            raise GraphFormatError(
                f"Euler count V-E+F = {self.n - num_e + num_f}, expected 2"
            )
        for v in range(self.n):
            self._check_link_cycle(v)

    def _check_link_cycle(self, v: int) -> None:
        link_edges = [tuple(sorted(set(f) - {v})) for f in self.faces if v in f]
        deg: dict[int, int] = {}
        for a, b in link_edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if any(d != 2 for d in deg.values()):
            raise GraphFormatError(f"link of vertex {v} is not a single cycle")
        # connectivity of the link: walk the cycle
        adj: dict[int, list[int]] = {}
        for a, b in link_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        start = link_edges[0][0]
        seen = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for x in adj[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        if seen != set(deg):
            raise GraphFormatError(f"link of vertex {v} is disconnected")

    @property
    def num_faces(self) -> int:
        return len(self.faces)


def triangulation_graph(t: Triangulation) -> Graph:
    """The 1-skeleton; always has ``3n - 6`` edges for a valid sphere."""
    edges = set()
    for a, b, c in t.faces:
        edges.update({(a, b), (a, c), (b, c)})
    return Graph(t.n, tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# File formats.
#
# Edge-list text: first token "n;" then comma- or newline-separated "u v"
# pairs, whitespace-insensitive.  JSON: {"n": int, "edges": [[u, v], ...],
# "faces": [[a, b, c], ...] optional}.
# ---------------------------------------------------------------------------


def parse_graph(text: str) -> Graph:
    """Parse a graph from edge-list or JSON text."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(json.loads(text))
    return _parse_edge_list(text)


def parse_triangulation(text: str) -> Triangulation:
    """Parse a triangulation from JSON text carrying a ``faces`` field."""
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        raise GraphFormatError("triangulations use the JSON format with a 'faces' field")
    doc = json.loads(text)
    if "faces" not in doc:
        raise GraphFormatError("JSON document has no 'faces' field")
    return Triangulation(int(doc["n"]), tuple(tuple(int(v) for v in f) for f in doc["faces"]))


def _parse_edge_list(text: str) -> Graph:
    head, sep, tail = text.partition(";")
    if not sep:
        raise GraphFormatError("edge list must start with 'n;'")
    try:
        n = int(head.strip())
    except ValueError as exc:
        raise GraphFormatError(f"bad vertex count {head.strip()!r}") from exc
    edges: list[Edge] = []
    # line numbers are 1-based over the whole input, for error reporting
    offset_line = text[: len(head) + 1].count("\n")
    for i, raw_line in enumerate(tail.splitlines() or [tail]):
        lineno = offset_line + i + 1
        for item in raw_line.split(","):
            item = item.strip()
            if not item:
                continue
            parts = item.split()
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: malformed pair {item!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: malformed pair {item!r}") from exc
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop edge {item!r}")
            e = _normalize_edge(u, v)
            if e in edges:
                raise GraphFormatError(f"line {lineno}: duplicate edge {item!r}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex id out of range in {item!r}")
            edges.append(e)
    return Graph(n, tuple(edges))


def serialize_graph(g: Graph) -> str:
    """Edge-list text form; ``parse_graph`` round-trips it exactly."""
    return f"{g.n}; " + ", ".join(f"{u} {v}" for u, v in g.edges)


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in g.edges]}


def graph_from_json(doc: Mapping) -> Graph:
    try:
        n = int(doc["n"])
        edges = tuple((int(u), int(v)) for u, v in doc["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphFormatError(f"bad JSON graph document: {exc}") from exc
    return Graph.from_edges(n, edges)


def triangulation_to_json(t: Triangulation) -> dict:
    g = triangulation_graph(t)
    return {"n": t.n, "edges": [list(e) for e in g.edges], "faces": [list(f) for f in t.faces]}


def from_labeled_edges(pairs: Iterable[Sequence]) -> tuple[Graph, dict]:
    """Compact arbitrary hashable vertex labels to ``[0, n)``.

    Returns the graph and the side map ``label -> id`` for reporting.
    """
    pairs = [tuple(p) for p in pairs]
    labels = sorted({x for p in pairs for x in p}, key=repr)
    index = {lab: i for i, lab in enumerate(labels)}
    g = Graph.from_edges(len(labels), ((index[a], index[b]) for a, b in pairs))
    return g, index
