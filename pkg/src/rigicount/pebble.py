"""(2,3)-pebble game: combinatorial rank in the generic 2-rigidity matroid.

Each vertex starts with two pebbles; an edge is accepted when four pebbles
can be gathered on its endpoints.  Accepted edges form a maximal
(2,3)-sparse subgraph, whose size equals the rank of the edge set in the
2-dimensional generic rigidity matroid.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .graphs import Graph

_K = 2
_L = 3


def pebble_game_rank(n: int, edges: Iterable[Sequence[int]]) -> int:
    """Rank of the given edge set on ``n`` vertices; edges taken in order."""
    pebbles = [_K] * n
    out: list[set[int]] = [set() for _ in range(n)]

    def collect(root: int, other: int) -> bool:
        # DFS from root for a vertex with a free pebble; reverse the path.
        parent = {root: -1}
        stack = [root]
        while stack:
            w = stack.pop()
            if w != root and pebbles[w] > 0 and w != other:
                pebbles[w] -= 1
                pebbles[root] += 1
                while parent[w] != -1:
                    a = parent[w]
                    out[a].discard(w)
                    out[w].add(a)
                    w = a
                return True
            for x in out[w]:
                if x not in parent:
                    parent[x] = w
                    stack.append(x)
        return False

    accepted = 0
    for u, v in edges:
        while pebbles[u] + pebbles[v] < _L + 1:
            if not (collect(u, v) or collect(v, u)):
                break
        if pebbles[u] + pebbles[v] >= _L + 1:
            pebbles[u] -= 1
            out[u].add(v)
            accepted += 1
    return accepted


def rigidity_rank_2d(g: Graph) -> int:
    """Generic 2-rigidity rank of a graph, capped at ``2n - 3``."""
    return pebble_game_rank(g.n, g.edges)


def is_rigid_2d(g: Graph) -> bool:
    """Combinatorial 2-rigidity test (Laman/pebble-game characterisation)."""
    if g.n <= 3:
        return g.is_complete()
    return rigidity_rank_2d(g) == 2 * g.n - 3
