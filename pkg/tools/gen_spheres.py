"""Generate the bundled triangulated-sphere corpus (n <= 8).

Enumerates combinatorial triangulations of the 2-sphere by applying every
possible vertex split starting from the tetrahedron, dedupes them by a
canonical form of the 1-skeleton, and freezes the face lists as JSON under
src/rigicount/data/spheres/.

Run from the repository root:  python tools/gen_spheres.py
"""

from __future__ import annotations

import json
import sys
from itertools import combinations, permutations
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from rigicount.graphs import Triangulation, triangulation_graph
from rigicount.operations import link_cycle, split_triangulation_vertex

MAX_N = 8
# combinatorial types of sphere triangulations on 4..8 vertices
EXPECTED = {4: 1, 5: 1, 6: 2, 7: 5, 8: 14}


def edge_bit_positions(n: int) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(combinations(range(n), 2))}


def canonical_key(t: Triangulation) -> tuple[int, int]:
    """Minimum edge-bitmask over all vertex relabelings of the skeleton."""
    n = t.n
    g = triangulation_graph(t)
    pos = edge_bit_positions(n)
    bits = np.zeros(len(pos), dtype=np.int64)
    for e in g.edges:
        bits[pos[e]] = 1
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    # permuted edge positions: for each perm, where each original bit lands
    maps = np.empty((len(perms), len(pos)), dtype=np.int64)
    for (u, v), i in pos.items():
        pu, pv = perms[:, u], perms[:, v]
        lo, hi = np.minimum(pu, pv), np.maximum(pu, pv)
        # target bit index of edge (lo, hi) in lexicographic order
        maps[:, i] = (lo * (2 * n - lo - 1)) // 2 + (hi - lo - 1)
    weights = 1 << np.arange(len(pos), dtype=np.int64)
    onbits = np.flatnonzero(bits)
    keys = np.zeros(len(perms), dtype=np.int64)
    for i in onbits:
        keys |= weights[maps[:, i]]
    return (n, int(keys.min()))


def all_splits(t: Triangulation):
    for x in range(t.n):
        ring = link_cycle(t, x)
        for i in range(len(ring)):
            for j in range(i + 1, len(ring)):
                yield split_triangulation_vertex(t, x, i, j)


def main() -> None:
    tetra = Triangulation(4, ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)))
    seen = {canonical_key(tetra): tetra}
    frontier = [tetra]
    while frontier:
        nxt = []
        for t in frontier:
            if t.n >= MAX_N:
                continue
            for child in all_splits(t):
                key = canonical_key(child)
                if key not in seen:
                    seen[key] = child
                    nxt.append(child)
        frontier = nxt

    by_n: dict[int, list[Triangulation]] = {}
    for (n, _), t in sorted(seen.items()):
        by_n.setdefault(n, []).append(t)
    for n, want in EXPECTED.items():
        got = len(by_n.get(n, []))
        assert got == want, f"n={n}: generated {got} triangulations, expected {want}"

    out_dir = Path(__file__).resolve().parent.parent / "src" / "rigicount" / "data" / "spheres"
    out_dir.mkdir(parents=True, exist_ok=True)
    for old in out_dir.glob("*.json"):
        old.unlink()
    for n, tris in sorted(by_n.items()):
        for idx, t in enumerate(tris):
            g = triangulation_graph(t)
            doc = {
                "n": t.n,
                "edges": [list(e) for e in g.edges],
                "faces": [list(f) for f in t.faces],
            }
            path = out_dir / f"sphere_n{n}_{idx:02d}.json"
            path.write_text(json.dumps(doc, sort_keys=True) + "\n")
            print(f"wrote {path.name}: n={t.n} faces={t.num_faces}")
    total = sum(len(v) for v in by_n.values())
    print(f"{total} triangulations bundled")


if __name__ == "__main__":
    main()
