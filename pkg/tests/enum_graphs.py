"""Exhaustive small-graph enumeration used by sweep tests.

Graphs on n vertices are edge bitmasks over the C(n,2) vertex pairs;
canonical forms are minima over all vertex permutations, computed with a
vectorized bit-permutation table.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np

from rigicount.graphs import Graph

_PAIRS = {n: list(combinations(range(n), 2)) for n in range(1, 9)}


def mask_to_graph(n: int, mask: int) -> Graph:
    pairs = _PAIRS[n]
    return Graph(n, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))


def graph_to_mask(g: Graph) -> int:
    index = {p: i for i, p in enumerate(_PAIRS[g.n])}
    mask = 0
    for e in g.edges:
        mask |= 1 << index[e]
    return mask


def _perm_bit_maps(n: int) -> np.ndarray:
    pairs = _PAIRS[n]
    index = {p: i for i, p in enumerate(pairs)}
    perms = list(permutations(range(n)))
    maps = np.empty((len(perms), len(pairs)), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for i, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            maps[pi, i] = index[(a, b) if a < b else (b, a)]
    return maps


def canonical_masks(n: int) -> np.ndarray:
    """canonical_masks(n)[mask] = min over relabelings of the edge bitmask."""
    k = len(_PAIRS[n])
    maps = _perm_bit_maps(n)
    masks = np.arange(1 << k, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k)[None, :]) & 1  # (2^k, k)
    weights = (np.int64(1) << maps).T  # (k, n_perms): weight of source bit under each perm
    images = bits @ weights  # (2^k, n_perms)
    return images.min(axis=1)


def canonical_representatives(n: int) -> list[Graph]:
    """One graph per isomorphism class on exactly n vertices."""
    canon = canonical_masks(n)
    reps = np.unique(canon)
    return [mask_to_graph(n, int(m)) for m in reps]


def canonical_form(g: Graph) -> tuple[int, int]:
    """Isomorphism-invariant key (brute force, n <= 8)."""
    pairs = _PAIRS[g.n]
    index = {p: i for i, p in enumerate(pairs)}
    mask = graph_to_mask(g)
    best = None
    for perm in permutations(range(g.n)):
        val = 0
        for u, v in g.edges:
            a, b = perm[u], perm[v]
            val |= 1 << index[(a, b) if a < b else (b, a)]
        if best is None or val < best:
            best = val
    return (g.n, best)
