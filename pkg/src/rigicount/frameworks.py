"""Frameworks, rigidity matrices and canonical pinning.

A framework is a graph plus a realisation map ``vertex -> point`` in
``d``-space with real or complex coordinates.  All length computations use
the bilinear form ``sum(x_i^2)`` (no conjugation), which is the notion of
congruence under which realisation counting is done.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph


class DegeneratePins(ValueError):
    """Pinning failed: a leading principal minor of the pin Gram matrix
    vanishes (or is numerically negligible); re-choose pins or resample."""


DIMENSION_LIMIT = 6  # practical guard; pass an explicit limit to go higher


def validate_dimension(d: int, limit: int | None = None) -> int:
    lim = DIMENSION_LIMIT if limit is None else limit
    if d < 1:
        raise ValueError(f"ambient dimension must be a positive integer, got {d}")
    if d > lim:
        raise ValueError(f"dimension {d} exceeds the practical guard {lim}")
    return d


def maxwell_threshold(n: int, d: int) -> int:
    """``d*n - d*(d+1)/2``: the rank of an infinitesimally rigid framework
    whose points affinely span ``d``-space; also the pinned-space dimension."""
    return d * n - d * (d + 1) // 2


@dataclass(frozen=True)
class Framework:
    """A graph together with a realisation in real or complex ``d``-space."""

    graph: Graph
    d: int
    points: np.ndarray  # shape (n, d)

    def __post_init__(self) -> None:
        pts = np.asarray(self.points)
        if pts.shape != (self.graph.n, self.d):
            raise ValueError(
                f"points must have shape ({self.graph.n}, {self.d}), got {pts.shape}"
            )
        if pts.size and not np.all(np.isfinite(pts)):
            raise ValueError("coordinates must be finite")
        kind = np.complex128 if pts.dtype.kind == "c" else np.float64
        object.__setattr__(self, "points", pts.astype(kind))

    @property
    def is_complex(self) -> bool:
        return self.points.dtype.kind == "c"

    def edge_measurements(self) -> np.ndarray:
        """Half squared lengths ``(1/2)||p(u) - p(v)||^2`` per edge, in edge order."""
        return half_square_lengths(self.points, self.graph.edges)


def half_square_lengths(points: np.ndarray, edges) -> np.ndarray:
    e = np.asarray(edges, dtype=int).reshape(-1, 2)
    diff = points[e[:, 0]] - points[e[:, 1]]
    return 0.5 * np.sum(diff * diff, axis=1)


def rigidity_matrix(fw: Framework) -> np.ndarray:
    """The ``|E| x d*n`` rigidity matrix.

    The row of edge ``uv`` carries ``p(u) - p(v)`` in the column block of
    ``u`` and the negative in the block of ``v``.
    """
    g, d, pts = fw.graph, fw.d, fw.points
    mat = np.zeros((g.num_edges, d * g.n), dtype=pts.dtype)
    for row, (u, v) in enumerate(g.edges):
        diff = pts[u] - pts[v]
        mat[row, d * u : d * u + d] = diff
        mat[row, d * v : d * v + d] = -diff
    return mat


def rigidity_matrix_rows_int(g: Graph, d: int, points: list[list[int]]) -> list[list[int]]:
    """Integer rigidity-matrix rows for exact rank computations."""
    rows = []
    for u, v in g.edges:
        row = [0] * (d * g.n)
        for j in range(d):
            diff = points[u][j] - points[v][j]
            row[d * u + j] = diff
            row[d * v + j] = -diff
        rows.append(row)
    return rows


def pinned_coordinates(n: int, d: int, pins) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Split coordinates into pinned and unknown ``(vertex, axis)`` pairs.

    The k-th pinned vertex has axes ``k-1 .. d-1`` forced to zero, so the
    first pin sits at the origin, the second on the first axis, and so on.
    """
    pins = list(pins)
    if len(pins) != d or len(set(pins)) != d:
        raise ValueError(f"need {d} distinct pin vertices, got {pins}")
    pinned = {(v, j) for k, v in enumerate(pins) for j in range(k, d)}
    unknown = [(v, j) for v in range(n) for j in range(d) if (v, j) not in pinned]
    return sorted(pinned), unknown


def canonical_pin(fw: Framework, pins, *, tol: float = 1e-12) -> Framework:
    """Move a framework into pinned position by a congruence.

    Applies a translation and a matrix orthogonal for the bilinear form to
    zero out the staircase of pin coordinates.  Squared lengths of all
    vertex pairs are preserved to 1e-10 relative.  Raises
    :class:`DegeneratePins` when the sequential orthogonalisation of pin
    difference vectors degenerates.
    """
    d, pts = fw.d, fw.points
    pins = list(pins)
    if len(pins) != d or len(set(pins)) != d:
        raise ValueError(f"need {d} distinct pin vertices, got {pins}")
    shifted = pts - pts[pins[0]]
    scale = max(1.0, float(np.max(np.abs(shifted)))) ** 2

    basis: list[np.ndarray] = []
    for i in range(1, d):
        w = shifted[pins[i]].copy()
        for e in basis:
            w = w - np.sum(w * e) * e
        norm2 = np.sum(w * w)
        if abs(norm2) <= tol * scale:
            raise DegeneratePins(f"pin vertex {pins[i]} degenerate under bilinear form")
        basis.append(w / np.sqrt(norm2))
    # complete to a full basis, orthonormal for the bilinear form
    while len(basis) < d:
        best, best_norm2 = None, 0.0
        for axis in range(d):
            w = np.zeros(d, dtype=shifted.dtype)
            w[axis] = 1.0
            for e in basis:
                w = w - np.sum(w * e) * e
            norm2 = np.sum(w * w)
            if abs(norm2) > abs(best_norm2):
                best, best_norm2 = w, norm2
        if best is None or abs(best_norm2) <= tol:
            raise DegeneratePins("cannot complete pin basis: isotropic complement")
        basis.append(best / np.sqrt(best_norm2))

    q_mat = np.stack(basis, axis=0)  # rows orthonormal: Q Q^T = I bilinearly
    pinned_pts = shifted @ q_mat.T

    pinned_idx, _ = pinned_coordinates(fw.graph.n, d, pins)
    for v, j in pinned_idx:
        if abs(pinned_pts[v, j]) > 1e-8 * np.sqrt(scale):
            raise DegeneratePins(f"pin residue {pinned_pts[v, j]!r} at vertex {v} axis {j}")
        pinned_pts[v, j] = 0.0

    _check_lengths_preserved(pts, pinned_pts)
    return Framework(fw.graph, d, pinned_pts)


def _check_lengths_preserved(before: np.ndarray, after: np.ndarray, rel: float = 1e-10) -> None:
    n = before.shape[0]
    iu, iv = np.triu_indices(n, k=1)
    f0 = np.sum((before[iu] - before[iv]) ** 2, axis=1)
    f1 = np.sum((after[iu] - after[iv]) ** 2, axis=1)
    denom = np.maximum(1.0, np.abs(f0))
    worst = float(np.max(np.abs(f1 - f0) / denom)) if len(f0) else 0.0
    if worst > rel:
        raise DegeneratePins(f"pinning distorted squared lengths by {worst:.2e} relative")
