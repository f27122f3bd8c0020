"""Pinned edge-length systems: construction and vectorized evaluation.

The pinned system fixes a staircase of coordinates at ``d`` pin vertices
(first pin at the origin, second on the first axis, and so on) and imposes
one quadratic equation ``(1/2)||q(u) - q(v)||^2 = lambda_uv`` per edge.  A
spanning minimally rigid subgraph supplies the square subsystem; remaining
edges are surplus consistency filters.  Targets come from an actual sampled
realisation, so the fiber is never empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ..config import RunConfig
from ..frameworks import (
    DegeneratePins,
    Framework,
    canonical_pin,
    half_square_lengths,
    maxwell_threshold,
    pinned_coordinates,
    validate_dimension,
)
from ..graphs import Graph
from ..rigidity import NotRigid, is_d_rigid, spanning_minimally_rigid_subgraph


@dataclass(frozen=True)
class EdgeKernel:
    """Precomputed index arrays for evaluating one edge list on a batch."""

    heads: np.ndarray  # (k,) vertex u per equation
    tails: np.ndarray  # (k,) vertex v per equation
    lam: np.ndarray  # (k,) target half squared lengths
    eq_idx: np.ndarray  # scatter indices for the Jacobian
    col_idx: np.ndarray
    axis_idx: np.ndarray
    signs: np.ndarray

    @property
    def size(self) -> int:
        return len(self.heads)

    def lengths(self, points: np.ndarray) -> np.ndarray:
        """Half squared edge lengths for a (B, n, d) batch of realisations."""
        diff = points[:, self.heads, :] - points[:, self.tails, :]
        return 0.5 * np.sum(diff * diff, axis=2)

    def residual(self, points: np.ndarray) -> np.ndarray:
        return self.lengths(points) - self.lam

    def jacobian(self, points: np.ndarray, ncols: int) -> np.ndarray:
        """Batch Jacobian (B, k, m) with respect to the unknown coordinates."""
        diff = points[:, self.heads, :] - points[:, self.tails, :]
        jac = np.zeros((points.shape[0], self.size, ncols), dtype=points.dtype)
        jac[:, self.eq_idx, self.col_idx] = self.signs * diff[:, self.eq_idx, self.axis_idx]
        return jac

    def residual_and_jacobian(self, points: np.ndarray, ncols: int):
        """Residual and Jacobian sharing one pass over the edge differences."""
        diff = points[:, self.heads, :] - points[:, self.tails, :]
        res = 0.5 * np.sum(diff * diff, axis=2) - self.lam
        jac = np.zeros((points.shape[0], self.size, ncols), dtype=points.dtype)
        jac[:, self.eq_idx, self.col_idx] = self.signs * diff[:, self.eq_idx, self.axis_idx]
        return res, jac


def _edge_kernel(edges, lam, unknown_col: dict, d: int) -> EdgeKernel:
    heads = np.array([u for u, _ in edges], dtype=int).reshape(-1)
    tails = np.array([v for _, v in edges], dtype=int).reshape(-1)
    eq, col, axis, sign = [], [], [], []
    for i, (u, v) in enumerate(edges):
        for j in range(d):
            for vert, s in ((u, 1.0), (v, -1.0)):
                c = unknown_col.get((vert, j))
                if c is not None:
                    eq.append(i)
                    col.append(c)
                    axis.append(j)
                    sign.append(s)
    return EdgeKernel(
        heads,
        tails,
        np.asarray(lam),
        np.array(eq, dtype=int),
        np.array(col, dtype=int),
        np.array(axis, dtype=int),
        np.array(sign),
    )


@dataclass(frozen=True)
class PinnedSystem:
    """A square quadratic system plus surplus filters on the pinned space."""

    graph: Graph
    d: int
    pins: tuple[int, ...]
    square_edges: tuple[tuple[int, int], ...]
    surplus_edges: tuple[tuple[int, int], ...]
    unknowns: tuple[tuple[int, int], ...]  # (vertex, axis) pairs, in column order
    square: EdgeKernel
    surplus: EdgeKernel
    full: EdgeKernel
    seed_solution: np.ndarray  # (m,) the sampled pinned realisation's unknowns
    scalar: str  # "real" or "complex"
    seed: int

    @property
    def num_unknowns(self) -> int:
        return len(self.unknowns)

    @property
    def num_equations(self) -> int:
        return len(self.square_edges)

    def scatter(self, x: np.ndarray) -> np.ndarray:
        """Embed unknown vectors (B, m) into full realisations (B, n, d)."""
        x = np.atleast_2d(x)
        pts = np.zeros((x.shape[0], self.graph.n, self.d), dtype=x.dtype)
        uv = np.array([v for v, _ in self.unknowns], dtype=int)
        uj = np.array([j for _, j in self.unknowns], dtype=int)
        pts[:, uv, uj] = x
        return pts

    def sign_flip_multipliers(self) -> np.ndarray:
        """The ``2^d`` diagonal sign isometries as (2^d, m) multiplier rows."""
        uj = np.array([j for _, j in self.unknowns], dtype=int)
        masks = np.arange(2**self.d)
        eps = 1.0 - 2.0 * ((masks[:, None] >> np.arange(self.d)[None, :]) & 1)
        return eps[:, uj]

    def square_residual_rel(self, x: np.ndarray) -> np.ndarray:
        pts = self.scatter(x)
        res = self.square.residual(pts)
        return np.max(np.abs(res) / np.maximum(1.0, np.abs(self.square.lam)), axis=1)

    def surplus_residual_rel(self, x: np.ndarray) -> np.ndarray:
        if not self.surplus_edges:
            return np.zeros(np.atleast_2d(x).shape[0])
        pts = self.scatter(x)
        res = self.surplus.residual(pts)
        return np.max(np.abs(res) / np.maximum(1.0, np.abs(self.surplus.lam)), axis=1)

    def full_residual_rel(self, x: np.ndarray) -> np.ndarray:
        pts = self.scatter(x)
        res = self.full.residual(pts)
        return np.max(np.abs(res) / np.maximum(1.0, np.abs(self.full.lam)), axis=1)

    def full_jacobian(self, x: np.ndarray) -> np.ndarray:
        """Pinned Jacobian over all edges, shape (B, |E|, m)."""
        return self.full.jacobian(self.scatter(x), self.num_unknowns)


def _pin_candidates(n: int, d: int):
    yield tuple(range(d))
    for combo in combinations(range(n), d):
        if combo != tuple(range(d)):
            yield combo


def build_pinned_system(
    g: Graph,
    d: int,
    seed: int,
    scalar: str = "complex",
    config: RunConfig | None = None,
) -> PinnedSystem:
    """Sample a realisation, pin it canonically, and assemble the system.

    The realisation is sampled with integer (or integer plus i-integer)
    coordinates, pinned by a congruence, and rescaled by a power of two so
    coordinates are O(1).  The returned seed solution satisfies every
    equation to better than 1e-10 relative.
    """
    cfg = config or RunConfig()
    if scalar not in ("real", "complex"):
        raise ValueError(f"scalar must be 'real' or 'complex', got {scalar!r}")
    validate_dimension(d, cfg.max_dimension)
    rigid, _ = is_d_rigid(g, d, seed)
    if not rigid:
        raise NotRigid(f"graph is not {d}-rigid")
    if g.n < d + 1:
        raise NotRigid(f"pinned systems need at least d+1 vertices, got n={g.n}")

    square_graph = spanning_minimally_rigid_subgraph(g, d, seed)
    square_edges = square_graph.edges
    surplus_edges = tuple(e for e in g.edges if e not in set(square_edges))

    seed_seq = np.random.SeedSequence(seed, spawn_key=(0xC0,))
    last_error: Exception | None = None
    for child in seed_seq.spawn(6):
        rng = np.random.default_rng(child)
        bound = cfg.coord_bound
        pts = rng.integers(-bound, bound + 1, size=(g.n, d)).astype(np.float64)
        if scalar == "complex":
            pts = pts + 1j * rng.integers(-bound, bound + 1, size=(g.n, d))
        fw = Framework(g, d, pts)
        for pins in _pin_candidates(g.n, d):
            try:
                pinned = canonical_pin(fw, pins)
            except DegeneratePins as exc:
                last_error = exc
                continue
            return _assemble(g, d, pins, square_edges, surplus_edges, pinned, scalar, seed)
    raise DegeneratePins(f"no usable pin set found after resampling: {last_error}")


def _assemble(g, d, pins, square_edges, surplus_edges, pinned: Framework, scalar, seed) -> PinnedSystem:
    pts = pinned.points
    scale = 2.0 ** np.ceil(np.log2(max(1.0, float(np.max(np.abs(pts))))))
    pts = pts / scale

    _, unknowns = pinned_coordinates(g.n, d, pins)
    assert len(unknowns) == maxwell_threshold(g.n, d)
    assert len(square_edges) == len(unknowns), "square subsystem must match unknown count"
    unknown_col = {pair: i for i, pair in enumerate(unknowns)}

    lam_square = half_square_lengths(pts, square_edges)
    lam_surplus = (
        half_square_lengths(pts, surplus_edges) if surplus_edges else np.zeros(0, dtype=pts.dtype)
    )
    lam_full = np.concatenate([lam_square, lam_surplus])

    system = PinnedSystem(
        graph=g,
        d=d,
        pins=tuple(pins),
        square_edges=tuple(square_edges),
        surplus_edges=tuple(surplus_edges),
        unknowns=tuple(unknowns),
        square=_edge_kernel(square_edges, lam_square, unknown_col, d),
        surplus=_edge_kernel(surplus_edges, lam_surplus, unknown_col, d)
        if surplus_edges
        else _edge_kernel((), np.zeros(0), unknown_col, d),
        full=_edge_kernel(tuple(square_edges) + tuple(surplus_edges), lam_full, unknown_col, d),
        seed_solution=np.array([pts[v, j] for v, j in unknowns]),
        scalar=scalar,
        seed=seed,
    )
    worst = float(system.full_residual_rel(system.seed_solution[None, :])[0])
    if worst > 1e-10:
        raise DegeneratePins(f"sampled realisation violates its own equations by {worst:.2e}")
    return system
