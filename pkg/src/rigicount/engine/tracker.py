"""Total-degree homotopy tracking for pinned edge-length systems.

All ``2^k`` paths of the homotopy

    H(x, t) = gamma * (1 - t) * c_i * (x_i^2 - 1) + t * (f_i(x) - lambda_i)

are tracked from the start solutions ``x in {-1, +1}^k`` to ``t = 1`` with an
Euler predictor and Newton corrector, adaptive steps, and a tightened
endgame.  Endpoints are Newton-polished, deduplicated, filtered by the
surplus equations, and closed under the ``2^d`` diagonal sign isometries of
the pinned space.

Paths are independent work items: the batch is split into fixed-size chunks
which may be tracked concurrently; results are merged in chunk order, so
the outcome is deterministic regardless of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..config import RunConfig
from .system import PinnedSystem

_EPS = np.finfo(np.float64).eps


class PathBudgetExceeded(RuntimeError):
    """The square system needs more paths than the configured cap allows."""


class ExcessiveFailures(RuntimeError):
    """Tracking failed catastrophically even after a fresh-gamma rerun."""


@dataclass(frozen=True)
class PathStats:
    tracked: int = 0
    converged: int = 0
    diverged: int = 0
    failed: int = 0

    def __add__(self, other: "PathStats") -> "PathStats":
        return PathStats(
            self.tracked + other.tracked,
            self.converged + other.converged,
            self.diverged + other.diverged,
            self.failed + other.failed,
        )

    def to_json(self) -> dict:
        return {
            "tracked": self.tracked,
            "converged": self.converged,
            "diverged": self.diverged,
            "failed": self.failed,
        }


@dataclass(frozen=True)
class SolutionSet:
    """Deduplicated fiber of a pinned system with per-solution diagnostics."""

    points: np.ndarray  # (S, m) complex unknown vectors
    residuals: np.ndarray  # (S,) max relative defect over all edges
    real_flags: np.ndarray  # (S,) bool
    newton_certified: np.ndarray  # (S,) bool
    singular_flags: np.ndarray  # (S,) bool: pinned Jacobian nearly rank-deficient
    stats: PathStats
    recovered_mirrors: int
    seed_found: bool
    reliable: bool
    gamma: complex

    def __len__(self) -> int:
        return len(self.points)

    @property
    def real_count(self) -> int:
        return int(np.count_nonzero(self.real_flags))


def _row_norms(a: np.ndarray) -> np.ndarray:
    return np.sqrt(
        np.einsum("ij,ij->i", a.real, a.real) + np.einsum("ij,ij->i", a.imag, a.imag)
    )


def _solve_batch(mats: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Batched linear solve with a per-matrix fallback for singular members."""
    try:
        return np.linalg.solve(mats, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(rhs)
        for i in range(mats.shape[0]):
            try:
                out[i] = np.linalg.solve(mats[i], rhs[i])
            except np.linalg.LinAlgError:
                out[i] = np.linalg.lstsq(mats[i], rhs[i], rcond=None)[0]
        return out


class _Homotopy:
    """Evaluation of H and its x/t derivatives for one gamma."""

    def __init__(self, system: PinnedSystem, gamma: complex):
        self.system = system
        self.gamma = gamma
        self.scale = 1.0 + np.abs(system.square.lam)  # per-equation start scaling
        self.m = system.num_unknowns

    def eval(self, x: np.ndarray, t: np.ndarray, jac: bool = True):
        sys_ = self.system
        pts = sys_.scatter(x)
        start = (x * x - 1.0) * self.scale
        gfac = self.gamma * (1.0 - t)
        if not jac:
            target = sys_.square.residual(pts)
            return gfac[:, None] * start + t[:, None] * target, target - self.gamma * start, None
        target, h_x = sys_.square.residual_and_jacobian(pts, self.m)
        h_val = gfac[:, None] * start + t[:, None] * target
        h_t = target - self.gamma * start
        h_x *= t[:, None, None]
        idx = np.arange(sys_.num_equations)
        h_x[:, idx, idx] += gfac[:, None] * (2.0 * self.scale) * x
        return h_val, h_t, h_x


def _start_points(k: int, lo: int, hi: int) -> np.ndarray:
    masks = np.arange(lo, hi, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(k)[None, :]) & 1
    return (1.0 - 2.0 * bits).astype(np.complex128)


def _track_chunk(hom: _Homotopy, lo: int, hi: int, cfg: RunConfig):
    """Track paths [lo, hi); returns (arrived endpoints, diverged, failed).

    Tracking stops at ``t = 1 - trunc_eps``; each path reaching it (or
    exhausting its budget) is settled by a Newton polish against the target
    system.  A path genuinely heading to a finite root is already close to
    it there, so settlement requires both certification and a small polish
    displacement; everything else was escaping to infinity.
    """
    k = hom.system.num_equations
    t_end = 1.0 - cfg.trunc_eps
    x = _start_points(k, lo, hi)
    batch = x.shape[0]
    t = np.zeros(batch)
    dt = np.full(batch, cfg.initial_dt)
    streak = np.zeros(batch, dtype=np.int16)
    last_norm = _row_norms(x)
    eg_steps = np.zeros(batch, dtype=np.int32)
    # 0 active, 1 converged, 2 diverged, 3 failed, 4 awaiting settlement
    status = np.zeros(batch, dtype=np.int8)

    for _ in range(cfg.max_sweeps):
        idx = np.flatnonzero(status == 0)
        if idx.size == 0:
            break
        xs = x[idx]
        ts = t[idx]
        step = np.minimum(dt[idx], t_end - ts)

        _, h_t, h_x = hom.eval(xs, ts, jac=True)
        dx = _solve_batch(h_x, -h_t)
        y = xs + dx * step[:, None]
        t1 = ts + step

        # Newton corrector at t1; the tolerance scales with the path norm so
        # escaping paths keep moving instead of crawling, and tightens from
        # the tracking relaxation to the endgame value past endgame_t
        tol = np.where(t1 > cfg.endgame_t, cfg.corrector_tol, cfg.corrector_tol * cfg.tracking_relax)
        accepted = np.zeros(idx.size, dtype=bool)
        need = np.arange(idx.size)
        for _ in range(cfg.newton_iters):
            h_val, _, h_jac = hom.eval(y[need], t1[need], jac=True)
            delta = _solve_batch(h_jac, -h_val)
            y[need] += delta
            step_norm = _row_norms(delta)
            scale = np.maximum(1.0, _row_norms(y[need]))
            done = step_norm < np.maximum(tol[need] * scale, 64.0 * _EPS * scale)
            accepted[need[done]] = True
            need = need[~done]
            if need.size == 0:
                break

        acc = np.flatnonzero(accepted)
        rej = np.flatnonzero(~accepted)
        if acc.size:
            gi = idx[acc]
            x[gi] = y[acc]
            t[gi] = t1[acc]
            last_norm[gi] = _row_norms(y[acc])
            streak[gi] += 1
            grow = streak[gi] >= 4
            dt[gi[grow]] = np.minimum(dt[gi[grow]] * 2.0, cfg.max_dt)
        if rej.size:
            gi = idx[rej]
            dt[gi] *= 0.5
            streak[gi] = 0

        norms = _row_norms(x[idx])
        diverged = norms > cfg.divergence_norm
        stuck = dt[idx] < cfg.min_dt
        status[idx[diverged]] = 2
        status[idx[stuck & ~diverged & (norms >= last_norm[idx])]] = 2
        status[idx[stuck & ~diverged & (norms < last_norm[idx])]] = 3
        arrived = (t[idx] >= t_end - 1e-15) & (status[idx] == 0)
        status[idx[arrived]] = 4
        in_endgame = (status[idx] == 0) & (t[idx] > cfg.endgame_t)
        eg_steps[idx[in_endgame]] += 1
        status[idx[(status[idx] == 0) & (eg_steps[idx] > cfg.endgame_sweeps)]] = 4

    status[status == 0] = 4  # global sweep budget ran out: settle by polishing

    extra_endpoints = np.zeros((0, k), dtype=np.complex128)
    settle = np.flatnonzero(status == 4)
    if settle.size:
        polished, certified = _newton_polish(hom.system, x[settle], cfg, iters=24)
        # every certified endpoint is a genuine root and is kept (duplicates
        # vanish in deduplication); the displacement only decides whether the
        # path itself counts as converged or as a basin jump off infinity
        moved = _row_norms(polished - x[settle])
        near = moved <= 0.5 * (1.0 + _row_norms(polished))
        good = certified & near
        x[settle[good]] = polished[good]
        status[settle[good]] = 1
        status[settle[~good]] = 2
        leaked = certified & ~near
        if np.any(leaked):
            extra_endpoints = polished[leaked]

    endpoints = np.concatenate([x[status == 1], extra_endpoints], axis=0)
    return (
        endpoints,
        int(np.count_nonzero(status == 1)),
        int(np.count_nonzero(status == 2)),
        int(np.count_nonzero(status == 3)),
    )


def _newton_polish(system: PinnedSystem, pts: np.ndarray, cfg: RunConfig, iters: int = 8):
    """Polish candidate solutions against the square target system."""
    x = pts.copy()
    done = np.zeros(x.shape[0], dtype=bool)
    need = np.arange(x.shape[0])
    for _ in range(iters):
        p = system.scatter(x[need])
        res, jac = system.square.residual_and_jacobian(p, system.num_unknowns)
        delta = _solve_batch(jac, -res)
        x[need] += delta
        small = _row_norms(delta) < np.maximum(
            cfg.corrector_tol, 64.0 * _EPS * (1.0 + _row_norms(x[need]))
        )
        # paths whose norm explodes during polishing are hopeless; drop early
        alive = np.isfinite(_row_norms(x[need])) & (_row_norms(x[need]) < cfg.divergence_norm)
        done[need[small & alive]] = True
        need = need[~small & alive]
        if need.size == 0:
            break
    certified = done & (system.square_residual_rel(x) < 1e-9)
    return x, certified


def _dedup(points: np.ndarray, tol: float) -> np.ndarray:
    """Indices of pairwise-distinct representatives at relative tolerance."""
    keep: list[int] = []
    for i, p in enumerate(points):
        if not keep:
            keep.append(i)
            continue
        reps = points[keep]
        dist = np.linalg.norm(reps - p, axis=1)
        scale = np.maximum(1.0, np.linalg.norm(p))
        if np.all(dist > tol * scale):
            keep.append(i)
    return np.array(keep, dtype=int)


def _close_under_sign_flips(system: PinnedSystem, points: np.ndarray, cfg: RunConfig):
    """Add any fiber points missing from a sign-flip orbit.

    The 2^d diagonal sign isometries preserve the pinned space and every
    half squared length, so images of solutions are solutions exactly.
    """
    mults = system.sign_flip_multipliers()
    pool = np.array(points, dtype=np.complex128)
    recovered = 0
    for base in points:
        for row in mults[1:]:
            image = base * row
            scale = max(1.0, float(np.linalg.norm(image)))
            dist = _row_norms(pool - image[None, :])
            if np.all(dist > cfg.dedup_tol * scale):
                pool = np.concatenate([pool, image[None, :]], axis=0)
                recovered += 1
    return pool, recovered


def track_fiber(system: PinnedSystem, config: RunConfig | None = None) -> SolutionSet:
    """Track the fiber of a pinned system and assemble the solution set.

    Reruns once with a fresh gamma when more than the configured fraction of
    paths neither converge nor diverge; a run that stays bad is returned
    flagged unreliable (or raises :class:`ExcessiveFailures` when tracking
    broke down outright).
    """
    cfg = config or RunConfig()
    k = system.num_equations
    if k > cfg.path_cap:
        raise PathBudgetExceeded(
            f"square system has {k} equations -> 2^{k} paths, cap is 2^{cfg.path_cap}"
        )
    total = 2**k
    rng = np.random.default_rng(np.random.SeedSequence(system.seed, spawn_key=(0xF1B,)))

    endpoints = np.zeros((0, k), dtype=np.complex128)
    stats = PathStats()
    gamma = 1j
    for _attempt in range(2):
        gamma = complex(np.exp(2j * np.pi * rng.uniform(0.05, 0.95)))
        hom = _Homotopy(system, gamma)
        bounds = list(range(0, total, cfg.chunk_size)) + [total]
        spans = list(zip(bounds[:-1], bounds[1:]))
        if cfg.threads > 1 and len(spans) > 1:
            with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
                parts = list(pool.map(lambda s: _track_chunk(hom, s[0], s[1], cfg), spans))
        else:
            parts = [_track_chunk(hom, lo, hi, cfg) for lo, hi in spans]
        endpoints = np.concatenate([p[0] for p in parts]) if parts else np.zeros((0, k))
        stats = PathStats(
            tracked=total,
            converged=sum(p[1] for p in parts),
            diverged=sum(p[2] for p in parts),
            failed=sum(p[3] for p in parts),
        )
        if stats.failed <= cfg.failure_fraction * total:
            break
    if stats.failed > max(1, total // 4):
        raise ExcessiveFailures(
            f"{stats.failed} of {total} paths failed even after a gamma rerun"
        )

    if len(endpoints):
        keep = _dedup(endpoints, cfg.dedup_tol)
        distinct = endpoints[keep]
        ok = system.surplus_residual_rel(distinct) < cfg.surplus_tol
        distinct = distinct[ok]
    else:
        distinct = endpoints
    if len(distinct):
        fiber, recovered = _close_under_sign_flips(system, distinct, cfg)
    else:
        fiber, recovered = distinct, 0

    if len(fiber):
        residuals = system.full_residual_rel(fiber)
        imag = np.max(np.abs(fiber.imag), axis=1)
        real_flags = imag < cfg.real_tol * np.maximum(1.0, np.linalg.norm(fiber, axis=1))
        jac = system.full_jacobian(fiber)
        sv = np.linalg.svd(jac, compute_uv=False)
        singular = sv[:, -1] <= cfg.jacobian_gap * sv[:, 0]
        newton_certified = residuals < 1e-9
        seed_dist = np.linalg.norm(fiber - system.seed_solution[None, :], axis=1)
        seed_found = bool(
            np.any(seed_dist < 1e-8 * max(1.0, float(np.linalg.norm(system.seed_solution))))
        )
    else:
        residuals = np.zeros(0)
        real_flags = np.zeros(0, dtype=bool)
        newton_certified = np.zeros(0, dtype=bool)
        singular = np.zeros(0, dtype=bool)
        seed_found = False

    reliable = (
        stats.failed <= cfg.failure_fraction * total
        and len(fiber) > 0
        and len(fiber) % 2**system.d == 0
        and not bool(np.any(singular))
        and seed_found
    )
    return SolutionSet(
        points=fiber,
        residuals=residuals,
        real_flags=real_flags,
        newton_certified=newton_certified,
        singular_flags=singular,
        stats=stats,
        recovered_mirrors=recovered,
        seed_found=seed_found,
        reliable=reliable,
        gamma=gamma,
    )
