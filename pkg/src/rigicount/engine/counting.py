"""Complex and real realisation counting on top of the path tracker.

The complex count divides the pinned fiber cardinality by ``2^d`` and is
confirmed on two independently sampled targets; real counting repeats the
run over many real samples and reports per-sample real counts together with
their maximum, which is a lower bound on the real realisation number (a
maximum over all generic realisations that no finite sampling determines).
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..config import RunConfig
from ..frameworks import maxwell_threshold
from ..graphs import Graph
from ..rigidity import NotRigid, is_d_rigid
from .system import build_pinned_system
from .tracker import ExcessiveFailures, PathStats, SolutionSet, track_fiber


class CountDisagreement(RuntimeError):
    """Independent target samples kept disagreeing after the retry budget."""


@dataclass(frozen=True)
class CountResult:
    """Counting outcome plus enough provenance to recompute it."""

    c: int
    r_lower: int
    d: int
    samples: tuple[int, ...]  # per-sample real counts (real mode only)
    paths: PathStats
    reliable: bool
    seed: int
    sample_seeds: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "c": self.c,
            "r_lower": self.r_lower,
            "d": self.d,
            "paths": self.paths.to_json(),
            "samples": list(self.samples),
            "reliable": self.reliable,
            "seed": self.seed,
            "sample_seeds": list(self.sample_seeds),
        }


def _derived_seed(master: int, *key: int) -> int:
    return int(np.random.SeedSequence(master, spawn_key=tuple(key)).generate_state(1)[0])


def _is_simplex(g: Graph, d: int) -> bool:
    return g.n <= d + 1 and g.is_complete()


def _fiber_run(g: Graph, d: int, sample_seed: int, scalar: str, cfg: RunConfig) -> SolutionSet:
    system = build_pinned_system(g, d, sample_seed, scalar=scalar, config=cfg)
    return track_fiber(system, cfg)


def _fiber_runs(g: Graph, d: int, seeds, scalar: str, cfg: RunConfig) -> list[SolutionSet]:
    """Run independent fiber computations, on worker processes when the
    systems are large enough to amortize the spawn cost.  Results are merged
    in seed order, so parallelism never changes the outcome."""
    big = maxwell_threshold(g.n, d) >= 12
    if cfg.threads > 1 and big and len(seeds) > 1:
        single = cfg.with_(threads=1)
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            futures = [pool.submit(_fiber_run, g, d, s, scalar, single) for s in seeds]
            return [f.result() for f in futures]
    return [_fiber_run(g, d, s, scalar, cfg) for s in seeds]


def count_complex(g: Graph, d: int, config: RunConfig | None = None) -> CountResult:
    """The complex realisation number of a d-rigid graph.

    Two independent target samples must agree before the count is reported;
    disagreeing or unreliable pairs are retried with fresh seeds up to the
    configured budget.
    """
    cfg = config or RunConfig()
    rigid, _ = is_d_rigid(g, d, cfg.seed)
    if not rigid:
        raise NotRigid(f"graph is not {d}-rigid")
    if _is_simplex(g, d):
        return CountResult(1, 0, d, (), PathStats(), True, cfg.seed, ())

    last: tuple[int, int] | None = None
    for attempt in range(cfg.retries + 1):
        seeds = (_derived_seed(cfg.seed, 1, attempt, 0), _derived_seed(cfg.seed, 1, attempt, 1))
        try:
            runs = _fiber_runs(g, d, seeds, "complex", cfg)
        except ExcessiveFailures:
            continue  # catastrophic tracking run; retry with fresh targets
        counts = [len(r) // 2**d for r in runs]
        agreed = counts[0] == counts[1] and all(r.reliable for r in runs)
        if agreed:
            return CountResult(
                c=counts[0],
                r_lower=0,
                d=d,
                samples=(),
                paths=runs[0].stats + runs[1].stats,
                reliable=True,
                seed=cfg.seed,
                sample_seeds=seeds,
            )
        last = (counts[0], counts[1])
    raise CountDisagreement(
        f"complex counts disagree after {cfg.retries + 1} attempts: last pair {last}"
    )


def count_real_samples(
    g: Graph, d: int, samples: int | None = None, config: RunConfig | None = None
) -> CountResult:
    """Sampled lower bound on the real realisation number.

    Each sample draws a real integer realisation, counts the real points of
    its fiber, and the maximum over samples is reported as ``r_lower``.
    This never claims to equal the true maximum over generic realisations.
    """
    cfg = config or RunConfig()
    nsamples = cfg.samples if samples is None else int(samples)
    if nsamples < 1:
        raise ValueError("need at least one sample")
    rigid, _ = is_d_rigid(g, d, cfg.seed)
    if not rigid:
        raise NotRigid(f"graph is not {d}-rigid")
    if _is_simplex(g, d):
        return CountResult(1, 1, d, (1,) * nsamples, PathStats(), True, cfg.seed, ())

    seeds = tuple(_derived_seed(cfg.seed, 2, i) for i in range(nsamples))
    runs = _fiber_runs(g, d, seeds, "real", cfg)
    real_counts: list[int] = []
    complex_counts: list[int] = []
    stats = PathStats()
    reliable = True
    for run in runs:
        real_counts.append(run.real_count // 2**d)
        complex_counts.append(len(run) // 2**d)
        stats = stats + run.stats
        reliable = reliable and run.reliable and run.real_count % 2**d == 0
    reliable = reliable and len(set(complex_counts)) == 1
    return CountResult(
        c=max(complex_counts),
        r_lower=max(real_counts),
        d=d,
        samples=tuple(real_counts),
        paths=stats,
        reliable=reliable,
        seed=cfg.seed,
        sample_seeds=seeds,
    )
