"""Run configuration shared by the engine, the checkers and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .rigidity import DEFAULT_SEED


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a counting run.

    Every random choice flows from ``seed`` through a splittable generator,
    so identical configurations reproduce results bit-for-bit.  The
    corrector tolerance applies in the endgame (t > ``endgame_t``) and to
    final Newton polishing; during plain tracking it is relaxed by
    ``tracking_relax``.
    """

    seed: int = DEFAULT_SEED
    samples: int = 8
    path_cap: int = 22
    corrector_tol: float = 1e-12
    dedup_tol: float = 1e-8
    real_tol: float = 1e-7
    surplus_tol: float = 1e-8
    retries: int = 2
    threads: int = 1
    out: str | None = None
    # tracker internals
    initial_dt: float = 0.1
    max_dt: float = 0.1
    min_dt: float = 1e-14
    divergence_norm: float = 1e8
    endgame_t: float = 0.99
    trunc_eps: float = 1e-5
    tracking_relax: float = 1e7
    newton_iters: int = 3
    endgame_sweeps: int = 12
    chunk_size: int = 8192
    max_sweeps: int = 1500
    failure_fraction: float = 0.01
    coord_bound: int = 1024
    jacobian_gap: float = 1e-8
    max_dimension: int = 6

    def __post_init__(self) -> None:
        for name in ("corrector_tol", "dedup_tol", "real_tol", "surplus_tol",
                     "initial_dt", "max_dt", "min_dt"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.path_cap < 1:
            raise ValueError("path_cap must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")

    def with_(self, **kwargs) -> "RunConfig":
        return replace(self, **kwargs)


def threads_from_env(default: int = 1) -> int:
    """Thread-count fallback from the RIGIDITY_THREADS environment variable."""
    raw = os.environ.get("RIGIDITY_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default
