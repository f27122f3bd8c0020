"""Numerical realisation-counting engine."""

from .counting import CountDisagreement, CountResult, count_complex, count_real_samples
from .system import EdgeKernel, PinnedSystem, build_pinned_system
from .tracker import (
    ExcessiveFailures,
    PathBudgetExceeded,
    PathStats,
    SolutionSet,
    track_fiber,
)

__all__ = [
    "CountDisagreement",
    "CountResult",
    "count_complex",
    "count_real_samples",
    "EdgeKernel",
    "PinnedSystem",
    "build_pinned_system",
    "ExcessiveFailures",
    "PathBudgetExceeded",
    "PathStats",
    "SolutionSet",
    "track_fiber",
]
