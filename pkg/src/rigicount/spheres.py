"""Loader for the bundled triangulated-sphere corpus.

The corpus holds every combinatorial type of triangulated 2-sphere with at
most 8 vertices (23 in total), generated by exhaustive vertex splitting
from the tetrahedron and frozen as JSON face lists.
"""

from __future__ import annotations

import json
from importlib import resources

from .graphs import Triangulation


def bundled_sphere_names() -> list[str]:
    root = resources.files("rigicount").joinpath("data/spheres")
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled_sphere(name: str) -> Triangulation:
    root = resources.files("rigicount").joinpath("data/spheres")
    doc = json.loads(root.joinpath(name).read_text())
    return Triangulation(int(doc["n"]), tuple(tuple(int(v) for v in f) for f in doc["faces"]))


def bundled_spheres(max_n: int | None = None) -> list[tuple[str, Triangulation]]:
    out = []
    for name in bundled_sphere_names():
        t = load_bundled_sphere(name)
        if max_n is None or t.n <= max_n:
            out.append((name, t))
    return out
