import numpy as np
import pytest

from rigicount import gallery
from rigicount.config import RunConfig
from rigicount.engine import (
    PathBudgetExceeded,
    build_pinned_system,
    count_complex,
    count_real_samples,
    track_fiber,
)
from rigicount.rigidity import NotRigid

CFG = RunConfig(seed=90125)


def test_build_system_square_counts():
    k4e = gallery.complete(4).without_edge(2, 3)
    sys_ = build_pinned_system(k4e, 2, 5, config=CFG)
    assert sys_.num_equations == 5 == sys_.num_unknowns
    assert sys_.surplus_edges == ()

    k4 = gallery.complete(4)
    sys_ = build_pinned_system(k4, 2, 5, config=CFG)
    assert sys_.num_equations == 5
    assert len(sys_.surplus_edges) == 1


def test_build_system_benchmark_graph():
    g = gallery.benchmark8_count1()
    sys_ = build_pinned_system(g, 2, 5, config=CFG)
    assert sys_.num_equations == 13
    assert len(sys_.surplus_edges) == 1


def test_build_system_seed_solution_consistent():
    g = gallery.complete_multipartite([1, 1, 3])
    for scalar in ("real", "complex"):
        sys_ = build_pinned_system(g, 2, 77, scalar=scalar, config=CFG)
        worst = float(sys_.full_residual_rel(sys_.seed_solution[None, :])[0])
        assert worst < 1e-10
        if scalar == "real":
            assert np.all(np.abs(sys_.seed_solution.imag) == 0)


def test_build_system_rejects_flexible():
    with pytest.raises(NotRigid):
        build_pinned_system(gallery.cycle(4), 2, 5, config=CFG)


def test_path_budget():
    g = gallery.benchmark8_count1()
    with pytest.raises(PathBudgetExceeded):
        sys_ = build_pinned_system(g, 2, 5, config=CFG.with_(path_cap=10))
        track_fiber(sys_, CFG.with_(path_cap=10))


def test_fiber_k4_minus_edge_basics():
    g = gallery.complete(4).without_edge(2, 3)
    sys_ = build_pinned_system(g, 2, 11, config=CFG)
    sol = track_fiber(sys_, CFG)
    assert len(sol) == 8  # 2^2 * 2
    assert len(sol) % 4 == 0
    assert sol.seed_found
    assert sol.reliable
    assert np.all(sol.residuals < 1e-8)
    assert not np.any(sol.singular_flags)


def test_fiber_sign_flip_invariance():
    g = gallery.complete_multipartite([1, 1, 3])
    sys_ = build_pinned_system(g, 2, 13, config=CFG)
    sol = track_fiber(sys_, CFG)
    mults = sys_.sign_flip_multipliers()
    pts = sol.points
    for row in mults:
        for img in pts * row[None, :]:
            dist = np.linalg.norm(pts - img[None, :], axis=1)
            assert dist.min() < 1e-7 * max(1.0, float(np.linalg.norm(img)))


def test_count_simplex_shortcut():
    assert count_complex(gallery.complete(3), 2, CFG).c == 1
    assert count_complex(gallery.complete(4), 3, CFG).c == 1
    assert count_complex(gallery.complete(2), 3, CFG).c == 1


def test_count_rejects_flexible():
    with pytest.raises(NotRigid):
        count_complex(gallery.cycle(4), 2, CFG)
    with pytest.raises(NotRigid):
        count_complex(gallery.double_banana(), 3, CFG)


def test_count_k4_minus_edge():
    res = count_complex(gallery.complete(4).without_edge(0, 3), 2, CFG)
    assert res.c == 2
    assert res.reliable


def test_count_k4():
    res = count_complex(gallery.complete(4), 2, CFG)
    assert res.c == 1


def test_count_multipartite_family_small():
    # one part of size t plus d singletons: count 2^(t-1)
    assert count_complex(gallery.complete_multipartite([1, 1, 2]), 2, CFG).c == 2
    assert count_complex(gallery.complete_multipartite([1, 1, 1, 2]), 3, CFG).c == 2


def test_real_counts_bounded_by_complex():
    g = gallery.flip_demo_graph()
    res = count_real_samples(g, 2, samples=6, config=CFG)
    assert res.c == 4
    assert all(s <= res.c for s in res.samples)
    assert res.r_lower == max(res.samples)
    assert res.r_lower >= 1


def test_real_count_k4_always_one():
    res = count_real_samples(gallery.complete(4), 2, samples=4, config=CFG)
    assert set(res.samples) == {1}


def test_monotone_under_edge_addition():
    g = gallery.complete(4).without_edge(0, 3)
    assert count_complex(g, 2, CFG).c >= count_complex(gallery.complete(4), 2, CFG).c


def test_count_result_json_shape():
    res = count_complex(gallery.complete(4).without_edge(0, 3), 2, CFG)
    doc = res.to_json()
    assert set(doc) >= {"c", "r_lower", "d", "paths", "samples", "reliable", "seed"}
    assert set(doc["paths"]) == {"tracked", "converged", "diverged", "failed"}


def test_determinism_same_seed_same_result():
    g = gallery.complete_multipartite([1, 1, 3])
    a = count_complex(g, 2, CFG)
    b = count_complex(g, 2, CFG)
    assert a.to_json() == b.to_json()


def test_jacobian_matches_central_differences():
    g = gallery.complete_multipartite([1, 1, 3])
    sys_ = build_pinned_system(g, 2, 21, config=CFG)
    rng = np.random.default_rng(0)
    x = rng.normal(size=(3, sys_.num_unknowns)) + 1j * rng.normal(size=(3, sys_.num_unknowns))
    jac = sys_.full_jacobian(x)
    h = 1e-6
    for col in range(sys_.num_unknowns):
        bump = np.zeros(sys_.num_unknowns, dtype=complex)
        bump[col] = h
        fp = sys_.full.residual(sys_.scatter(x + bump))
        fm = sys_.full.residual(sys_.scatter(x - bump))
        approx = (fp - fm) / (2 * h)
        assert np.allclose(approx, jac[:, :, col], rtol=1e-6, atol=1e-6)


def test_threads_do_not_change_results():
    g = gallery.complete_multipartite([1, 1, 3])
    a = count_complex(g, 2, CFG.with_(threads=1))
    b = count_complex(g, 2, CFG.with_(threads=2))
    assert a.to_json() == b.to_json()
