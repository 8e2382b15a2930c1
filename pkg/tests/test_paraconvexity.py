import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from conftest import brute_hull_distance, rotation
from paraselect.benchmarks import segment_cloud, vgraph_cloud, vgraph_sampling_radius
from paraselect.errors import InputError, ResourceError
from paraselect.geometry import (TOL_GEO, Ball, PointCloud, ball_intersect, distance_to_cloud,
                                 distance_to_hull)
from paraselect.paraconvexity import (default_centers, default_radii, defect, hull_distance,
                                      is_alpha_paraconvex, local_ratio, min_enclosing_ball,
                                      oracle_defect, profile)

TWO = PointCloud([[0.0], [1.0]])


def small_clouds(max_points=7, max_dim=2):
    return st.integers(1, max_dim).flatmap(lambda d: arrays(
        float, st.tuples(st.integers(2, max_points), st.just(d)),
        elements=st.floats(-3, 3, allow_nan=False, allow_infinity=False)))


def replay(P, rep):
    """Recompute the witness ratio from scratch with the geometry primitives."""
    c, r, q = rep.witness
    assert distance_to_cloud(c, P) < r
    S = ball_intersect(P, Ball(c, r))
    assert S is not None
    assert distance_to_hull(q, S)[0] <= TOL_GEO
    return max(distance_to_cloud(q, P) - rep.sampling_radius, 0.0) / r


# --- spec examples ---------------------------------------------------------


def test_two_points_defect_near_one():
    rep = defect(TWO, resolution=0.01)
    assert 0.95 <= rep.alpha_hat <= 1.0 + TOL_GEO
    c, r, q = rep.witness
    assert c[0] == pytest.approx(0.5) and q[0] == pytest.approx(0.5)
    assert r == pytest.approx(0.5, rel=1e-6)


def test_sampled_segment_is_nearly_convex():
    P = segment_cloud(11)  # gap 0.1
    assert defect(P, sampling_radius=0.05).alpha_hat <= 0.06


def test_raw_samples_of_a_segment_look_maximally_nonconvex():
    # without the sampling correction every finite set scores about 1
    assert defect(segment_cloud(11)).alpha_hat >= 0.95


def test_vgraph_defect_strictly_inside_and_matches_oracle():
    step = 0.1
    V = vgraph_cloud(0.0, step=step)
    rho = vgraph_sampling_radius(step)
    a = defect(V, sampling_radius=rho).alpha_hat
    o = oracle_defect(V, 0.01, sampling_radius=rho)
    assert 0 < a < 1
    assert abs(a - o) <= 0.05


def test_fine_vgraph_defect_near_analytic_value():
    # the worst ball sits on the corner: distance 1/sqrt(5) per unit radius
    rho = vgraph_sampling_radius(0.01)
    a = defect(vgraph_cloud(0.0), sampling_radius=rho).alpha_hat
    assert a == pytest.approx(1 / math.sqrt(5) - rho, abs=5e-3)


def test_oracle_examples():
    assert oracle_defect(PointCloud([[0.3, 0.4]]), 0.01) == 0.0
    assert 0.95 <= oracle_defect(TWO, 0.01) <= 1.0
    # triangle with a dense interior fill, sampling correction at the fill spacing
    t = np.linspace(0, 1, 5)
    a, b = np.meshgrid(t, t)
    keep = a + b <= 1 + 1e-12
    P = PointCloud(np.column_stack([a[keep], b[keep]]))
    res = 0.05
    gap = 1 / 4
    assert oracle_defect(P, res, sampling_radius=gap * math.sqrt(2) / 2) <= 2 * res / P.diameter()


def test_profile_examples():
    prof = profile(TWO, radii=[0.6, 2.0])
    assert prof.values[0] == pytest.approx(0.5 / 0.6, abs=1e-9)
    assert prof.values[1] == pytest.approx(0.25, abs=1e-9)
    assert oracle_defect(TWO, 0.01, radius=0.6) == pytest.approx(0.5 / 0.6, abs=0.02)
    assert oracle_defect(TWO, 0.01, radius=2.0) == pytest.approx(0.25, abs=0.01)


def test_profile_of_convex_samples_is_zero():
    prof = profile(segment_cloud(21), sampling_radius=0.025)
    assert np.all(prof.values <= 1e-12)


def test_profile_max_equals_defect_without_refinement():
    rng = np.random.default_rng(3)
    P = PointCloud(rng.uniform(0, 1, (6, 2)))
    radii = default_radii(P, 10)
    centers = default_centers(P, 400)
    prof = profile(P, radii=radii, centers=centers, refine=False)
    rep = defect(P, centers=centers, radii=radii, refine=False)
    assert rep.alpha_hat == pytest.approx(prof.values.max(), abs=1e-12)


def test_is_alpha_paraconvex_examples():
    assert is_alpha_paraconvex(segment_cloud(11), 0.0, sampling_radius=0.05) == (True, None)
    ok, witness = is_alpha_paraconvex(TWO, 0.5)
    assert not ok
    c, r, q = witness
    assert abs(c[0] - 0.5) < 0.05 and 0.5 < r < 0.55 and abs(q[0] - 0.5) < 0.05
    assert is_alpha_paraconvex(PointCloud(np.random.default_rng(0).normal(size=(9, 3))), 1.0)[0]
    with pytest.raises(InputError):
        is_alpha_paraconvex(TWO, 1.5)


# --- invariants ------------------------------------------------------------


@settings(max_examples=25)
@given(small_clouds(max_dim=3))
def test_klee_bound(P):
    rep = defect(PointCloud(P), budget=200, radius_count=8)
    assert 0.0 <= rep.alpha_hat <= 1.0 + TOL_GEO


@settings(max_examples=25)
@given(small_clouds(), st.sampled_from([0.0, 0.05, 0.2]))
def test_witness_replays(P, rho):
    cloud = PointCloud(P)
    rep = defect(cloud, budget=200, radius_count=8, sampling_radius=rho)
    assert replay(cloud, rep) >= rep.alpha_hat - TOL_GEO
    c, r, q = rep.witness
    assert rep.alpha_hat * r <= max(distance_to_cloud(q, cloud) - rho, 0.0) + TOL_GEO


@settings(max_examples=15)
@given(small_clouds(), st.sampled_from([0.0, 0.1]))
def test_refining_grids_never_lowers_the_estimate(P, rho):
    cloud = PointCloud(P)
    coarse_c = default_centers(cloud, 64)
    fine_c = np.vstack([coarse_c, default_centers(cloud, 400)])
    coarse_r = default_radii(cloud, 6)
    fine_r = np.concatenate([coarse_r, default_radii(cloud, 13)])
    a = defect(cloud, centers=coarse_c, radii=coarse_r, refine=False, sampling_radius=rho)
    b = defect(cloud, centers=fine_c, radii=fine_r, refine=False, sampling_radius=rho)
    assert b.alpha_hat >= a.alpha_hat - 1e-12


@settings(max_examples=15)
@given(small_clouds(max_dim=3), st.integers(0, 2**31), st.sampled_from([0.0, 0.1]))
def test_isometry_invariance(P, seed, rho):
    rng = np.random.default_rng(seed)
    cloud = PointCloud(P)
    R = rotation(cloud.dim, rng)
    t = rng.uniform(-5, 5, cloud.dim)
    moved = PointCloud(P @ R.T + t)
    centers = default_centers(cloud, 100)
    radii = default_radii(cloud, 6)
    a = defect(cloud, centers=centers, radii=radii, sampling_radius=rho)
    b = defect(moved, centers=centers @ R.T + t, radii=radii, sampling_radius=rho)
    assert b.alpha_hat == pytest.approx(a.alpha_hat, abs=1e-9)


@settings(max_examples=15)
@given(small_clouds(), st.floats(0.1, 20))
def test_scale_invariance(P, s):
    cloud = PointCloud(P)
    centers, radii = default_centers(cloud, 100), default_radii(cloud, 6)
    a = defect(cloud, centers=centers, radii=radii, sampling_radius=0.05)
    b = defect(PointCloud(s * P), centers=s * centers, radii=s * radii, sampling_radius=0.05 * s)
    assert b.alpha_hat == pytest.approx(a.alpha_hat, abs=1e-9)


def test_deterministic_and_thread_independent(monkeypatch):
    P = PointCloud(np.random.default_rng(5).uniform(0, 1, (10, 2)))
    a = defect(P, seed=3, sampling_radius=0.02).to_dict()
    b = defect(P, seed=3, sampling_radius=0.02).to_dict()
    monkeypatch.setenv("PARASELECT_THREADS", "4")
    c = defect(P, seed=3, sampling_radius=0.02).to_dict()
    assert a == b == c


def test_convex_fill_has_zero_defect_at_its_sampling_radius():
    t = np.linspace(0, 1, 6)
    g = np.stack(np.meshgrid(t, t, t), -1).reshape(-1, 3)
    P = PointCloud(g)
    cover = 0.5 * 0.2 * math.sqrt(3)  # half the cube diagonal of a cell
    assert defect(P, sampling_radius=cover).alpha_hat == 0.0
    assert defect(P, sampling_radius=cover).search_resolution.get("pruned_by_global_bound")


# --- exact kernels ---------------------------------------------------------


@settings(max_examples=30)
@given(small_clouds(max_points=9, max_dim=3), st.integers(0, 2**31))
def test_hull_distance_is_an_attained_upper_bound(P, seed):
    cloud = PointCloud(P)
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(len(P), size=rng.integers(1, len(P) + 1), replace=False))
    D, q = hull_distance(cloud, idx)
    S = P[idx]
    assert brute_hull_distance(q, S)[0] <= 1e-9 * max(1, np.abs(P).max())
    assert distance_to_cloud(q, cloud) == pytest.approx(D, abs=1e-12)
    lam = rng.dirichlet(np.ones(len(S)), size=2000)
    sampled = max(distance_to_cloud(x, cloud) for x in lam @ S)
    assert sampled <= D + 1e-9


def test_hull_distance_on_a_fine_grid():
    # dense sweep over a triangle hull among extra sites
    P = np.array([[0, 0], [1, 0], [0, 1], [0.6, 0.5], [0.2, 0.1]])
    cloud = PointCloud(P)
    D, _ = hull_distance(cloud, [0, 1, 2])
    t = np.linspace(0, 1, 801)
    a, b = np.meshgrid(t, t)
    keep = a + b <= 1
    Q = np.column_stack([a[keep], b[keep]])
    grid = np.sqrt(((Q[:, None] - P[None]) ** 2).sum(-1)).min(1).max()
    assert grid <= D + 1e-12 and D - grid < 2e-3


@settings(max_examples=30)
@given(small_clouds(max_points=8, max_dim=3))
def test_min_enclosing_ball(P):
    c, r = min_enclosing_ball(P)
    assert np.linalg.norm(P - c, axis=1).max() <= r * (1 + 1e-12) + 1e-12
    best = minimize(lambda x: np.linalg.norm(P - x, axis=1).max(), P.mean(0),
                    method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000})
    assert r <= best.fun + 1e-9


def test_local_ratio_replays_a_ball():
    ratio, q = local_ratio(TWO, [0.5], 0.6)
    assert ratio == pytest.approx(0.5 / 0.6) and q[0] == pytest.approx(0.5)
    with pytest.raises(InputError):
        local_ratio(TWO, [5.0], 0.1)


# --- errors and exports ----------------------------------------------------


def test_oracle_limits():
    with pytest.raises(InputError):
        oracle_defect(PointCloud(np.zeros((2, 3)) + [[0, 0, 0], [1, 0, 0]]), 0.1)
    with pytest.raises(InputError):
        oracle_defect(PointCloud(np.arange(63.0)[:, None]), 0.1)
    with pytest.raises(ResourceError) as info:
        oracle_defect(PointCloud([[0, 0], [1, 0], [0, 1.0]]), 0.01, max_evaluations=1e4)
    assert info.value.partial is not None


def test_bad_parameters():
    with pytest.raises(InputError):
        defect(TWO, sampling_radius=-1)
    with pytest.raises(InputError):
        defect(TWO, radii=[0.0, 1.0])
    with pytest.raises(InputError):
        defect(TWO, centers=[[0.0, 0.0]])


def test_report_and_profile_exports():
    rep = defect(TWO, resolution=0.05).to_dict()
    assert set(rep) >= {"alpha_hat", "witness", "search_resolution", "sampling_radius"}
    assert set(rep["witness"]) == {"center", "radius", "hull_point"}
    csv = profile(TWO, radii=[0.6, 2.0]).to_csv().splitlines()
    assert csv[0] == "r,h_hat" and len(csv) == 3 and all(len(r.split(",")) == 2 for r in csv)
