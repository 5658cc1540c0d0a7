import numpy as np
import pytest
from scipy.optimize import linprog

from polar_orbitopes import algebra as al
from polar_orbitopes import harness as hz
from polar_orbitopes import orbitope as ob
from polar_orbitopes.errors import ShapeError

from conftest import chamber_anchor


# ---------------------------------------------------------------------------
# SampleConfig and K sampling
# ---------------------------------------------------------------------------

def test_sample_config_validation():
    with pytest.raises(ShapeError):
        hz.SampleConfig(count=0)
    with pytest.raises(ShapeError):
        hz.SampleConfig(exp_scale=0.0)


def test_sample_small_scale_near_identity():
    fam = al.sl_r(3)
    k = hz.sample_K(fam, hz.SampleConfig(seed=0, count=1, exp_scale=1e-8))[0]
    assert np.max(np.abs(k - np.eye(3))) < 1e-6


def test_sample_so_mn_block_structure():
    fam = al.so_mn(3, 2)
    for k in hz.sample_K(fam, hz.SampleConfig(seed=1, count=5)):
        assert np.max(np.abs(k[:3, 3:])) < 1e-12
        assert np.max(np.abs(k[3:, :3])) < 1e-12
        assert np.allclose(k.T @ k, np.eye(5), atol=1e-9)
        assert np.linalg.det(k[:3, :3]) > 0
        assert np.linalg.det(k[3:, 3:]) > 0


def test_sample_sl_h_quaternionic_structure():
    fam = al.sl_h(2)
    J = np.zeros((4, 4))
    J[:2, 2:] = np.eye(2)
    J[2:, :2] = -np.eye(2)
    for k in hz.sample_K(fam, hz.SampleConfig(seed=2, count=5)):
        assert np.allclose(k.conj().T @ k, np.eye(4), atol=1e-9)
        assert np.max(np.abs(J @ k.conj() - k @ J)) < 1e-9


def test_sample_preserves_orbit(family):
    x = al.embed_point(family, chamber_anchor(family))
    for k in hz.sample_K(family, hz.SampleConfig(seed=3, count=3)):
        y = hz.adjoint_orbit_point(x, k)
        assert np.allclose(al.chamber(y).a, al.chamber(x).a, atol=1e-8)


# ---------------------------------------------------------------------------
# bundled LP
# ---------------------------------------------------------------------------

def test_hull_member_vertices_and_mean(rng):
    pts = rng.normal(size=(12, 4))
    for p in pts[:4]:
        assert hz.hull_member_lp(pts, p)
    assert hz.hull_member_lp(pts, pts.mean(axis=0))


def test_hull_member_far_point_rejected(rng):
    pts = rng.normal(size=(12, 4))
    mean = pts.mean(axis=0)
    far = max(range(len(pts)), key=lambda i: np.linalg.norm(pts[i] - mean))
    y = mean + 1.1 * (pts[far] - mean)
    assert not hz.hull_member_lp(pts, y)
    # separating-direction certificate confirms y is outside
    d = y - mean
    assert (pts @ d).max() < y @ d - 1e-9


def test_hull_member_agrees_with_scipy(rng):
    pts = rng.normal(size=(15, 3))
    for _ in range(40):
        y = rng.normal(size=3) * 0.8
        ours = hz.hull_member_lp(pts, y)
        n = len(pts)
        res = linprog(np.zeros(n), A_eq=np.vstack([pts.T, np.ones(n)]),
                      b_eq=np.concatenate([y, [1.0]]), bounds=[(0, None)] * n,
                      method="highs")
        assert ours == (res.status == 0)


def test_hull_member_monotone_under_points(rng):
    pts = rng.normal(size=(8, 3))
    extra = rng.normal(size=(4, 3))
    for _ in range(20):
        y = rng.normal(size=3) * 0.5
        if hz.hull_member_lp(pts, y):
            assert hz.hull_member_lp(np.vstack([pts, extra]), y)


def test_cone_member(rng):
    gens = np.array([[1.0, 0.0], [1.0, 1.0]])
    assert hz.cone_member_lp(gens, [2.0, 1.0])
    assert not hz.cone_member_lp(gens, [0.0, -1.0])


def test_lp_degenerate_and_redundant_rows():
    # rank-deficient equality system (sum-zero plane embedded redundantly)
    pts = np.array([[1.0, -1.0, 0.0], [0.0, 1.0, -1.0], [-1.0, 0.0, 1.0]])
    assert hz.hull_member_lp(pts, pts.mean(axis=0))
    assert hz.hull_member_lp(pts, pts[0])
    assert not hz.hull_member_lp(pts, [2.0, -2.0, 0.0])


def test_lp_empty_points_rejected():
    with pytest.raises(ShapeError):
        hz.hull_member_lp(np.zeros((0, 3)), [0.0, 0.0, 0.0])


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def test_verify_theorem1_clean(family):
    x = al.embed_point(family, chamber_anchor(family))
    rep = hz.verify_theorem1(x, hz.SampleConfig(seed=5, count=60))
    assert rep["orbit_membership"]["failures"] == 0
    assert rep["convex_combinations"]["failures"] == 0
    assert rep["hull_agreement"]["failures"] == 0
    assert rep["rejection"]["failures"] == 0
    assert rep["orbit_membership"]["margins"]["min"] >= -1e-7


def test_verify_theorem1_zero_anchor():
    fam = al.sl_r(3)
    x = al.PointP.from_coords(fam, np.zeros(5))
    rep = hz.verify_theorem1(x, hz.SampleConfig(seed=5, count=10))
    assert rep["orbit_membership"]["failures"] == 0
    assert rep["rejection"]["checked"] == 0


def test_verify_kostant_clean(family):
    x = al.embed_point(family, chamber_anchor(family))
    rep = hz.verify_kostant(x, hz.SampleConfig(seed=6, count=60))
    assert rep["inclusion"]["failures"] == 0
    assert rep["inclusion"]["worst_slack"] >= -1e-8
    assert rep["vertex_witness_error"] < 1e-9
    assert rep["surjectivity_search"]["max_distance"] < 0.5


def test_reports_reproducible(family):
    x = al.embed_point(family, chamber_anchor(family))
    cfg = hz.SampleConfig(seed=42, count=25)
    r1 = hz.verify_theorem1(x, cfg)
    r2 = hz.verify_theorem1(x, cfg)
    assert ob.dump_json(r1) == ob.dump_json(r2)
    k1 = hz.verify_kostant(x, cfg)
    k2 = hz.verify_kostant(x, cfg)
    assert ob.dump_json(k1) == ob.dump_json(k2)
