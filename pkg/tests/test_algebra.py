import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polar_orbitopes import algebra as al
from polar_orbitopes.errors import ChamberError, ShapeError, SizeError

from conftest import DESK_FAMILIES, chamber_anchor


# ---------------------------------------------------------------------------
# families and bases
# ---------------------------------------------------------------------------

def test_family_parameters():
    assert al.sl_r(3).dim_p == 5
    assert al.sl_r(4).dim_p == 9
    assert al.so_mn(3, 2).dim_p == 6
    assert al.sl_h(2).dim_p == 5
    assert al.sl_r(4).restricted_rank == 3
    assert al.so_mn(3, 2).weyl_type == "B"
    assert al.so_mn(2, 2).weyl_type == "D"
    assert al.sl_h(2).weyl_type == "A"


def test_family_validation():
    with pytest.raises(ShapeError):
        al.sl_r(1)
    with pytest.raises(ShapeError):
        al.so_mn(1, 1)
    with pytest.raises(ShapeError):
        al.sl_h(1)


def test_so_mn_reorders_to_m_ge_n():
    fam = al.so_mn(2, 3)
    assert (fam.m, fam.n) == (3, 2)
    assert fam.user_transposed
    assert fam.label == "so_mn:2,3"


def test_dim_p_matches_basis_length(family):
    assert len(al.basis_of_p(family)) == family.dim_p


def test_basis_of_k_dimension(family):
    expected = {
        "sl_r": family.n * (family.n - 1) // 2,
        "so_mn": family.m * (family.m - 1) // 2 + family.n * (family.n - 1) // 2,
        "sl_h": family.m * (2 * family.m + 1),
    }[family.kind]
    assert len(al.basis_of_k(family)) == expected


def test_coords_round_trip_bit_exact(family, rng):
    c = rng.normal(size=family.dim_p)
    x = al.PointP.from_coords(family, c)
    assert np.array_equal(x.coords, c)
    assert np.array_equal(al.coords_from_matrix(family, x.matrix), c)
    x2 = al.PointP.from_matrix(family, x.matrix)
    assert np.array_equal(x2.matrix, x.matrix)
    assert np.array_equal(x2.coords, x.coords)


def test_point_shape_validation():
    fam = al.sl_r(3)
    with pytest.raises(ShapeError):
        al.PointP.from_matrix(fam, np.eye(3))        # not traceless
    with pytest.raises(ShapeError):
        al.PointP.from_matrix(fam, np.array([[0., 1, 0], [0, 0, 0], [0, 0, 0]]))
    fam2 = al.so_mn(3, 2)
    bad = np.zeros((5, 5))
    bad[0, 0] = 1.0
    with pytest.raises(ShapeError):
        al.PointP.from_matrix(fam2, bad)


# ---------------------------------------------------------------------------
# cartan_decompose
# ---------------------------------------------------------------------------

def test_cartan_decompose_symmetric_is_fixed():
    fam = al.sl_r(3)
    X = np.diag([2.0, -1.0, -1.0])
    k, p = al.cartan_decompose(X, fam)
    assert np.allclose(k, 0)
    assert np.allclose(p.matrix, X)


def test_cartan_decompose_so_mn_p_block():
    fam = al.so_mn(2, 1)
    X = np.array([[0.0, 0, 1], [0, 0, 0], [1, 0, 0]])
    k, p = al.cartan_decompose(X, fam)
    assert np.allclose(k, 0)
    assert np.allclose(p.matrix, X)


def test_cartan_decompose_splits_upper_triangular():
    fam = al.sl_r(2)
    X = np.array([[0.0, 1.0], [0.0, 0.0]])
    k, p = al.cartan_decompose(X, fam)
    assert np.allclose(k, [[0, 0.5], [-0.5, 0]])
    assert np.allclose(p.matrix, [[0, 0.5], [0.5, 0]])
    assert np.array_equal(k + p.matrix, X)


def test_cartan_decompose_exact_sum(family, rng):
    # random algebra element: k-part + p-part
    p = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
    kb = al.basis_of_k(family)
    u = sum(c * E for c, E in zip(rng.normal(size=len(kb)), kb))
    X = u + p.matrix
    k, p2 = al.cartan_decompose(X, family)
    assert np.max(np.abs(k + p2.matrix - X)) < 1e-14
    assert np.allclose(p2.matrix, p.matrix, atol=1e-12)


def test_cartan_decompose_rejects_non_algebra():
    with pytest.raises(ShapeError):
        al.cartan_decompose(np.eye(3), al.sl_r(3))
    with pytest.raises(ShapeError):
        al.cartan_decompose(np.ones((5, 5)), al.so_mn(3, 2))


# ---------------------------------------------------------------------------
# chamber
# ---------------------------------------------------------------------------

def test_chamber_sl_r_sorted_diagonal():
    fam = al.sl_r(3)
    x = al.embed_point(fam, [2.0, -1.0, -1.0])
    cp = al.chamber(x)
    assert np.allclose(cp.a, [2.0, -1.0, -1.0])


def test_chamber_so_mn_singular_values():
    # independent oracle: B has orthogonal columns of norms 2 and 1
    fam = al.so_mn(3, 2)
    x = al.point_from_block(fam, np.array([[0.0, 2.0], [1.0, 0.0], [0.0, 0.0]]))
    cp = al.chamber(x)
    assert np.allclose(cp.a, [2.0, 1.0])
    # cross-check via eigenvalues of B^T B
    B = np.array([[0.0, 2.0], [1.0, 0.0], [0.0, 0.0]])
    sv = np.sqrt(np.sort(np.linalg.eigvalsh(B.T @ B))[::-1])
    assert np.allclose(cp.a, sv)


def test_chamber_d_type_sign_rule():
    fam = al.so_mn(2, 2)
    x = al.point_from_block(fam, np.diag([3.0, -1.0]))
    assert np.allclose(al.chamber(x).a, [3.0, -1.0])
    x2 = al.point_from_block(fam, np.diag([3.0, 1.0]))
    assert np.allclose(al.chamber(x2).a, [3.0, 1.0])


def test_d_type_sign_not_reachable_by_rotations():
    # dense SO(2) x SO(2) sampling never maps diag(3,-1) near diag(3,1)
    B = np.diag([3.0, -1.0])
    target = np.diag([3.0, 1.0])
    thetas = np.linspace(0, 2 * np.pi, 360, endpoint=False)

    def rot(t):
        return np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])

    best = np.inf
    for t1 in thetas:
        g = rot(t1)
        gB = g @ B
        for t2 in thetas[::4]:
            best = min(best, np.linalg.norm(gB @ rot(t2).T - target))
    assert best > 0.5


def test_chamber_witness_residual(family, rng):
    for _ in range(5):
        x = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
        cp = al.chamber(x)
        k = cp.witness
        target = al.embed_point(family, cp.a).matrix
        assert np.max(np.abs(k @ x.matrix @ k.conj().T - target)) < 1e-9


def test_chamber_round_trip(family, rng):
    # reconstructing from chamber coordinates through the witness
    for _ in range(5):
        x = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
        cp = al.chamber(x)
        k = cp.witness
        back = k.conj().T @ al.embed_point(family, cp.a).matrix @ k
        assert np.max(np.abs(back - x.matrix)) < 1e-8


def test_chamber_sl_h_doubled_spectrum(rng):
    fam = al.sl_h(2)
    x = al.PointP.from_coords(fam, rng.normal(size=fam.dim_p))
    cp = al.chamber(x)
    ambient = np.linalg.eigvalsh(x.matrix)
    doubled = np.sort(np.repeat(cp.a, 2))
    assert np.allclose(np.sort(ambient), doubled, atol=1e-9)
    assert abs(cp.a.sum()) < 1e-9


# ---------------------------------------------------------------------------
# weyl orbits
# ---------------------------------------------------------------------------

def test_weyl_orbit_a_type_permutations():
    fam = al.sl_r(3)
    orb = al.weyl_orbit(al.ChamberPoint(fam, np.array([1.0, 0.0, -1.0])))
    assert len(orb) == 6


def test_weyl_orbit_b_type_signed():
    fam = al.so_mn(3, 2)
    orb = al.weyl_orbit(al.ChamberPoint(fam, np.array([2.0, 1.0])))
    expect = {(2.0, 1.0), (1.0, 2.0), (-2.0, 1.0), (1.0, -2.0),
              (2.0, -1.0), (-1.0, 2.0), (-2.0, -1.0), (-1.0, -2.0)}
    assert {tuple(v) for v in orb} == expect


def test_weyl_orbit_d_type_even_signs():
    fam = al.so_mn(2, 2)
    orb = al.weyl_orbit(al.ChamberPoint(fam, np.array([1.0, 1.0])))
    assert {tuple(v) for v in orb} == {(1.0, 1.0), (-1.0, -1.0)}


def test_weyl_orbit_generic_sizes(family, rng):
    # generic points: |orbit| = group order
    a = chamber_anchor(family)
    orb = al.weyl_orbit(al.ChamberPoint(family, a))
    L = family.chamber_len
    expect = {
        "A": math.factorial(L),
        "B": math.factorial(L) * 2**L,
        "D": math.factorial(L) * 2 ** (L - 1),
    }[family.weyl_type]
    assert len(orb) == expect
    assert len(al.weyl_elements(family)) == expect


def test_weyl_orbit_cap():
    with pytest.raises(SizeError):
        al.weyl_orbit(al.ChamberPoint(al.sl_r(15), np.arange(15.0) - 7.0), cap=1000)


def test_weyl_witness_realizes_action(family, rng):
    a = chamber_anchor(family) + 0.1 * rng.normal(size=family.chamber_len)
    if family.weyl_type == "A":
        a -= a.mean()
    x = al.embed_point(family, a)
    for w in al.weyl_elements(family):
        k = al.weyl_witness(family, w)
        lhs = k @ x.matrix @ k.conj().T
        rhs = al.embed_point(family, w.apply(a)).matrix
        assert np.max(np.abs(lhs - rhs)) < 1e-12
        assert np.max(np.abs(k.conj().T @ k - np.eye(family.ambient_size))) < 1e-12


def test_orbit_projection_consistency(family):
    # chamber coordinates of any Weyl image equal the original chamber point
    a = chamber_anchor(family)
    for v in al.weyl_orbit(al.ChamberPoint(family, a)):
        cp = al.chamber(al.embed_point(family, v))
        assert np.allclose(cp.a, a, atol=1e-9)


# ---------------------------------------------------------------------------
# kostant projection
# ---------------------------------------------------------------------------

def test_kostant_project_identity_on_a(family):
    a = chamber_anchor(family)
    x = al.embed_point(family, a)
    assert np.allclose(al.kostant_project(x), a)


def test_kostant_project_zero_diagonal():
    fam = al.sl_r(2)
    x = al.PointP.from_matrix(fam, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(al.kostant_project(x), [0.0, 0.0])


def test_kostant_project_reads_block_diagonal():
    fam = al.so_mn(3, 2)
    x = al.point_from_block(fam, np.array([[1.0, 5.0], [5.0, 2.0], [0.0, 0.0]]))
    assert np.allclose(al.kostant_project(x), [1.0, 2.0])


def test_kostant_project_linear_and_idempotent(family, rng):
    x = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
    y = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
    px, py = al.kostant_project(x), al.kostant_project(y)
    z = al.PointP.from_coords(family, 2.0 * x.coords - 3.0 * y.coords)
    assert np.allclose(al.kostant_project(z), 2.0 * px - 3.0 * py, atol=1e-12)
    assert np.allclose(al.kostant_project(al.embed_point(family, px)), px)


# ---------------------------------------------------------------------------
# weight values
# ---------------------------------------------------------------------------

def test_weight_values_b_type_half_sum():
    fam = al.so_mn(3, 2)
    assert np.allclose(al.fundamental_weight_values(fam, [2.0, 1.0]), [2.0, 1.5])


def test_weight_values_d_type_half_difference():
    fam = al.so_mn(2, 2)
    vals = al.fundamental_weight_values(fam, [3.0, -1.0])
    assert np.allclose(vals, [2.0, 1.0])


def test_weight_values_a_type_partial_sums():
    fam = al.sl_r(3)
    assert np.allclose(al.fundamental_weight_values(fam, [1.0, 0.0, -1.0]), [1.0, 1.0])


def test_weight_values_sl_h_doubled():
    fam = al.sl_h(2)
    assert np.allclose(al.fundamental_weight_values(fam, [1.0, -1.0]), [1.0, 2.0, 1.0])


def test_weight_values_chamber_validation():
    fam = al.so_mn(3, 2)
    with pytest.raises(ChamberError):
        al.fundamental_weight_values(fam, [1.0, 2.0])
    with pytest.raises(ChamberError):
        al.fundamental_weight_values(fam, [2.0, -1.0])
    with pytest.raises(ChamberError):
        al.fundamental_weight_values(al.sl_r(3), [1.0, 0.0, 0.0])


def test_normalize_to_chamber_matches_chamber_of_embed(family, rng):
    for _ in range(20):
        z = rng.normal(size=family.chamber_len)
        if family.weyl_type == "A":
            z -= z.mean()
        zn = al.normalize_to_chamber(family, z)
        cp = al.chamber(al.embed_point(family, z))
        assert np.allclose(zn, cp.a, atol=1e-9)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_point_json_round_trip(family, rng):
    x = al.PointP.from_coords(family, rng.normal(size=family.dim_p))
    data = al.point_to_json(x)
    x2 = al.point_from_json(data)
    assert x2.family == family
    assert np.allclose(x2.matrix, x.matrix, atol=1e-15)


def test_point_json_transposed_orientation():
    fam = al.so_mn(2, 3)
    B = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    x = al.point_from_block(fam, B)
    data = al.point_to_json(x)
    assert data["family"] == {"kind": "so_mn", "m": 2, "n": 3}
    assert np.allclose(data["point"]["B"], B)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=2, max_size=5))
def test_b_orbit_size_divides_group_order(values):
    fam = al.so_mn(len(values) + 1, len(values))
    a = al.normalize_to_chamber(fam, np.array(values, dtype=float))
    orb = al.weyl_orbit(al.ChamberPoint(fam, a))
    order = math.factorial(len(values)) * 2 ** len(values)
    assert order % len(orb) == 0
    for v in orb:
        assert np.array_equal(al.normalize_to_chamber(fam, v), a)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=-5, max_value=5, allow_nan=False), min_size=2,
                max_size=5))
def test_a_type_weights_scale_linearly(values):
    n = len(values) + 1
    fam = al.sl_r(n)
    v = np.array(values + [0.0])
    v = np.sort(v - v.mean())[::-1]
    w1 = al.fundamental_weight_values(fam, v)
    w2 = al.fundamental_weight_values(fam, 2.0 * v)
    assert np.allclose(w2, 2.0 * w1, atol=1e-9)
