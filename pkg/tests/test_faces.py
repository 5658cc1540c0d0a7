import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from polar_orbitopes import algebra as al
from polar_orbitopes import faces as fc
from polar_orbitopes import orbitope as ob
from polar_orbitopes.errors import NotAFace, SizeError, ZeroFunctional


def brute_force_faces(vertices):
    """Independent oracle: every face is a subset S admitting a functional
    that is constant on S and strictly smaller elsewhere (found by LP)."""
    verts = np.stack(vertices)
    n, d = verts.shape
    found = set()
    for r in range(1, n + 1):
        for S in itertools.combinations(range(n), r):
            S = set(S)
            rest = sorted(set(range(n)) - S)
            Slist = sorted(S)
            # variables: l (d), alpha; l.v = alpha on S, l.v <= alpha - 1 off S
            A_eq, b_eq, A_ub, b_ub = [], [], [], []
            for i in Slist:
                A_eq.append(np.concatenate([verts[i], [-1.0]]))
                b_eq.append(0.0)
            for i in rest:
                A_ub.append(np.concatenate([verts[i], [-1.0]]))
                b_ub.append(-1.0)
            res = linprog(
                np.zeros(d + 1),
                A_ub=np.array(A_ub) if A_ub else None,
                b_ub=np.array(b_ub) if b_ub else None,
                A_eq=np.array(A_eq), b_eq=np.array(b_eq),
                bounds=[(None, None)] * (d + 1), method="highs")
            if res.status == 0:
                found.add(tuple(Slist))
    found.add(())
    return found


def orbit_partition(face_sets, vertices, welts):
    lookup = {tuple(np.round(v, 9) + 0.0): i for i, v in enumerate(vertices)}
    maps = [{i: lookup[tuple(np.round(w.apply(v), 9) + 0.0)]
             for i, v in enumerate(vertices)} for w in welts]
    orbits = []
    seen = set()
    for fs in sorted(face_sets):
        if fs in seen:
            continue
        orbit = set()
        stack = [fs]
        while stack:
            cur = stack.pop()
            if cur in orbit:
                continue
            orbit.add(cur)
            for mp in maps:
                stack.append(tuple(sorted(mp[i] for i in cur)))
        seen |= orbit
        orbits.append(orbit)
    return orbits


# ---------------------------------------------------------------------------
# exposed faces
# ---------------------------------------------------------------------------

def test_exposed_face_b_type_edge():
    poly = ob.momentum_polytope(al.embed_point(al.so_mn(3, 2), [2.0, 1.0]))
    f = fc.exposed_face(poly, [1.0, 0.0])
    got = {tuple(poly.vertices[i]) for i in f.vertex_set}
    assert got == {(2.0, 1.0), (2.0, -1.0)}
    assert f.dim == 1
    assert abs(f.level - 2.0) < 1e-12


def test_exposed_face_generic_vertex(rng=np.random.default_rng(5)):
    poly = ob.momentum_polytope(al.embed_point(al.sl_r(3), [1.0, 0.0, -1.0]))
    for _ in range(10):
        l = rng.normal(size=3)
        l -= l.mean()
        if np.max(np.abs(l)) < 0.3:
            continue
        f = fc.exposed_face(poly, l)
        assert f.dim in (0, 1)   # generic directions give a vertex


def test_exposed_face_zero_functional():
    poly = ob.momentum_polytope(al.embed_point(al.so_mn(3, 2), [2.0, 1.0]))
    with pytest.raises(ZeroFunctional):
        fc.exposed_face(poly, [0.0, 0.0])


# ---------------------------------------------------------------------------
# face lattice enumeration against the LP oracle
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,anchor", [
    (al.sl_r(3), [1.0, 0.0, -1.0]),
    (al.so_mn(3, 2), [1.0, 1.0]),
    (al.so_mn(3, 2), [2.0, 1.0]),
    (al.so_mn(2, 2), [2.0, 1.0]),
    (al.sl_h(2), [1.0, -1.0]),
], ids=["hexagon", "b-square", "b-octagon", "d-parallelogram", "segment"])
def test_face_sets_match_lp_oracle(family, anchor):
    poly = ob.momentum_polytope(al.embed_point(family, anchor))
    lat = fc.face_lattice(poly)
    got = {f.vertex_set for f in lat.faces}
    want = brute_force_faces(poly.vertices)
    assert got == want


def test_hexagon_orbit_counts():
    poly = ob.momentum_polytope(al.embed_point(al.sl_r(3), [1.0, 0.0, -1.0]))
    summary = fc.face_orbit_summary(poly)
    assert summary["0"] == {"orbits": 1, "faces": 6}
    assert summary["1"] == {"orbits": 2, "faces": 6}
    assert summary["2"] == {"orbits": 1, "faces": 1}
    assert summary["-1"] == {"orbits": 1, "faces": 1}
    # independent orbit partition
    lat = fc.face_lattice(poly)
    orbits = orbit_partition({f.vertex_set for f in lat.faces if f.dim == 1},
                             poly.vertices, al.weyl_elements(al.sl_r(3)))
    assert sorted(len(o) for o in orbits) == [3, 3]


def test_b_square_orbit_counts():
    poly = ob.momentum_polytope(al.embed_point(al.so_mn(3, 2), [1.0, 1.0]))
    summary = fc.face_orbit_summary(poly)
    assert summary["0"] == {"orbits": 1, "faces": 4}
    assert summary["1"] == {"orbits": 1, "faces": 4}
    assert summary["2"] == {"orbits": 1, "faces": 1}


def test_d_parallelogram_orbit_counts():
    poly = ob.momentum_polytope(al.embed_point(al.so_mn(2, 2), [2.0, 1.0]))
    summary = fc.face_orbit_summary(poly)
    assert summary["0"] == {"orbits": 1, "faces": 4}
    assert summary["1"] == {"orbits": 2, "faces": 4}


def test_zero_anchor_single_face():
    poly = ob.momentum_polytope(al.PointP.from_coords(al.sl_r(3), np.zeros(5)))
    reps_ = fc.face_orbit_representatives(poly)
    assert len(reps_) == 1
    assert reps_[0].dim == 0


def test_representatives_are_exposed(family=al.so_mn(3, 2)):
    poly = ob.momentum_polytope(al.embed_point(family, [2.0, 1.0]))
    verts = np.stack(poly.vertices)
    for f in fc.face_orbit_representatives(poly):
        if f.dim < 0 or len(f.vertex_set) == len(poly.vertices):
            continue
        g = fc.exposed_face(poly, f.functional)
        assert g.vertex_set == f.vertex_set


def test_w_action_closure():
    poly = ob.momentum_polytope(al.embed_point(al.sl_r(4), [3.0, 1.0, -1.0, -3.0]))
    lat = fc.face_lattice(poly)
    sets = {f.vertex_set for f in lat.faces}
    for vmap in lat.vertex_maps:
        for f in lat.faces:
            img = tuple(sorted(vmap[i] for i in f.vertex_set))
            assert img in sets


def test_orbit_partition_covers_faces():
    poly = ob.momentum_polytope(al.embed_point(al.so_mn(2, 2), [2.0, 1.0]))
    lat = fc.face_lattice(poly)
    count = sum(len(members) for members in lat.orbits)
    assert count == len(lat.faces)


def test_face_rank_cap():
    with pytest.raises(SizeError):
        fc.face_lattice(ob.momentum_polytope(
            al.embed_point(al.sl_r(6), np.array([5., 3., 1., -1., -3., -5.]))))


# ---------------------------------------------------------------------------
# lifted faces
# ---------------------------------------------------------------------------

def test_lift_full_face_is_membership():
    fam = al.sl_r(3)
    x = al.embed_point(fam, [1.0, 0.0, -1.0])
    poly = ob.momentum_polytope(x)
    full = next(f for f in fc.face_lattice(poly).faces
                if len(f.vertex_set) == len(poly.vertices))
    lf = fc.lift_face(x, full)
    assert lf.is_full
    assert lf.contains(x)
    assert lf.contains(al.PointP.from_coords(fam, np.zeros(5)))
    assert not lf.contains(al.PointP.from_coords(fam, 1.01 * x.coords))


def test_lift_vertex_face(rng=np.random.default_rng(7)):
    import scipy.linalg

    fam = al.sl_r(3)
    x = al.embed_point(fam, [1.0, 0.0, -1.0])
    poly = ob.momentum_polytope(x)
    lat = fc.face_lattice(poly)
    anchor_idx = next(i for i, v in enumerate(poly.vertices)
                      if np.allclose(v, [1.0, 0.0, -1.0]))
    vert_face = next(f for f in lat.faces if f.vertex_set == (anchor_idx,))
    lf = fc.lift_face(x, vert_face)
    assert lf.contains(x)
    # sampled orbit points pass the lifted test only if they project into
    # the vertex; their functional value must match the projection value
    kb = al.basis_of_k(fam)
    for _ in range(40):
        u = sum(c * E for c, E in zip(rng.normal(size=len(kb)), kb))
        y = al.PointP.from_matrix(fam, scipy.linalg.expm(u) @ x.matrix
                                  @ scipy.linalg.expm(u).T, tol=1e-8)
        if lf.contains(y):
            assert np.allclose(al.kostant_project(y), [1.0, 0.0, -1.0], atol=1e-5)


def test_lift_edge_face_convexity():
    fam = al.so_mn(3, 2)
    x = al.embed_point(fam, [1.0, 1.0])
    poly = ob.momentum_polytope(x)
    lat = fc.face_lattice(poly)
    edge = next(f for f in lat.faces if f.dim == 1)
    lf = fc.lift_face(x, edge)
    v = [np.asarray(poly.vertices[i]) for i in edge.vertex_set]
    for t in (0.0, 0.25, 0.5, 1.0):
        pt = al.embed_point(fam, t * v[0] + (1 - t) * v[1])
        assert lf.contains(pt)
    interior = al.embed_point(fam, np.mean(np.stack(poly.vertices), axis=0))
    assert not lf.contains(interior)


def test_lift_rejects_non_face():
    fam = al.sl_r(3)
    x = al.embed_point(fam, [1.0, 0.0, -1.0])
    bogus = fc.Face(np.array([1.0, 0.0, -1.0]), 99.0, (0,), 0)
    with pytest.raises(NotAFace):
        fc.lift_face(x, bogus)
    bogus2 = fc.Face(np.zeros(3), 0.0, (0, 1), 1)
    with pytest.raises(NotAFace):
        fc.lift_face(x, bogus2)


# ---------------------------------------------------------------------------
# correspondence suite
# ---------------------------------------------------------------------------

def test_verify_correspondence_zero_trials():
    x = al.embed_point(al.sl_r(3), [1.0, 0.0, -1.0])
    rep = fc.verify_correspondence(x, trials=0, seed=0)
    for key in ("clause1", "clause3"):
        assert rep[key]["trials"] == 0
        assert rep[key]["failures"] == 0


@pytest.mark.parametrize("family,anchor", [
    (al.sl_r(3), [1.0, 0.0, -1.0]),
    (al.so_mn(2, 2), [2.0, 1.0]),
    (al.so_mn(3, 2), [2.0, 1.0]),
])
def test_verify_correspondence_clean(family, anchor):
    x = al.embed_point(family, anchor)
    rep = fc.verify_correspondence(x, trials=60, seed=11)
    assert rep["clause1"]["failures"] == 0
    assert rep["clause3"]["failures"] == 0
    assert rep["clause4"]["failures"] == 0
    assert rep["lemma"]["failures"] == 0
    assert rep["lemma"]["applicable"] > 0
