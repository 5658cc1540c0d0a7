"""Faces of the momentum polytope, their Weyl orbits, and lifts.

The polytope arrives as a vertex list (a Weyl orbit), so enumeration is
vertex-based: facets come from the convex hull of the vertices projected
to their affine hull, and the full face lattice is the closure of the
facet vertex sets under intersection.  Orbits are computed by letting each
signed permutation act on vertex indices.  A face lifts to the orbitope as
"membership plus the supporting functional pinned at its level", the
functional being evaluated through the projection onto the abelian
subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import algebra as al
from . import harness as hz
from . import orbitope as ob
from .algebra import AlgebraFamily, PointP
from .errors import NotAFace, ShapeError, SizeError, ZeroFunctional

FACE_TOL = 1e-9
FACE_RANK_CAP = 4
FACE_VERTEX_CAP = 384

# trace-form pairing of embedded abelian vectors = TRACE_FACTOR * dot product
TRACE_FACTOR = {"sl_r": 1.0, "so_mn": 2.0, "sl_h": 2.0}


@dataclass(frozen=True, eq=False)
class Face:
    """Exposed face of a momentum polytope.

    ``functional . v == level`` on the face's vertices and is strictly
    smaller elsewhere; the full face carries the zero functional at level 0
    and the empty face the zero functional at level 1 (nothing attains it).
    """

    functional: np.ndarray
    level: float
    vertex_set: tuple[int, ...]
    dim: int


def _affine_dim(vertices: np.ndarray, idx, tol: float = FACE_TOL) -> int:
    idx = list(idx)
    if len(idx) == 0:
        return -1
    pts = vertices[idx]
    diffs = pts[1:] - pts[0]
    if diffs.size == 0:
        return 0
    s = np.linalg.svd(diffs, compute_uv=False)
    scale = max(1.0, float(s.max()) if s.size else 1.0)
    return int(np.sum(s > tol * scale * 100))


def exposed_face(poly: ob.MomentumPolytope, l, tol: float = FACE_TOL) -> Face:
    """Face of the polytope exposed by a nonzero linear functional."""
    l = np.asarray(l, dtype=float)
    fam = poly.family
    if l.shape != (fam.chamber_len,):
        raise ShapeError(f"functional must have length {fam.chamber_len}")
    if np.max(np.abs(l)) == 0.0:
        raise ZeroFunctional("cannot expose a face with the zero functional")
    verts = np.stack(poly.vertices)
    vals = verts @ l
    alpha = float(vals.max())
    scale = max(1.0, float(np.max(np.abs(vals))))
    idx = tuple(int(i) for i in np.nonzero(vals >= alpha - tol * scale)[0])
    return Face(l.copy(), alpha, idx, _affine_dim(verts, idx))


# ---------------------------------------------------------------------------
# Full face lattice and Weyl orbits
# ---------------------------------------------------------------------------

def _facet_incidences(verts: np.ndarray) -> list[tuple[np.ndarray, frozenset[int]]]:
    """(outward normal in ambient coordinates, vertex index set) per facet."""
    from scipy.spatial import ConvexHull

    nv, L = verts.shape
    center = verts.mean(axis=0)
    diffs = verts - center
    U, s, Vt = np.linalg.svd(diffs, full_matrices=False)
    scale = max(1.0, float(s.max()) if s.size else 1.0)
    rank = int(np.sum(s > 1e-9 * scale))
    basis = Vt[:rank]
    proj = diffs @ basis.T

    if rank == 0:
        return []
    if rank == 1:
        t = proj[:, 0]
        out = []
        for sign in (1.0, -1.0):
            alpha = float((sign * t).max())
            idx = frozenset(int(i) for i in np.nonzero(sign * t >= alpha - 1e-9 * scale)[0])
            out.append((sign * basis[0], idx))
        return out

    hull = ConvexHull(proj)
    seen = {}
    for eq in hull.equations:
        key = tuple(np.round(eq, 7))
        if key not in seen:
            seen[key] = eq
    out = []
    used = set()
    for eq in seen.values():
        normal, offset = eq[:-1], eq[-1]
        vals = proj @ normal + offset
        idx = frozenset(int(i) for i in np.nonzero(np.abs(vals) <= 1e-8 * scale)[0])
        if idx and idx not in used:
            used.add(idx)
            out.append((normal @ basis, idx))
    return out


def _meet_closure(all_idx: frozenset[int],
                  facets: list[frozenset[int]]) -> set[frozenset[int]]:
    faces = {all_idx}
    queue = [all_idx]
    while queue:
        f = queue.pop()
        for g in facets:
            h = f & g
            if h != f and h not in faces:
                faces.add(h)
                queue.append(h)
    return faces


@dataclass(frozen=True, eq=False)
class FaceLattice:
    """All faces of a momentum polytope plus their Weyl-orbit partition."""

    poly: ob.MomentumPolytope
    faces: list[Face]                     # sorted by (dim, vertex indices)
    orbit_of: dict[tuple[int, ...], int]  # vertex_set -> orbit id
    orbits: list[list[int]]               # orbit id -> face indices
    vertex_maps: list[dict[int, int]]     # one index map per Weyl element


def _vertex_key(v: np.ndarray) -> tuple:
    return tuple(np.round(v, 9) + 0.0)


def face_lattice(poly: ob.MomentumPolytope) -> FaceLattice:
    """Enumerate every face and group them under the Weyl action."""
    fam = poly.family
    if fam.restricted_rank > FACE_RANK_CAP:
        raise SizeError(f"face enumeration capped at restricted rank {FACE_RANK_CAP}")
    if len(poly.vertices) > FACE_VERTEX_CAP:
        raise SizeError(f"face enumeration capped at {FACE_VERTEX_CAP} vertices")
    verts = np.stack(poly.vertices)
    nv = len(poly.vertices)
    all_idx = frozenset(range(nv))

    facet_data = _facet_incidences(verts)
    facet_sets = [f for _, f in facet_data]
    face_sets = _meet_closure(all_idx, facet_sets) if facet_sets else {all_idx}
    if facet_sets:
        face_sets.add(frozenset())

    # supporting functional per face: mean of the containing facet normals
    faces = []
    for fs in face_sets:
        idx = tuple(sorted(fs))
        if fs == all_idx:
            faces.append(Face(np.zeros(fam.chamber_len), 0.0, idx,
                              _affine_dim(verts, idx)))
            continue
        if not fs:
            faces.append(Face(np.zeros(fam.chamber_len), 1.0, (), -1))
            continue
        normals = [n for n, g in facet_data if fs <= g]
        l = np.mean(normals, axis=0)
        vals = verts @ l
        alpha = float(vals[idx[0]])
        faces.append(Face(l, alpha, idx, _affine_dim(verts, idx)))
    faces.sort(key=lambda f: (f.dim, f.vertex_set))

    # Weyl action on vertex indices
    lookup = {_vertex_key(v): i for i, v in enumerate(poly.vertices)}
    vertex_maps = []
    for w in al.weyl_elements(fam):
        vertex_maps.append({i: lookup[_vertex_key(w.apply(v))]
                            for i, v in enumerate(poly.vertices)})

    index_of = {f.vertex_set: i for i, f in enumerate(faces)}
    orbit_of: dict[tuple[int, ...], int] = {}
    orbits: list[list[int]] = []
    for i, f in enumerate(faces):
        if f.vertex_set in orbit_of:
            continue
        oid = len(orbits)
        members = []
        stack = [f.vertex_set]
        orbit_of[f.vertex_set] = oid
        while stack:
            vs = stack.pop()
            members.append(index_of[vs])
            for vmap in vertex_maps:
                img = tuple(sorted(vmap[i] for i in vs))
                if img not in orbit_of:
                    orbit_of[img] = oid
                    stack.append(img)
        orbits.append(sorted(members))
    return FaceLattice(poly, faces, orbit_of, orbits, vertex_maps)


def face_orbit_representatives(poly: ob.MomentumPolytope) -> list[Face]:
    """One canonical face per Weyl orbit, sorted by (dim, vertex indices)."""
    lat = face_lattice(poly)
    reps = [lat.faces[members[0]] for members in lat.orbits]
    reps.sort(key=lambda f: (f.dim, f.vertex_set))
    return reps


def face_orbit_summary(poly: ob.MomentumPolytope) -> dict:
    """Orbit and face counts keyed by dimension."""
    lat = face_lattice(poly)
    out: dict[int, dict[str, int]] = {}
    for members in lat.orbits:
        d = lat.faces[members[0]].dim
        entry = out.setdefault(d, {"orbits": 0, "faces": 0})
        entry["orbits"] += 1
        entry["faces"] += len(members)
    return {str(d): out[d] for d in sorted(out)}


# ---------------------------------------------------------------------------
# Lifting faces to the orbitope
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LiftedFace:
    """Membership test for the orbitope face over a polytope face.

    A point belongs iff it belongs to the orbitope and the supporting
    functional, evaluated through the projection onto the abelian subspace,
    sits at the face's level.  The improper full face drops the functional
    condition; the empty face accepts nothing.
    """

    source: PointP
    functional: np.ndarray
    level: float
    is_full: bool
    is_empty: bool

    def functional_value(self, y: PointP) -> float:
        return float(self.functional @ al.kostant_project(y))

    def contains(self, y: PointP, tol: float = 1e-7,
                 member_tol: float = ob.MEMBER_TOL) -> bool:
        if self.is_empty:
            return False
        if not ob.member(self.source, y, tol=member_tol).verdict:
            return False
        if self.is_full:
            return True
        scale = max(1.0, abs(self.level))
        return abs(self.functional_value(y) - self.level) <= tol * scale


def lift_face(x: PointP, f: Face, tol: float = FACE_TOL) -> LiftedFace:
    """Lift a face of the momentum polytope of x to the orbitope."""
    poly = ob.momentum_polytope(x)
    verts = np.stack(poly.vertices)
    nv = len(poly.vertices)
    if any(i < 0 or i >= nv for i in f.vertex_set):
        raise NotAFace("vertex indices outside the polytope's vertex list")
    if len(f.vertex_set) == 0:
        return LiftedFace(x, f.functional.copy(), f.level, False, True)
    if np.max(np.abs(f.functional)) == 0.0:
        if set(f.vertex_set) != set(range(nv)):
            raise NotAFace("zero functional only describes the improper face")
        return LiftedFace(x, f.functional.copy(), 0.0, True, False)
    vals = verts @ f.functional
    scale = max(1.0, float(np.max(np.abs(vals))))
    alpha = float(vals.max())
    if abs(alpha - f.level) > 1e-7 * scale:
        raise NotAFace(f"level {f.level} does not support the polytope (max {alpha})")
    achieved = set(int(i) for i in np.nonzero(vals >= alpha - tol * scale * 10)[0])
    if achieved != set(f.vertex_set):
        raise NotAFace("functional does not expose the claimed vertex set")
    return LiftedFace(x, f.functional.copy(), alpha, False, False)


# ---------------------------------------------------------------------------
# Randomized verification of the face correspondence
# ---------------------------------------------------------------------------

def _find_weyl_to_vertex(fam: AlgebraFamily, anchor: np.ndarray,
                         target: np.ndarray) -> al.WeylElement:
    for w in al.weyl_elements(fam):
        if np.array_equal(w.apply(anchor), target):
            return w
    raise NotAFace("vertex is not a Weyl image of the anchor")  # pragma: no cover


def verify_correspondence(x: PointP, trials: int, seed: int = 0) -> dict:
    """Randomized suite for the face-orbit correspondence.

    clause1: projections of exposed orbitope faces are faces of the polytope
    (boundedness of the conjugated functional over sampled orbit points, its
    factorization through the projection, and exact attainment at a Weyl
    vertex witness).
    clause3: transporting a lifted face by the compact witness of a Weyl
    element matches the lift of the transported polytope face, on both
    accepting and rejecting test points.
    clause4: distinct face orbits are never identified by any Weyl element,
    and same-orbit faces always are.
    lemma: whenever a face of the anchor polytope meets the polytope of a
    member point z, some Weyl image of z lands on that face.
    """
    fam = x.family
    rng = np.random.default_rng(seed)
    anchor_cp = al.chamber(x)
    anchor = anchor_cp.a
    poly = ob.momentum_polytope(x)
    verts = np.stack(poly.vertices)
    lat = face_lattice(poly)
    welts = al.weyl_elements(fam)
    cfam = TRACE_FACTOR[fam.kind]

    # a pool of orbit samples shared by the clauses
    cfg = hz.SampleConfig(seed=seed, count=min(40, max(8, trials // 4)))
    ks = hz.sample_K(fam, cfg)
    orbit_pts = [hz.adjoint_orbit_point(x, k) for k in ks]

    proper = [f for f in lat.faces if 0 <= f.dim and len(f.vertex_set) < len(verts)]

    def trace_pair(a_vec: np.ndarray, y: PointP) -> float:
        A = al.embed_point(fam, a_vec).matrix
        return float(np.real(np.trace(A @ y.matrix.conj().T)))

    c1_fail = 0
    n1 = trials
    for _ in range(n1):
        A = hz.random_point(fam, rng)
        la = al.chamber(A).a
        vals = verts @ la
        alpha = float(vals.max())
        ok = True
        for y in orbit_pts[:10]:
            fv = float(la @ al.kostant_project(y))
            if fv > alpha + 1e-7:
                ok = False
            if abs(trace_pair(la, y) - cfam * fv) > 1e-7 * max(1.0, abs(fv)):
                ok = False
        vstar = verts[int(np.argmax(vals))]
        w = _find_weyl_to_vertex(fam, anchor, vstar)
        kw = al.weyl_witness(fam, w)
        ystar = hz.adjoint_orbit_point(al.embed_point(fam, anchor), kw)
        if abs(float(la @ al.kostant_project(ystar)) - alpha) > 1e-9 * max(1.0, abs(alpha)):
            ok = False
        if not ok:
            c1_fail += 1

    c3_fail = 0
    n3 = trials if proper else 0
    for _ in range(n3):
        f = proper[int(rng.integers(len(proper)))]
        lf = lift_face(x, f)
        w = welts[int(rng.integers(len(welts)))]
        kw = al.weyl_witness(fam, w)
        img = tuple(sorted(lat.vertex_maps[welts.index(w)][i] for i in f.vertex_set))
        f_img = next(g for g in lat.faces if g.vertex_set == img)
        lf_img = lift_face(x, f_img)
        # accepting points: convex combinations of the face's vertices
        tests = []
        for _ in range(3):
            t = rng.dirichlet(np.ones(len(f.vertex_set)))
            tests.append(al.embed_point(fam, t @ verts[list(f.vertex_set)]))
        # rejecting points: orbit samples and interior combinations
        tests.extend(orbit_pts[:3])
        t = rng.dirichlet(np.ones(len(verts)))
        tests.append(al.embed_point(fam, t @ verts))
        for y in tests:
            y_img = hz.adjoint_orbit_point(y, kw)
            if lf.contains(y) != lf_img.contains(y_img):
                c3_fail += 1
                break

    c4_fail = 0
    n4 = 0
    reps = [members[0] for members in lat.orbits]
    for i in range(len(reps)):
        for j in range(len(reps)):
            if i == j:
                continue
            n4 += 1
            fi, fj = lat.faces[reps[i]], lat.faces[reps[j]]
            for vmap in lat.vertex_maps:
                img = tuple(sorted(vmap[v] for v in fi.vertex_set))
                if img == fj.vertex_set:
                    c4_fail += 1
                    break
    for members in lat.orbits:
        for other in members[1:]:
            n4 += 1
            fi, fj = lat.faces[members[0]], lat.faces[other]
            if not any(tuple(sorted(vmap[v] for v in fi.vertex_set)) == fj.vertex_set
                       for vmap in lat.vertex_maps):
                c4_fail += 1

    lemma_fail, lemma_applicable = 0, 0
    nl = trials if proper else 0
    for trial in range(nl):
        f = proper[int(rng.integers(len(proper)))]
        if trial % 2 == 0:
            # z on the face itself: the hypothesis holds with y = z
            t = rng.dirichlet(np.ones(len(f.vertex_set)))
            z = t @ verts[list(f.vertex_set)]
        else:
            t = rng.dirichlet(np.ones(len(verts)))
            z = t @ verts
        zhat = al.normalize_to_chamber(fam, z)
        z_orbit = al.weyl_orbit(al.ChamberPoint(fam, zhat))
        beta = max(float(f.functional @ v) for v in z_orbit)
        scale = max(1.0, abs(f.level))
        if beta < f.level - 1e-9 * scale:
            continue
        lemma_applicable += 1
        found = False
        for v in z_orbit:
            if float(f.functional @ v) >= f.level - 1e-7 * scale \
                    and ob.momentum_member(poly, v, tol=1e-7):
                found = True
                break
        if not found:
            lemma_fail += 1

    return {
        "suite": "faces",
        "family": fam.label,
        "anchor": [float(v) for v in anchor],
        "seed": seed,
        "trials": trials,
        "clause1": {"trials": n1, "failures": c1_fail},
        "clause3": {"trials": n3, "failures": c3_fail},
        "clause4": {"pairs": n4, "failures": c4_fail},
        "lemma": {"trials": nl, "applicable": lemma_applicable,
                  "failures": lemma_fail},
        "orbit_counts": face_orbit_summary(poly),
    }
