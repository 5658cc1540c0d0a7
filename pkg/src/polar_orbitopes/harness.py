"""Independent oracles and samplers used by the verification suites.

Everything here deliberately avoids the analytic machinery it is checking:
compact-group elements come from matrix exponentials of random compact-
subalgebra elements, and convex-hull membership is decided by a bundled
phase-1 simplex (dense tableau, Dantzig pricing with a Bland fallback)
rather than by weight inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import algebra as al
from . import orbitope as ob
from .algebra import AlgebraFamily, PointP
from .errors import NumericalError, ShapeError

LP_TOL = 1e-7


@dataclass(frozen=True)
class SampleConfig:
    """Sampling parameters; identical configs give bit-identical reports."""

    seed: int = 0
    count: int = 100
    exp_scale: float = 1.0
    member_tol: float = 1e-7
    lp_tol: float = LP_TOL
    reject_scale: float = 1e-3   # relative blow-up used for rejection probes

    def __post_init__(self):
        if self.count < 1:
            raise ShapeError("count must be >= 1")
        if self.exp_scale <= 0:
            raise ShapeError("exp_scale must be positive")


# ---------------------------------------------------------------------------
# Random sampling
# ---------------------------------------------------------------------------

def random_point(family: AlgebraFamily, rng: np.random.Generator,
                 scale: float = 1.0) -> PointP:
    """Gaussian point in the canonical coordinates."""
    return PointP.from_coords(family, scale * rng.normal(size=family.dim_p))


def _random_k_element(family: AlgebraFamily, rng: np.random.Generator,
                      scale: float) -> np.ndarray:
    basis = al.basis_of_k(family)
    c = scale * rng.normal(size=len(basis))
    u = sum(ci * E for ci, E in zip(c, basis))
    return u


def _check_group_element(family: AlgebraFamily, k: np.ndarray, tol: float = 1e-9):
    N = family.ambient_size
    err = np.max(np.abs(k.conj().T @ k - np.eye(N)))
    if err > tol:
        raise NumericalError(f"sampled element not unitary: {err:.2e}")
    if family.kind == "so_mn":
        m = family.m
        if np.max(np.abs(k[:m, m:])) > tol or np.max(np.abs(k[m:, :m])) > tol:
            raise NumericalError("sampled element lost its block structure")
    elif family.kind == "sl_h":
        m = family.m
        J = np.zeros((2 * m, 2 * m))
        J[:m, m:] = np.eye(m)
        J[m:, :m] = -np.eye(m)
        if np.max(np.abs(J @ k.conj() - k @ J)) > tol:
            raise NumericalError("sampled element lost the quaternionic structure")


def sample_K(family: AlgebraFamily, cfg: SampleConfig) -> list[np.ndarray]:
    """Compact-group elements exp(u) for Gaussian compact-subalgebra u."""
    rng = np.random.default_rng(cfg.seed)
    out = []
    for _ in range(cfg.count):
        k = scipy.linalg.expm(_random_k_element(family, rng, cfg.exp_scale))
        if not family.is_complex:
            k = k.real
        _check_group_element(family, k)
        out.append(k)
    return out


def adjoint_orbit_point(x: PointP, k: np.ndarray) -> PointP:
    """Ad_k applied to a point (conjugation in the ambient realization)."""
    return PointP.from_matrix(x.family, k @ x.matrix @ k.conj().T, tol=1e-8)


# ---------------------------------------------------------------------------
# Bundled phase-1 simplex
# ---------------------------------------------------------------------------

def _phase1_simplex(A: np.ndarray, b: np.ndarray, tol: float,
                    max_iter: int | None = None) -> float:
    """Minimal total artificial-variable value for A t = b, t >= 0.

    Dense tableau simplex with Dantzig pricing; after 10 * max_iter / 2
    degenerate-looking iterations it restarts pricing under Bland's rule,
    which cannot cycle.  Returns the optimum (0 within tol iff feasible).
    """
    m, n = A.shape
    A = A.copy()
    b = b.copy()
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0
    # tableau: columns = structural | artificial | rhs
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    # objective row: minimize sum of artificials => price out the basis
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))
    if max_iter is None:
        max_iter = 200 * (m + n)
    bland_after = max_iter // 2
    for it in range(max_iter):
        costs = T[m, :n + m]
        if it < bland_after:
            j = int(np.argmin(costs))
            if costs[j] >= -tol:
                break
        else:
            neg_js = np.nonzero(costs < -tol)[0]
            if neg_js.size == 0:
                break
            j = int(neg_js[0])
        col = T[:m, j]
        pos = col > tol
        if not np.any(pos):
            # unbounded phase-1 cannot happen with artificials; bail out
            raise NumericalError("phase-1 simplex lost boundedness")
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        i = int(np.argmin(ratios))
        piv = T[i, j]
        T[i] /= piv
        for r in range(m + 1):
            if r != i and T[r, j] != 0.0:
                T[r] -= T[r, j] * T[i]
        basis[i] = j
    else:
        raise NumericalError("phase-1 simplex iteration cap exceeded")
    return float(-T[m, -1])


def lp_equality_feasible(A, b, tol: float = LP_TOL) -> bool:
    """Is there t >= 0 with A t = b ?"""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    return _phase1_simplex(A, b, tol) <= tol * scale


def hull_member_lp(points, y, tol: float = LP_TOL) -> bool:
    """Convex-hull membership via the bundled simplex.

    Feasibility of sum t_i p_i = y, sum t_i = 1, t >= 0.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ShapeError("points must be a nonempty 2-d array")
    y = np.asarray(y, dtype=float)
    A = np.vstack([pts.T, np.ones(pts.shape[0])])
    b = np.concatenate([y, [1.0]])
    return lp_equality_feasible(A, b, tol=tol)


def cone_member_lp(generators, w, tol: float = LP_TOL) -> bool:
    """Membership of w in the cone spanned by the generators."""
    G = np.asarray(generators, dtype=float)
    w = np.asarray(w, dtype=float)
    return lp_equality_feasible(G.T, w, tol=tol)


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------

def _fmt_csv(v: float) -> str:
    return format(v, ".16e")


def _margin_stats(margins: list[float]) -> dict:
    a = np.asarray(margins, dtype=float)
    if a.size == 0:
        return {"count": 0}
    return {"count": int(a.size), "min": float(a.min()),
            "max": float(a.max()), "mean": float(a.mean())}


def verify_theorem1(x: PointP, cfg: SampleConfig,
                    margins_csv=None) -> dict:
    """Randomized check that orbit points and their convex combinations pass
    the membership oracle, that accepted points agree with hull membership
    over the sampled orbit, and that clearly rejected points fail both.

    ``margins_csv`` optionally names a file (or file object) that receives
    the raw per-sample margins as ``clause,index,margin`` rows.
    """
    fam = x.family
    rng = np.random.default_rng(cfg.seed)
    ks = sample_K(fam, cfg)
    orbit_pts = [adjoint_orbit_point(x, k) for k in ks]
    coords = np.stack([p.coords for p in orbit_pts])

    orbit_margins, orbit_fail = [], 0
    for p in orbit_pts:
        res = ob.member(x, p)
        orbit_margins.append(res.margin)
        if res.margin < -cfg.member_tol:
            orbit_fail += 1

    combo_fail, combos, combo_margins = 0, [], []
    n_combo = cfg.count
    for _ in range(n_combo):
        size = int(rng.integers(2, min(9, len(orbit_pts) + 1)))
        idx = rng.choice(len(orbit_pts), size=size, replace=False)
        t = rng.dirichlet(np.ones(size))
        c = t @ coords[idx]
        combos.append(c)
        res = ob.member(x, PointP.from_coords(fam, c))
        combo_margins.append(res.margin)
        if res.margin < -cfg.member_tol:
            combo_fail += 1

    # accepted points must be inside the sampled hull (they are combinations
    # of sample points; for general interior points this check is only
    # one-sided and depends on sample density)
    hull_fail = 0
    n_hull = min(len(combos), 50)
    for c in combos[:n_hull]:
        if not hull_member_lp(coords, c, tol=cfg.lp_tol):
            hull_fail += 1

    reject_fail = 0
    n_reject = min(cfg.count, 50)
    nonzero = float(np.max(np.abs(x.coords))) > 0
    for i in range(n_reject):
        if not nonzero:
            break
        blow = 1.0 + cfg.reject_scale * (1.0 + float(rng.random()))
        c = blow * coords[i % len(orbit_pts)]
        res = ob.member(x, PointP.from_coords(fam, c))
        if res.margin >= -10 * cfg.member_tol or hull_member_lp(coords, c, tol=cfg.lp_tol):
            reject_fail += 1

    if margins_csv is not None:
        rows = ["clause,index,margin"]
        rows += [f"orbit,{i},{_fmt_csv(m)}" for i, m in enumerate(orbit_margins)]
        rows += [f"combination,{i},{_fmt_csv(m)}" for i, m in enumerate(combo_margins)]
        text = "\n".join(rows) + "\n"
        if hasattr(margins_csv, "write"):
            margins_csv.write(text)
        else:
            with open(margins_csv, "w") as fh:
                fh.write(text)

    return {
        "suite": "theorem1",
        "family": fam.label,
        "anchor": [float(v) for v in al.chamber(x).a],
        "seed": cfg.seed,
        "count": cfg.count,
        "orbit_membership": {"checked": len(orbit_pts), "failures": orbit_fail,
                             "margins": _margin_stats(orbit_margins)},
        "convex_combinations": {"checked": n_combo, "failures": combo_fail,
                                "margins": _margin_stats(combo_margins)},
        "hull_agreement": {
            "checked": n_hull, "failures": hull_fail,
            "caveat": "one-sided: hull of the sampled orbit only; density-dependent",
        },
        "rejection": {"checked": n_reject if nonzero else 0,
                      "failures": reject_fail},
    }


def verify_kostant(x: PointP, cfg: SampleConfig) -> dict:
    """Sampled check of the convexity theorem: orbit projections must pass
    the weight test, the literal cone test and hull membership over the
    Weyl-orbit vertices; the surjectivity direction is reported as best-
    distance statistics from a gradient-free search.
    """
    fam = x.family
    rng = np.random.default_rng(cfg.seed)
    poly = ob.momentum_polytope(x)
    verts = np.stack(poly.vertices)
    gens = np.stack(poly.cone_generators)
    anchor = poly.anchor.a

    inclusion_fail = 0
    worst_slack = np.inf
    ks = sample_K(fam, cfg)
    for k in ks:
        proj = al.kostant_project(adjoint_orbit_point(x, k))
        ok_weights = ob.momentum_member(poly, proj, tol=cfg.member_tol)
        zhat = al.normalize_to_chamber(fam, proj)
        ok_cone = cone_member_lp(gens, anchor - zhat, tol=cfg.lp_tol)
        ok_hull = hull_member_lp(verts, proj, tol=cfg.lp_tol)
        wa = al.fundamental_weight_values(fam, anchor, tol=1e-6)
        wz = al.fundamental_weight_values(fam, zhat, tol=1e-6)
        worst_slack = min(worst_slack, float(np.min(wa - wz)))
        if not (ok_weights and ok_cone and ok_hull):
            inclusion_fail += 1

    # surjectivity: chase random polytope targets with a crude local search
    n_targets = max(1, cfg.count // 100)
    best_distances = []
    for _ in range(n_targets):
        t = rng.dirichlet(np.ones(len(poly.vertices)))
        target = t @ verts
        best_k, best_d = None, np.inf
        for k in ks[: min(len(ks), 60)]:
            d = float(np.linalg.norm(
                al.kostant_project(adjoint_orbit_point(x, k)) - target))
            if d < best_d:
                best_k, best_d = k, d
        scale = cfg.exp_scale
        for _ in range(40):
            u = _random_k_element(fam, rng, scale)
            k2 = best_k @ scipy.linalg.expm(u)
            if not fam.is_complex:
                k2 = k2.real
            d = float(np.linalg.norm(
                al.kostant_project(adjoint_orbit_point(x, k2)) - target))
            if d < best_d:
                best_k, best_d = k2, d
            else:
                scale *= 0.85
        best_distances.append(best_d)

    # exact vertex witness through the Weyl realization
    widx = int(rng.integers(len(al.weyl_elements(fam))))
    w = al.weyl_elements(fam)[widx]
    kw = al.weyl_witness(fam, w)
    anchor_pt = al.embed_point(fam, anchor)
    vertex_err = float(np.linalg.norm(
        al.kostant_project(adjoint_orbit_point(anchor_pt, kw)) - w.apply(anchor)))

    return {
        "suite": "kostant",
        "family": fam.label,
        "anchor": [float(v) for v in anchor],
        "seed": cfg.seed,
        "count": cfg.count,
        "inclusion": {"checked": len(ks), "failures": inclusion_fail,
                      "worst_slack": float(worst_slack)},
        "surjectivity_search": {
            "targets": n_targets,
            "best_distances": [float(d) for d in best_distances],
            "max_distance": float(max(best_distances)),
        },
        "vertex_witness_error": vertex_err,
    }
