"""Membership oracle, spectrahedral pencils and momentum polytope.

A point y lies in the orbitope of x exactly when every restricted
fundamental weight evaluates no larger at the chamber coordinates of y
than at those of x.  The same test in matrix form: for every fundamental
representation, ``max_eig(rep, x) * I - rep(y)`` is positive semidefinite.
Both paths are implemented; :func:`member` can run them side by side and
raises if they ever disagree away from the boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import algebra as al
from . import reps
from .algebra import AlgebraFamily, ChamberPoint, PointP
from .errors import (
    ConsistencyError,
    FamilyMismatch,
    ShapeError,
)

MEMBER_TOL = 1e-9          # symmetric verdict tolerance on the weight margin
MATRIX_AGREE_TOL = 1e-7    # band in which analytic/matrix verdicts may differ

# Default for running the matrix path alongside the analytic one.  The test
# suite passes matrix_check=True explicitly; plain library calls stay on the
# fast analytic path and can opt in per call.
MATRIX_CHECK_DEFAULT = False


# ---------------------------------------------------------------------------
# Pencils
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinearPencil:
    """Affine Hermitian pencil  A(y) = constant * I - sum_k y_k coeffs[k].

    One pencil per fundamental representation; ``coeffs[k]`` is the
    representation matrix of the k-th canonical basis element, so feasibility
    of all pencils at the coordinates of y is the matrix membership test.
    """

    family: AlgebraFamily
    rep_tag: str
    dim: int
    constant: float
    coeffs: np.ndarray        # shape (dim_p, dim, dim), Hermitian slices

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        A = self.constant * np.eye(self.dim, dtype=complex)
        A -= np.tensordot(coords, self.coeffs, axes=1)
        return A

    def min_eigenvalue(self, coords: np.ndarray) -> float:
        A = self.evaluate(coords)
        A = (A + A.conj().T) / 2.0
        return float(np.linalg.eigvalsh(A).min())


@dataclass(frozen=True, eq=False)
class RealPencil:
    """Real symmetric twin of a Hermitian pencil, twice the size."""

    family: AlgebraFamily
    rep_tag: str
    dim: int
    constant_matrix: np.ndarray
    coeffs: np.ndarray

    def evaluate(self, coords: np.ndarray) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        return self.constant_matrix - np.tensordot(coords, self.coeffs, axes=1)


def realify_matrix(A: np.ndarray) -> np.ndarray:
    """[[Re A, Im A], [-Im A, Re A]]; doubles every eigenvalue's multiplicity."""
    A = np.asarray(A, dtype=complex)
    return np.block([[A.real, A.imag], [-A.imag, A.real]])


def realify(p: LinearPencil) -> RealPencil:
    const = realify_matrix(p.constant * np.eye(p.dim, dtype=complex))
    coeffs = np.stack([realify_matrix(c) for c in p.coeffs])
    return RealPencil(p.family, p.rep_tag, 2 * p.dim, const, coeffs)


@lru_cache(maxsize=None)
def _coefficient_stacks(family: AlgebraFamily) -> tuple[tuple[str, int, np.ndarray], ...]:
    """(tag, dim, stacked coefficient matrices) per fundamental rep."""
    basis = al.basis_of_p(family)
    out = []
    for rep in reps.fundamental_reps(family):
        stack = np.stack([rep.apply(E) for E in basis])
        stack.setflags(write=False)
        out.append((rep.tag, rep.dim, stack))
    return tuple(out)


def build_pencils(x: PointP) -> list[LinearPencil]:
    """One pencil per fundamental representation, with constant
    max_eig(rep, x) so that x sits on the boundary of its own constraint."""
    fam = x.family
    pencils = []
    for rep, (tag, dim, stack) in zip(reps.fundamental_reps(fam),
                                      _coefficient_stacks(fam)):
        c = reps.max_eigenvalue(rep, x)
        pencils.append(LinearPencil(fam, tag, dim, c, stack))
    return pencils


def _matrix_margins(x: PointP, y: PointP) -> dict[str, float]:
    """Per-representation slack max_eig(rep, x) - max_eig(rep, y)."""
    fam = x.family
    margins = {}
    for tag, dim, stack in _coefficient_stacks(fam):
        phix = np.tensordot(x.coords, stack, axes=1)
        phiy = np.tensordot(y.coords, stack, axes=1)
        mx = float(np.linalg.eigvalsh((phix + phix.conj().T) / 2.0).max())
        my = float(np.linalg.eigvalsh((phiy + phiy.conj().T) / 2.0).max())
        margins[tag] = mx - my
    return margins


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------

class MemberResult(NamedTuple):
    verdict: bool
    margin: float
    tight: str


def member(x: PointP, y: PointP, tol: float = MEMBER_TOL,
           matrix_check: bool | None = None) -> MemberResult:
    """Does y lie in the orbitope of x?

    The verdict comes from the analytic path (restricted fundamental weight
    slacks at the chamber coordinates); ``margin`` is the minimal slack and
    ``tight`` names the representation attaining it.  With ``matrix_check``
    the eigenvalue path runs as well and a verdict disagreement farther than
    ``MATRIX_AGREE_TOL`` from the boundary raises :class:`ConsistencyError`.
    """
    if x.family != y.family:
        raise FamilyMismatch(f"{x.family.label} vs {y.family.label}")
    fam = x.family
    wx = al.fundamental_weight_values(fam, al.chamber(x).a, tol=1e-6)
    wy = al.fundamental_weight_values(fam, al.chamber(y).a, tol=1e-6)
    slacks = wx - wy
    idx = int(np.argmin(slacks))
    margin = float(slacks[idx])
    verdict = margin >= -tol
    if matrix_check is None:
        matrix_check = MATRIX_CHECK_DEFAULT
    if matrix_check:
        mm = _matrix_margins(x, y)
        margin_m = min(mm.values())
        verdict_m = margin_m >= -tol
        if verdict != verdict_m and abs(margin) > MATRIX_AGREE_TOL \
                and abs(margin_m) > MATRIX_AGREE_TOL:
            raise ConsistencyError(
                f"analytic margin {margin:.3e} vs matrix margin {margin_m:.3e}")
    return MemberResult(verdict, margin, al.analytic_weight_tags(fam)[idx])


def schur_horn_member(X, Y, tol: float = MEMBER_TOL,
                      struct_tol: float = 1e-8) -> tuple[MemberResult, float]:
    """Membership for real symmetric matrices of arbitrary equal trace.

    Centers both matrices by trace/n * I, runs the traceless test and
    reports the translation.  Traces must agree to tolerance.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = X.shape[0]
    if X.shape != (n, n) or Y.shape != (n, n):
        raise ShapeError("square matrices of equal size required")
    tx, ty = np.trace(X) / n, np.trace(Y) / n
    scale = max(1.0, float(np.max(np.abs(X))))
    if abs(tx - ty) > struct_tol * scale:
        fam = al.sl_r(n)
        return MemberResult(False, -abs(tx - ty), "trace"), tx
    fam = al.sl_r(n)
    x0 = PointP.from_matrix(fam, X - tx * np.eye(n), tol=struct_tol)
    y0 = PointP.from_matrix(fam, Y - ty * np.eye(n), tol=struct_tol)
    return member(x0, y0, tol=tol), tx


# ---------------------------------------------------------------------------
# Momentum polytope
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MomentumPolytope:
    """Convex hull of the Weyl orbit of a chamber anchor."""

    anchor: ChamberPoint
    vertices: list[np.ndarray]
    cone_generators: list[np.ndarray]

    @property
    def family(self) -> AlgebraFamily:
        return self.anchor.family


def momentum_polytope(x) -> MomentumPolytope:
    """Momentum polytope of a point (or chamber point / chamber vector)."""
    if isinstance(x, PointP):
        anchor = al.chamber(x)
    elif isinstance(x, ChamberPoint):
        anchor = x
    else:
        raise ShapeError("momentum_polytope expects a PointP or ChamberPoint")
    anchor = ChamberPoint(anchor.family,
                          al.check_chamber(anchor.family, anchor.a),
                          anchor.witness)
    vertices = al.weyl_orbit(anchor)
    gens = al.simple_root_vectors(anchor.family)
    return MomentumPolytope(anchor, vertices, gens)


def momentum_member(poly: MomentumPolytope, z, tol: float = MEMBER_TOL) -> bool:
    """Is z in the momentum polytope?  Weyl-normalizes z and compares the
    restricted fundamental weights against the anchor."""
    fam = poly.family
    z = np.asarray(z, dtype=float)
    if z.shape != (fam.chamber_len,):
        raise ShapeError(f"expected length {fam.chamber_len}, got {z.shape}")
    scale = max(1.0, float(np.max(np.abs(poly.anchor.a))))
    if fam.weyl_type == "A" and abs(z.sum() - poly.anchor.a.sum()) > tol * scale * len(z):
        return False
    zhat = al.normalize_to_chamber(fam, z)
    wa = al.fundamental_weight_values(fam, poly.anchor.a, tol=1e-6)
    wz = al.fundamental_weight_values(fam, zhat, tol=1e-6)
    return bool(np.min(wa - wz) >= -tol * scale)


def restrict_to_a(x: PointP, z, tol: float = MEMBER_TOL) -> bool:
    """Membership of an abelian-subspace vector, checked along both routes.

    The orbitope test on the embedded point and the momentum polytope test
    must agree (the orbitope meets the abelian subspace exactly in the
    momentum polytope); a mismatch raises :class:`ConsistencyError`.
    """
    fam = x.family
    via_orbitope = member(x, al.embed_point(fam, z), tol=tol).verdict
    via_polytope = momentum_member(momentum_polytope(x), z, tol=tol)
    if via_orbitope != via_polytope:
        raise ConsistencyError(
            f"orbitope test {via_orbitope} != momentum test {via_polytope} "
            f"for z = {np.asarray(z).tolist()}")
    return via_orbitope


# ---------------------------------------------------------------------------
# SDPA sparse emission (realified pencils) and JSON emission
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".16e")


def write_sdpa(pencils: list[LinearPencil], path) -> None:
    """Write the realified pencil collection in SDPA sparse format.

    Feasibility form: variables are the canonical coordinates, the objective
    vector is zero, one block per fundamental representation.  With
    F(y) = sum_k y_k F_k - F_0, the emitted data has F_k = -realify(A_k) and
    F_0 = -realify(constant * I), so F(y) >= 0 iff all pencils accept y.
    Entries are 1-indexed, upper triangle only.
    """
    fam = pencils[0].family
    rps = [realify(p) for p in pencils]
    lines = []
    lines.append(f"* polar orbitope pencils for {fam.label}")
    lines.append(f"{fam.dim_p}")
    lines.append(f"{len(rps)}")
    lines.append(" ".join(str(rp.dim) for rp in rps))
    lines.append(" ".join(_fmt(0.0) for _ in range(fam.dim_p)))
    for blk, rp in enumerate(rps, start=1):
        C = rp.constant_matrix
        for i in range(rp.dim):
            for j in range(i, rp.dim):
                v = -C[i, j]
                if v != 0.0:
                    lines.append(f"0 {blk} {i + 1} {j + 1} {_fmt(v)}")
    for k in range(fam.dim_p):
        for blk, rp in enumerate(rps, start=1):
            Ak = rp.coeffs[k]
            for i in range(rp.dim):
                for j in range(i, rp.dim):
                    v = -Ak[i, j]
                    if v != 0.0:
                        lines.append(f"{k + 1} {blk} {i + 1} {j + 1} {_fmt(v)}")
    text = "\n".join(lines) + "\n"
    if hasattr(path, "write"):
        path.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def parse_sdpa(path) -> dict:
    """Parse an SDPA sparse file back into dense symmetric matrices.

    Returns ``{"mdim", "block_sizes", "objective", "matrices"}`` where
    ``matrices[k]`` is the list of per-block dense matrices of F_k
    (k = 0 .. mdim).
    """
    if hasattr(path, "read"):
        raw = path.read()
    else:
        with open(path) as fh:
            raw = fh.read()
    lines = [ln for ln in raw.splitlines()
             if ln.strip() and not ln.lstrip().startswith(("*", '"'))]
    mdim = int(lines[0])
    nblock = int(lines[1])
    sizes = [abs(int(v)) for v in lines[2].replace("{", " ").replace("}", " ")
             .replace(",", " ").split()]
    objective = [float(v) for v in lines[3].split()]
    mats = [[np.zeros((s, s)) for s in sizes] for _ in range(mdim + 1)]
    for ln in lines[4:]:
        k, blk, i, j, v = ln.split()
        k, blk, i, j, v = int(k), int(blk) - 1, int(i) - 1, int(j) - 1, float(v)
        mats[k][blk][i, j] = v
        mats[k][blk][j, i] = v
    return {"mdim": mdim, "block_sizes": sizes, "objective": objective,
            "matrices": mats}


def pencils_to_json(pencils: list[LinearPencil], anchor: PointP | None = None) -> dict:
    fam = pencils[0].family
    out = {
        "family": al.family_to_json(fam),
        "variables": fam.dim_p,
        "pencils": [
            {
                "rep": p.rep_tag,
                "dim": p.dim,
                "constant": float(p.constant),
                "coefficients": [
                    {"re": c.real.tolist(), "im": c.imag.tolist()}
                    for c in p.coeffs
                ],
            }
            for p in pencils
        ],
    }
    if anchor is not None:
        out["anchor"] = al.point_to_json(anchor)["point"]
    return out


def pencils_from_json(data: dict) -> list[LinearPencil]:
    fam = al.family_from_json(data["family"])
    out = []
    for p in data["pencils"]:
        coeffs = np.stack([
            np.asarray(c["re"], dtype=float) + 1j * np.asarray(c["im"], dtype=float)
            for c in p["coefficients"]
        ])
        out.append(LinearPencil(fam, p["rep"], int(p["dim"]),
                                float(p["constant"]), coeffs))
    return out


def dump_json(obj: dict) -> str:
    """Canonical JSON used everywhere a report must be reproducible."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
