"""Classical matrix families with Cartan decomposition, chambers and Weyl orbits.

Three families are supported, each given by explicit matrices:

* ``sl_r(n)``  -- traceless real n x n matrices; the -1 eigenspace of the
  Cartan involution X -> -X^T is the symmetric traceless part.
* ``so_mn(m, n)`` -- real matrices with X^T I_{m,n} + I_{m,n} X = 0; the
  -1 eigenspace consists of the off-diagonal blocks [[0, B], [B^T, 0]].
* ``sl_h(m)`` -- quaternionic traceless matrices realized as 2m x 2m complex
  matrices [[A, B], [-conj(B), conj(A)]]; the -1 eigenspace of
  X -> -conj(X)^T has A Hermitian traceless and B antisymmetric.

Every element of the -1 eigenspace is conjugate under the maximal compact
group to an element of the fixed maximal abelian subspace (diagonal
matrices / rectangular-diagonal blocks), which is what :func:`chamber`
computes, together with an explicit conjugating witness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    ChamberError,
    ComputationError,
    ShapeError,
    SizeError,
)

# Default tolerances (all overridable per call).
STRUCT_TOL = 1e-10   # membership in the defining linear constraints
CHAMBER_TOL = 1e-9   # chamber inequality slack
WITNESS_TOL = 1e-9   # accuracy of the conjugating witness
ORBIT_CAP = 10**6    # maximal Weyl-orbit enumeration size


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraFamily:
    """Descriptor of one classical family.

    ``kind`` is one of ``"sl_r"``, ``"so_mn"``, ``"sl_h"``.  For ``so_mn``
    the blocks are stored with ``m >= n``; inputs given the other way round
    are transposed at construction and ``user_transposed`` records that, so
    that coordinate enumeration follows the caller's original orientation.
    """

    kind: str
    n: int = 0                  # sl_r: matrix size; so_mn: smaller block
    m: int = 0                  # so_mn: larger block; sl_h: quaternionic size
    user_transposed: bool = False

    # -- derived quantities -------------------------------------------------

    @property
    def ambient_size(self) -> int:
        if self.kind == "sl_r":
            return self.n
        if self.kind == "so_mn":
            return self.m + self.n
        return 2 * self.m

    @property
    def restricted_rank(self) -> int:
        if self.kind == "sl_r":
            return self.n - 1
        if self.kind == "so_mn":
            return self.n
        return self.m - 1

    @property
    def weyl_type(self) -> str:
        if self.kind == "so_mn":
            return "B" if self.m > self.n else "D"
        return "A"

    @property
    def chamber_len(self) -> int:
        """Length of the stored chamber coordinate vector."""
        if self.kind == "sl_r":
            return self.n
        if self.kind == "so_mn":
            return self.n
        return self.m

    @property
    def dim_p(self) -> int:
        if self.kind == "sl_r":
            return self.n * (self.n + 1) // 2 - 1
        if self.kind == "so_mn":
            return self.m * self.n
        return self.m * (2 * self.m - 1) - 1

    @property
    def is_complex(self) -> bool:
        return self.kind == "sl_h"

    @property
    def label(self) -> str:
        if self.kind == "sl_r":
            return f"sl_r:{self.n}"
        if self.kind == "so_mn":
            if self.user_transposed:
                return f"so_mn:{self.n},{self.m}"
            return f"so_mn:{self.m},{self.n}"
        return f"sl_h:{self.m}"


def sl_r(n: int) -> AlgebraFamily:
    """Traceless real n x n matrices, n >= 2."""
    if n < 2:
        raise ShapeError(f"sl_r needs n >= 2, got {n}")
    return AlgebraFamily(kind="sl_r", n=n)


def so_mn(m: int, n: int) -> AlgebraFamily:
    """Indefinite-orthogonal family; blocks reordered so that m >= n."""
    if m < 1 or n < 1 or m + n < 3:
        raise ShapeError(f"so_mn needs m, n >= 1 and m + n >= 3, got ({m}, {n})")
    if m < n:
        return AlgebraFamily(kind="so_mn", m=n, n=m, user_transposed=True)
    return AlgebraFamily(kind="so_mn", m=m, n=n)


def sl_h(m: int) -> AlgebraFamily:
    """Quaternionic family on 2m x 2m complex matrices, 2m >= 4."""
    if m < 2:
        raise ShapeError(f"sl_h needs m >= 2, got {m}")
    return AlgebraFamily(kind="sl_h", m=m)


def family_from_label(label: str) -> AlgebraFamily:
    """Parse labels like ``sl_r:3``, ``so_mn:3,2``, ``sl_h:2``."""
    kind, _, params = label.partition(":")
    try:
        values = [int(v) for v in params.split(",")] if params else []
        if kind == "sl_r" and len(values) == 1:
            return sl_r(values[0])
        if kind == "so_mn" and len(values) == 2:
            return so_mn(values[0], values[1])
        if kind == "sl_h" and len(values) == 1:
            return sl_h(values[0])
    except ValueError:
        pass
    raise ShapeError(f"unrecognized family label {label!r}")


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# The fixed basis of the -1 eigenspace and coordinate maps
# ---------------------------------------------------------------------------
#
# Canonical coordinate order (stable across releases; pencil variables and
# golden files depend on it):
#   sl_r : diagonal entries X_11..X_{n-1,n-1}, then upper triangle row-major.
#   so_mn: B entries row-major in the caller's original orientation.
#   sl_h : real diagonal A_11..A_{m-1,m-1}; then Re/Im of the upper triangle
#          of A row-major; then Re/Im of the upper triangle of B row-major.

def _so_mn_entry_order(family: AlgebraFamily) -> list[tuple[int, int]]:
    """Canonical (row, col) pairs into the stored m x n block."""
    if family.user_transposed:
        # caller supplied an n x m block; its row-major order visits (j, i)
        return [(j, i) for i in range(family.n) for j in range(family.m)]
    return [(i, j) for i in range(family.m) for j in range(family.n)]


def _slh_ambient(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.block([[A, B], [-np.conj(B), np.conj(A)]])


def coords_from_matrix(family: AlgebraFamily, X: np.ndarray) -> np.ndarray:
    """Read the canonical coordinates off a p-shaped matrix (no validation)."""
    if family.kind == "sl_r":
        n = family.n
        c = [X[q, q] for q in range(n - 1)]
        c += [X[p, q] for p in range(n) for q in range(p + 1, n)]
        return np.array(c, dtype=float)
    if family.kind == "so_mn":
        m = family.m
        B = X[:m, m:]
        return np.array([B[i, j].real for i, j in _so_mn_entry_order(family)])
    m = family.m
    A = X[:m, :m]
    B = X[:m, m:]
    c = [A[q, q].real for q in range(m - 1)]
    for p in range(m):
        for q in range(p + 1, m):
            c += [A[p, q].real, A[p, q].imag]
    for p in range(m):
        for q in range(p + 1, m):
            c += [B[p, q].real, B[p, q].imag]
    return np.array(c, dtype=float)


def matrix_from_coords(family: AlgebraFamily, coords: np.ndarray) -> np.ndarray:
    """Rebuild the p-shaped matrix from canonical coordinates."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape != (family.dim_p,):
        raise ShapeError(
            f"expected {family.dim_p} coordinates for {family.label}, "
            f"got shape {coords.shape}"
        )
    if family.kind == "sl_r":
        n = family.n
        X = np.zeros((n, n))
        for q in range(n - 1):
            X[q, q] = coords[q]
        X[n - 1, n - 1] = -coords[: n - 1].sum()
        k = n - 1
        for p in range(n):
            for q in range(p + 1, n):
                X[p, q] = X[q, p] = coords[k]
                k += 1
        return X
    if family.kind == "so_mn":
        m, n = family.m, family.n
        B = np.zeros((m, n))
        for k, (i, j) in enumerate(_so_mn_entry_order(family)):
            B[i, j] = coords[k]
        X = np.zeros((m + n, m + n))
        X[:m, m:] = B
        X[m:, :m] = B.T
        return X
    m = family.m
    A = np.zeros((m, m), dtype=complex)
    for q in range(m - 1):
        A[q, q] = coords[q]
    A[m - 1, m - 1] = -coords[: m - 1].sum()
    k = m - 1
    for p in range(m):
        for q in range(p + 1, m):
            A[p, q] = coords[k] + 1j * coords[k + 1]
            A[q, p] = coords[k] - 1j * coords[k + 1]
            k += 2
    B = np.zeros((m, m), dtype=complex)
    for p in range(m):
        for q in range(p + 1, m):
            B[p, q] = coords[k] + 1j * coords[k + 1]
            B[q, p] = -B[p, q]
            k += 2
    return _slh_ambient(A, B)


@lru_cache(maxsize=None)
def basis_of_p(family: AlgebraFamily) -> tuple[np.ndarray, ...]:
    """Matrices of the canonical basis, one per coordinate."""
    out = []
    for k in range(family.dim_p):
        c = np.zeros(family.dim_p)
        c[k] = 1.0
        out.append(_readonly(matrix_from_coords(family, c)))
    return tuple(out)


@lru_cache(maxsize=None)
def basis_of_k(family: AlgebraFamily) -> tuple[np.ndarray, ...]:
    """Basis of the +1 eigenspace (the compact subalgebra)."""
    out = []
    if family.kind == "sl_r":
        n = family.n
        for p in range(n):
            for q in range(p + 1, n):
                E = np.zeros((n, n))
                E[p, q], E[q, p] = 1.0, -1.0
                out.append(E)
    elif family.kind == "so_mn":
        m, n, N = family.m, family.n, family.ambient_size
        for block, size in ((0, m), (m, n)):
            for p in range(size):
                for q in range(p + 1, size):
                    E = np.zeros((N, N))
                    E[block + p, block + q] = 1.0
                    E[block + q, block + p] = -1.0
                    out.append(E)
    else:
        m = family.m
        zero = np.zeros((m, m), dtype=complex)
        # A skew-Hermitian (m^2 real dimensions)
        for q in range(m):
            A = zero.copy()
            A[q, q] = 1j
            out.append(_slh_ambient(A, zero))
        for p in range(m):
            for q in range(p + 1, m):
                A = zero.copy()
                A[p, q], A[q, p] = 1.0, -1.0
                out.append(_slh_ambient(A, zero))
                A = zero.copy()
                A[p, q] = A[q, p] = 1j
                out.append(_slh_ambient(A, zero))
        # B complex symmetric (m(m+1) real dimensions)
        for p in range(m):
            for q in range(p, m):
                B = zero.copy()
                B[p, q] = B[q, p] = 1.0
                out.append(_slh_ambient(zero, B))
                B = zero.copy()
                B[p, q] = B[q, p] = 1j
                out.append(_slh_ambient(zero, B))
    return tuple(_readonly(E) for E in out)


# ---------------------------------------------------------------------------
# Points
# ---------------------------------------------------------------------------

def _scale(X: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(X))) if X.size else 1.0)


def _check_p_shape(family: AlgebraFamily, X: np.ndarray, tol: float) -> None:
    N = family.ambient_size
    if X.shape != (N, N):
        raise ShapeError(f"expected {N} x {N} matrix for {family.label}, got {X.shape}")
    s = _scale(X)
    if family.kind == "sl_r":
        if np.iscomplexobj(X) and np.max(np.abs(X.imag)) > tol * s:
            raise ShapeError("sl_r point must be real")
        Xr = X.real
        if np.max(np.abs(Xr - Xr.T)) > tol * s:
            raise ShapeError("sl_r point must be symmetric")
        if abs(np.trace(Xr)) > tol * s:
            raise ShapeError("sl_r point must be traceless")
    elif family.kind == "so_mn":
        if np.iscomplexobj(X) and np.max(np.abs(X.imag)) > tol * s:
            raise ShapeError("so_mn point must be real")
        Xr = X.real
        m = family.m
        if np.max(np.abs(Xr[:m, :m])) > tol * s or np.max(np.abs(Xr[m:, m:])) > tol * s:
            raise ShapeError("so_mn point must vanish on the diagonal blocks")
        if np.max(np.abs(Xr[m:, :m] - Xr[:m, m:].T)) > tol * s:
            raise ShapeError("so_mn point must have symmetric off-diagonal blocks")
    else:
        m = family.m
        A, B = X[:m, :m], X[:m, m:]
        if np.max(np.abs(A - A.conj().T)) > tol * s:
            raise ShapeError("sl_h point needs Hermitian A block")
        if abs(np.trace(A).real) > tol * s or abs(np.trace(A).imag) > tol * s:
            raise ShapeError("sl_h point needs traceless A block")
        if np.max(np.abs(B + B.T)) > tol * s:
            raise ShapeError("sl_h point needs antisymmetric B block")
        if np.max(np.abs(X[m:, :m] + B.conj())) > tol * s:
            raise ShapeError("sl_h point has inconsistent lower-left block")
        if np.max(np.abs(X[m:, m:] - A.conj())) > tol * s:
            raise ShapeError("sl_h point has inconsistent lower-right block")


@dataclass(frozen=True, eq=False)
class PointP:
    """Element of the -1 eigenspace with its canonical coordinate vector.

    The stored matrix is always the exact basis combination of ``coords``,
    so the two representations round-trip bit-exactly.
    """

    family: AlgebraFamily
    matrix: np.ndarray
    coords: np.ndarray

    @staticmethod
    def from_coords(family: AlgebraFamily, coords) -> "PointP":
        coords = np.array(coords, dtype=float)
        M = matrix_from_coords(family, coords)
        return PointP(family, _readonly(M), _readonly(coords))

    @staticmethod
    def from_matrix(family: AlgebraFamily, X, tol: float = STRUCT_TOL) -> "PointP":
        X = np.asarray(X, dtype=complex if family.is_complex else float)
        _check_p_shape(family, X, tol)
        return PointP.from_coords(family, coords_from_matrix(family, X))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


def point_from_block(family: AlgebraFamily, B) -> PointP:
    """Build an so_mn point from its rectangular block (user orientation)."""
    if family.kind != "so_mn":
        raise ShapeError("point_from_block applies to so_mn only")
    B = np.asarray(B, dtype=float)
    rows, cols = (family.n, family.m) if family.user_transposed else (family.m, family.n)
    if B.shape != (rows, cols):
        raise ShapeError(f"expected a {rows} x {cols} block, got {B.shape}")
    Bc = B.T if family.user_transposed else B
    m, n, N = family.m, family.n, family.ambient_size
    X = np.zeros((N, N))
    X[:m, m:] = Bc
    X[m:, :m] = Bc.T
    return PointP.from_matrix(family, X)


def block_of_point(x: PointP) -> np.ndarray:
    """The rectangular block of an so_mn point, in user orientation."""
    if x.family.kind != "so_mn":
        raise ShapeError("block_of_point applies to so_mn only")
    B = x.matrix[: x.family.m, x.family.m:]
    return B.T if x.family.user_transposed else B


def embed_point(family: AlgebraFamily, a) -> PointP:
    """Embed a vector of the abelian subspace as a point.

    sl_r: diag(a) (a must sum to ~0);  so_mn: rectangular-diagonal block;
    sl_h: diag(a, a) with a real and summing to ~0.
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (family.chamber_len,):
        raise ShapeError(
            f"expected vector of length {family.chamber_len}, got {a.shape}"
        )
    if family.kind == "sl_r":
        return PointP.from_matrix(family, np.diag(a))
    if family.kind == "so_mn":
        m, n, N = family.m, family.n, family.ambient_size
        X = np.zeros((N, N))
        for q in range(n):
            X[q, m + q] = a[q]
            X[m + q, q] = a[q]
        return PointP.from_matrix(family, X)
    m = family.m
    return PointP.from_matrix(family, _slh_ambient(np.diag(a).astype(complex),
                                                   np.zeros((m, m), dtype=complex)))


# ---------------------------------------------------------------------------
# Cartan decomposition
# ---------------------------------------------------------------------------

def _check_algebra_membership(family: AlgebraFamily, X: np.ndarray, tol: float) -> None:
    N = family.ambient_size
    if X.shape != (N, N):
        raise ShapeError(f"expected {N} x {N} matrix, got {X.shape}")
    s = _scale(X)
    if family.kind == "sl_r":
        if np.iscomplexobj(X) and np.max(np.abs(X.imag)) > tol * s:
            raise ShapeError("sl_r element must be real")
        if abs(np.trace(X).real) > tol * s:
            raise ShapeError("sl_r element must be traceless")
    elif family.kind == "so_mn":
        if np.iscomplexobj(X) and np.max(np.abs(X.imag)) > tol * s:
            raise ShapeError("so_mn element must be real")
        Imn = np.diag([1.0] * family.m + [-1.0] * family.n)
        if np.max(np.abs(X.real.T @ Imn + Imn @ X.real)) > tol * s:
            raise ShapeError("element violates the defining relation of so_mn")
    else:
        m = family.m
        A, B = X[:m, :m], X[:m, m:]
        if np.max(np.abs(X[m:, :m] + B.conj())) > tol * s or \
           np.max(np.abs(X[m:, m:] - A.conj())) > tol * s:
            raise ShapeError("element violates the quaternionic block structure")
        if abs(np.trace(A).real) > tol * s:
            raise ShapeError("sl_h element needs Re(tr A) = 0")


def cartan_decompose(X, family: AlgebraFamily, tol: float = STRUCT_TOL):
    """Split an algebra element into its +1 and -1 involution components.

    Returns ``(k_part, p_part)`` with ``k_part + p_part.matrix == X`` to
    machine precision (``k_part`` is computed as the difference).
    """
    X = np.asarray(X, dtype=complex if family.is_complex else float)
    _check_algebra_membership(family, X, tol)
    if family.kind == "sl_h":
        p_raw = (X + X.conj().T) / 2.0
    else:
        p_raw = (X + X.T) / 2.0
    p_part = PointP.from_matrix(family, p_raw, tol=max(tol, 100 * STRUCT_TOL))
    k_part = X - p_part.matrix
    return k_part, p_part


# ---------------------------------------------------------------------------
# Chamber coordinates with conjugating witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChamberPoint:
    """Chamber coordinates of a point, plus the conjugator into the abelian
    subspace when the point came from a matrix (``witness @ X @ witness^-1``
    is the embedded chamber vector)."""

    family: AlgebraFamily
    a: np.ndarray
    witness: np.ndarray | None = None


def _stable_desc(values: np.ndarray) -> np.ndarray:
    # stable descending sort; exact ties keep original index order
    return np.argsort(-values, kind="stable")


def _chamber_sl_r(x: PointP) -> ChamberPoint:
    w, V = np.linalg.eigh(x.matrix)
    order = _stable_desc(w)
    a = w[order]
    Q = V[:, order].copy()
    if np.linalg.det(Q) < 0:
        Q[:, -1] = -Q[:, -1]
    return ChamberPoint(x.family, _readonly(a), _readonly(Q.T.copy()))


def _chamber_so_mn(x: PointP) -> ChamberPoint:
    fam = x.family
    m, n = fam.m, fam.n
    B = x.matrix[:m, m:]
    U, s, Vt = np.linalg.svd(B)
    V = Vt.T.copy()
    U = U.copy()
    s = s.copy()
    if fam.weyl_type == "B":
        # spare column m-1 >= n exists; all singular values stay >= 0
        if np.linalg.det(V) < 0:
            V[:, n - 1] = -V[:, n - 1]
            U[:, n - 1] = -U[:, n - 1]
        if np.linalg.det(U) < 0:
            U[:, m - 1] = -U[:, m - 1]
    else:
        # m == n: the last coordinate absorbs the sign of det B
        if np.linalg.det(V) < 0:
            V[:, n - 1] = -V[:, n - 1]
            s[n - 1] = -s[n - 1]
        if np.linalg.det(U) < 0:
            U[:, n - 1] = -U[:, n - 1]
            s[n - 1] = -s[n - 1]
        s[n - 1] += 0.0  # normalize -0.0
    N = fam.ambient_size
    k = np.zeros((N, N))
    k[:m, :m] = U.T
    k[m:, m:] = V.T
    return ChamberPoint(fam, _readonly(s), _readonly(k))


def _chamber_sl_h(x: PointP, cluster_tol: float = 1e-8) -> ChamberPoint:
    fam = x.family
    m = fam.m
    X = x.matrix
    w, V = np.linalg.eigh(X)
    order = _stable_desc(w)
    w = w[order]
    V = V[:, order]
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = np.eye(m)
    J[m:, :m] = -np.eye(m)
    # split eigenvalues into clusters of even size; each cluster is invariant
    # under v -> -J conj(v), which pairs the eigenvectors quaternionically
    s = _scale(X)
    clusters, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or abs(w[i] - w[i - 1]) > cluster_tol * s:
            clusters.append((start, i))
            start = i
    us = []
    for lo, hi in clusters:
        if (hi - lo) % 2 != 0:
            raise ComputationError("odd eigenvalue multiplicity in quaternionic point")
        basis = V[:, lo:hi]
        chosen: list[np.ndarray] = []
        for _ in range((hi - lo) // 2):
            # pick a cluster vector independent of the span chosen so far
            cand = None
            for j in range(basis.shape[1]):
                v = basis[:, j].copy()
                for c in chosen:
                    v -= c * (c.conj() @ v)
                nv = np.linalg.norm(v)
                if cand is None or nv > cand[0]:
                    cand = (nv, v)
            nv, v = cand
            if nv < 1e-8:
                raise ComputationError("quaternionic pairing failed")
            u = v / nv
            us.append((w[lo], u))
            chosen.append(u)
            chosen.append(-J @ u.conj())
    U = np.zeros((2 * m, 2 * m), dtype=complex)
    a = np.zeros(m)
    for q, (lam, u) in enumerate(us):
        a[q] = lam
        U[:, q] = u
        U[:, m + q] = -J @ u.conj()
    witness = U.conj().T
    return ChamberPoint(fam, _readonly(a), _readonly(witness))


def chamber(x: PointP, witness_tol: float = WITNESS_TOL) -> ChamberPoint:
    """Chamber coordinates of a point and a compact-group conjugator into
    the abelian subspace."""
    try:
        if x.family.kind == "sl_r":
            cp = _chamber_sl_r(x)
        elif x.family.kind == "so_mn":
            cp = _chamber_so_mn(x)
        else:
            cp = _chamber_sl_h(x)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh rarely fails
        raise ComputationError(str(exc)) from exc
    target = embed_point(x.family, cp.a).matrix
    k = cp.witness
    resid = np.max(np.abs(k @ x.matrix @ k.conj().T - target))
    if resid > witness_tol * _scale(x.matrix):
        raise ComputationError(f"conjugation witness residual {resid:.3e}")
    return cp


def normalize_to_chamber(family: AlgebraFamily, z) -> np.ndarray:
    """Weyl-normalize a vector of the abelian subspace into the closed chamber."""
    z = np.asarray(z, dtype=float)
    if z.shape != (family.chamber_len,):
        raise ShapeError(f"expected length {family.chamber_len}, got {z.shape}")
    if family.weyl_type == "A":
        return np.sort(z)[::-1].copy()
    v = np.sort(np.abs(z))[::-1].copy()
    if family.weyl_type == "D" and np.prod(np.sign(z)) < 0:
        v[-1] = -v[-1]
    v[-1] += 0.0
    return v


def check_chamber(family: AlgebraFamily, a, tol: float = CHAMBER_TOL) -> np.ndarray:
    """Validate chamber inequalities; returns the vector as float array."""
    a = np.asarray(a, dtype=float)
    if a.shape != (family.chamber_len,):
        raise ChamberError(f"expected length {family.chamber_len}, got {a.shape}")
    s = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    diffs = a[:-1] - a[1:]
    if family.weyl_type == "A":
        if diffs.size and diffs.min() < -tol * s:
            raise ChamberError("entries must be sorted descending")
        if abs(a.sum()) > tol * s * len(a):
            raise ChamberError("entries must sum to zero")
    elif family.weyl_type == "B":
        if diffs.size and diffs.min() < -tol * s:
            raise ChamberError("entries must be sorted descending")
        if a[-1] < -tol * s:
            raise ChamberError("entries must be nonnegative")
    else:
        if diffs[:-1].size and diffs[:-1].min() < -tol * s:
            raise ChamberError("entries must be sorted descending")
        if a.size >= 2 and a[-2] < abs(a[-1]) - tol * s:
            raise ChamberError("second-to-last entry must dominate |last|")
    return a


# ---------------------------------------------------------------------------
# Weyl group: orbits, abstract elements, compact-group witnesses
# ---------------------------------------------------------------------------

def _orbit_bound(family: AlgebraFamily) -> int:
    L = family.chamber_len
    if family.weyl_type == "A":
        return math.factorial(L)
    if family.weyl_type == "B":
        return math.factorial(L) * 2**L
    return math.factorial(L) * 2 ** (L - 1)


def weyl_orbit(a: ChamberPoint, cap: int = ORBIT_CAP) -> list[np.ndarray]:
    """Full Weyl orbit of a chamber point, deduplicated, in a deterministic
    (descending lexicographic) order."""
    fam = a.family
    if _orbit_bound(fam) > cap:
        raise SizeError(f"Weyl orbit of {fam.label} exceeds cap {cap}")
    base = tuple(float(v) for v in a.a)
    seen = set()
    for perm in itertools.permutations(base):
        if fam.weyl_type == "A":
            seen.add(perm)
        elif fam.weyl_type == "B":
            for signs in itertools.product((1.0, -1.0), repeat=len(perm)):
                seen.add(tuple(s * v + 0.0 for s, v in zip(signs, perm)))
        else:
            for signs in itertools.product((1.0, -1.0), repeat=len(perm)):
                if np.prod(signs) > 0:
                    seen.add(tuple(s * v + 0.0 for s, v in zip(signs, perm)))
    return [np.array(t) for t in sorted(seen, reverse=True)]


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation acting by (w.a)_i = signs[i] * a[perm[i]]."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return np.array([self.signs[i] * v[self.perm[i]] for i in range(len(v))])


@lru_cache(maxsize=None)
def weyl_elements(family: AlgebraFamily) -> tuple[WeylElement, ...]:
    """All Weyl group elements (enumeration capped like orbits)."""
    if _orbit_bound(family) > ORBIT_CAP:
        raise SizeError(f"Weyl group of {family.label} exceeds enumeration cap")
    L = family.chamber_len
    out = []
    for perm in itertools.permutations(range(L)):
        if family.weyl_type == "A":
            out.append(WeylElement(perm, (1,) * L))
        else:
            for signs in itertools.product((1, -1), repeat=L):
                if family.weyl_type == "D" and int(np.prod(signs)) < 0:
                    continue
                out.append(WeylElement(perm, signs))
    return tuple(out)


def weyl_witness(family: AlgebraFamily, w: WeylElement) -> np.ndarray:
    """A compact-group element realizing ``w`` on the abelian subspace:
    Ad_k(embed(a)) = embed(w.a) for every a."""
    L = family.chamber_len
    if family.kind in ("sl_r", "sl_h"):
        P = np.zeros((L, L))
        for i in range(L):
            P[i, w.perm[i]] = 1.0
        if np.linalg.det(P) < 0:
            P[:, -1] = -P[:, -1]
        if family.kind == "sl_r":
            return _readonly(P)
        Z = np.zeros((L, L))
        return _readonly(np.block([[P, Z], [Z, P]]))
    m, n = family.m, family.n
    P = np.zeros((n, n))
    for i in range(n):
        P[i, w.perm[i]] = 1.0
    G = np.zeros((m, m))
    G[:n, :n] = np.diag([float(s) for s in w.signs]) @ P
    for j in range(n, m):
        G[j, j] = 1.0
    H = P.copy()
    # determinant fixups that do not change the action on the abelian part
    if np.linalg.det(H) < 0:
        H[:, n - 1] = -H[:, n - 1]
        G[:, n - 1] = -G[:, n - 1]
    if np.linalg.det(G) < 0:
        if m == n:
            raise ComputationError("odd sign change is not realizable for m == n")
        G[:, m - 1] = -G[:, m - 1]
    N = family.ambient_size
    k = np.zeros((N, N))
    k[:m, :m] = G
    k[m:, m:] = H
    return _readonly(k)


# ---------------------------------------------------------------------------
# Projection onto the abelian subspace and weight functionals
# ---------------------------------------------------------------------------

def kostant_project(x: PointP) -> np.ndarray:
    """Orthogonal projection (trace form) onto the abelian subspace,
    returned in chamber coordinates."""
    fam = x.family
    if fam.kind == "sl_r":
        return np.diag(x.matrix).copy()
    if fam.kind == "so_mn":
        m, n = fam.m, fam.n
        return np.array([x.matrix[q, m + q] for q in range(n)])
    m = fam.m
    return np.diag(x.matrix[:m, :m]).real.copy()


def _doubled_spectrum(a: np.ndarray) -> np.ndarray:
    return np.repeat(a, 2)


def analytic_weight_count(family: AlgebraFamily) -> int:
    if family.kind == "sl_r":
        return family.n - 1
    if family.kind == "sl_h":
        return 2 * family.m - 1
    return family.restricted_rank


def analytic_weight_tags(family: AlgebraFamily) -> list[str]:
    """Representation tag of each restricted fundamental weight, in the order
    emitted by :func:`fundamental_weight_values`."""
    if family.weyl_type == "A":
        return [f"compound_{p}" for p in range(1, analytic_weight_count(family) + 1)]
    r = family.restricted_rank
    if family.weyl_type == "B":
        return [f"compound_{p}" for p in range(1, r)] + ["spin"]
    return [f"compound_{p}" for p in range(1, r - 1)] + ["halfspin_minus", "halfspin_plus"]


def fundamental_weight_values(family: AlgebraFamily, a, tol: float = CHAMBER_TOL) -> np.ndarray:
    """Evaluate the restricted fundamental weights at a closed-chamber point.

    Type A uses partial sums of the ambient spectrum (doubled for sl_h);
    type B partial sums with a final half-sum; type D partial sums with the
    two half-sum/half-difference functionals last.
    """
    vec = a.a if isinstance(a, ChamberPoint) else a
    vec = check_chamber(family, vec, tol=tol)
    if family.weyl_type == "A":
        spec = _doubled_spectrum(vec) if family.kind == "sl_h" else vec
        return np.cumsum(spec)[:-1]
    r = family.restricted_rank
    sums = np.cumsum(vec)
    if family.weyl_type == "B":
        out = np.empty(r)
        out[: r - 1] = sums[: r - 1]
        out[r - 1] = sums[r - 1] / 2.0
        return out
    out = np.empty(r)
    out[: r - 2] = sums[: r - 2]
    out[r - 2] = (sums[r - 1] - 2.0 * vec[r - 1]) / 2.0
    out[r - 1] = sums[r - 1] / 2.0
    return out


def simple_root_vectors(family: AlgebraFamily) -> list[np.ndarray]:
    """Vectors dual (standard dot product) to the simple restricted roots.

    The trace form restricted to the abelian subspace is a positive multiple
    of the dot product on chamber coordinates, so the generated cone is the
    same as for the true trace-form duals.
    """
    L = family.chamber_len
    out = []
    for i in range(L - 1):
        v = np.zeros(L)
        v[i], v[i + 1] = 1.0, -1.0
        out.append(v)
    if family.weyl_type == "B":
        v = np.zeros(L)
        v[L - 1] = 1.0
        out.append(v)
    elif family.weyl_type == "D":
        v = np.zeros(L)
        v[L - 2] = v[L - 1] = 1.0
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# JSON serialization of families and points
# ---------------------------------------------------------------------------

def family_to_json(family: AlgebraFamily) -> dict:
    if family.kind == "sl_r":
        return {"kind": "sl_r", "n": family.n}
    if family.kind == "so_mn":
        if family.user_transposed:
            return {"kind": "so_mn", "m": family.n, "n": family.m}
        return {"kind": "so_mn", "m": family.m, "n": family.n}
    return {"kind": "sl_h", "m": family.m}


def family_from_json(data: dict) -> AlgebraFamily:
    kind = data.get("kind")
    if kind == "sl_r":
        return sl_r(int(data["n"]))
    if kind == "so_mn":
        return so_mn(int(data["m"]), int(data["n"]))
    if kind == "sl_h":
        return sl_h(int(data["m"]))
    raise ShapeError(f"unknown family kind {kind!r}")


def _complex_to_json(M: np.ndarray) -> dict:
    return {"re": M.real.tolist(), "im": M.imag.tolist()}


def _complex_from_json(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def point_to_json(x: PointP) -> dict:
    fam = x.family
    if fam.kind == "sl_r":
        point = {"matrix": x.matrix.tolist()}
    elif fam.kind == "so_mn":
        point = {"B": block_of_point(x).tolist()}
    else:
        m = fam.m
        point = {"A": _complex_to_json(x.matrix[:m, :m]),
                 "B": _complex_to_json(x.matrix[:m, m:])}
    return {"family": family_to_json(fam), "point": point}


def point_from_json(data: dict, family: AlgebraFamily | None = None) -> PointP:
    fam = family_from_json(data["family"])
    if family is not None and fam != family:
        from .errors import FamilyMismatch
        raise FamilyMismatch(f"file family {fam.label} != requested {family.label}")
    point = data["point"]
    if fam.kind == "sl_r":
        return PointP.from_matrix(fam, np.asarray(point["matrix"], dtype=float))
    if fam.kind == "so_mn":
        return point_from_block(fam, np.asarray(point["B"], dtype=float))
    A = _complex_from_json(point["A"])
    B = _complex_from_json(point["B"])
    return PointP.from_matrix(fam, _slh_ambient(A, B))
