"""Matrix realizations of the fundamental representations.

Two constructions cover everything the classical families need: additive
compounds (derivatives of exterior powers) of the natural representation,
and spin / half-spin representations of complex orthogonal algebras built
from an iterated Pauli tensor construction of Hermitian gamma matrices.
All representations come out unitary on the compact real form, so their
invariant Gram matrix is the identity; :func:`unitarize` verifies that and
falls back to solving for a Gram matrix when handed a nonstandard basis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .algebra import (
    AlgebraFamily,
    ChamberPoint,
    PointP,
    basis_of_k,
    basis_of_p,
    embed_point,
)
from .errors import (
    ComputationError,
    FamilyMismatch,
    RangeError,
    ShapeError,
    SizeError,
    SolveError,
)

COMPOUND_CAP = 4096   # maximal compound dimension
SPINOR_MAX_M = 14     # spinor space capped at 2^7 = 128
GRAM_SOLVE_CAP = 64   # full invariant-Gram solve is desk scale only


# ---------------------------------------------------------------------------
# Complexified realization
# ---------------------------------------------------------------------------

def complexify(family: AlgebraFamily, X: np.ndarray) -> np.ndarray:
    """Image of an algebra element in the standard complexified realization.

    sl_r and sl_h embed identically; so_mn conjugates by diag(i*I_m, I_n),
    which lands in the complex orthogonal algebra of size m + n.
    """
    if family.kind != "so_mn":
        return np.asarray(X, dtype=complex)
    m, N = family.m, family.ambient_size
    J = np.concatenate([np.full(m, 1j), np.ones(N - m, dtype=complex)])
    return (J[:, None] * np.asarray(X, dtype=complex)) * (1.0 / J)[None, :]


def natural_matrix(y: PointP) -> np.ndarray:
    """The natural representation applied to a point; always Hermitian."""
    return complexify(y.family, y.matrix)


# ---------------------------------------------------------------------------
# Additive compounds (derivatives of exterior powers)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _subsets(N: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations(range(N), p))


def compound_matrix(M: np.ndarray, p: int, cap: int = COMPOUND_CAP) -> np.ndarray:
    """Additive p-th compound of M on the lexicographic p-subset basis.

    The (J, I) entry collects sign * M[j, i_k] over single replacements of
    i_k in I by j giving J; eigenvalues are all p-fold sums of eigenvalues
    of M, and Hermitian M yields a Hermitian compound.
    """
    M = np.asarray(M)
    N = M.shape[0]
    if M.shape != (N, N):
        raise ShapeError(f"square matrix required, got {M.shape}")
    if not 1 <= p <= N:
        raise RangeError(f"compound order p = {p} outside [1, {N}]")
    D = math.comb(N, p)
    if D > cap:
        raise SizeError(f"compound dimension C({N},{p}) = {D} exceeds cap {cap}")
    subsets = _subsets(N, p)
    index = {s: i for i, s in enumerate(subsets)}
    out = np.zeros((D, D), dtype=complex)
    for col, I in enumerate(subsets):
        others = [set(I) - {ik} for ik in I]
        for k, ik in enumerate(I):
            rest = others[k]
            for j in range(N):
                v = M[j, ik]
                if v == 0:
                    continue
                if j == ik:
                    out[col, col] += v
                elif j not in rest:
                    J = tuple(sorted(rest | {j}))
                    t = sum(1 for e in rest if e < j)
                    sign = -1.0 if (k + t) % 2 else 1.0
                    out[index[J], col] += sign * v
    return out


# ---------------------------------------------------------------------------
# Gamma matrices and spin representations
# ---------------------------------------------------------------------------

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SY = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


@lru_cache(maxsize=None)
def gamma_matrices(M: int) -> tuple[np.ndarray, ...]:
    """M Hermitian anticommuting involutions on (C^2)^{tensor floor(M/2)}."""
    if M < 2 or M > SPINOR_MAX_M:
        raise SizeError(f"gamma construction supports 2 <= M <= {SPINOR_MAX_M}")
    k = M // 2
    gammas = []
    for j in range(1, k + 1):
        for tail in (_SX, _SY):
            factors = [_SZ] * (j - 1) + [tail] + [np.eye(2, dtype=complex)] * (k - j)
            g = factors[0]
            for f in factors[1:]:
                g = np.kron(g, f)
            gammas.append(g)
    if M % 2 == 1:
        g = _SZ
        for _ in range(k - 1):
            g = np.kron(g, _SZ)
        gammas.append(g)
    out = []
    for g in gammas:
        g.setflags(write=False)
        out.append(g)
    return tuple(out)


@lru_cache(maxsize=None)
def _gamma_pairs(M: int) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    """Stacked products gamma_i @ gamma_j for i < j."""
    gam = gamma_matrices(M)
    pairs = tuple((i, j) for i in range(M) for j in range(i + 1, M))
    stack = np.stack([gam[i] @ gam[j] for i, j in pairs])
    stack.setflags(write=False)
    return stack, pairs


@lru_cache(maxsize=None)
def _chirality_indices(M: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Index sets of the +1 / -1 eigenspaces of the volume element.

    With the Pauli tensor construction the volume element is diagonal, so
    the half-spin spaces are coordinate subspaces.
    """
    k = M // 2
    gam = gamma_matrices(M)
    vol = np.eye(2**k, dtype=complex)
    for g in gam[: 2 * k]:
        vol = vol @ g
    diag = ((1j) ** k * np.diag(vol)).real
    plus = tuple(int(i) for i in np.nonzero(diag > 0.5)[0])
    minus = tuple(int(i) for i in np.nonzero(diag < -0.5)[0])
    if len(plus) != 2 ** (k - 1) or len(minus) != 2 ** (k - 1):
        raise ComputationError("volume element is not a balanced involution")
    return plus, minus


def spin_matrix(X: np.ndarray, variant: str = "spin",
                tol: float = 1e-10) -> np.ndarray:
    """Spinor image of a complex antisymmetric matrix.

    ``variant`` is ``"spin"`` (odd size), or ``"halfspin_plus"`` /
    ``"halfspin_minus"`` (even size), selecting a chirality eigenspace of
    the volume element.  Satisfies the bracket homomorphism property.
    """
    X = np.asarray(X, dtype=complex)
    M = X.shape[0]
    if X.shape != (M, M):
        raise ShapeError(f"square matrix required, got {X.shape}")
    if M > SPINOR_MAX_M:
        raise SizeError(f"spinor construction capped at M <= {SPINOR_MAX_M}")
    s = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X + X.T)) > tol * s:
        raise ShapeError("spin representation needs an antisymmetric matrix")
    if variant == "spin":
        if M % 2 == 0:
            raise ShapeError("full spin variant requires odd size")
    elif variant in ("halfspin_plus", "halfspin_minus"):
        if M % 2 == 1:
            raise ShapeError("half-spin variants require even size")
    else:
        raise ShapeError(f"unknown spin variant {variant!r}")
    stack, pairs = _gamma_pairs(M)
    coeff = np.array([X[i, j] for i, j in pairs])
    sigma = 0.5 * np.tensordot(coeff, stack, axes=1)
    if variant == "spin":
        return sigma
    plus, minus = _chirality_indices(M)
    idx = plus if variant == "halfspin_plus" else minus
    return sigma[np.ix_(idx, idx)]


# ---------------------------------------------------------------------------
# Fundamental representations of a family
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FundamentalRep:
    """One labeled fundamental representation with a matrix evaluator.

    ``weight_coeffs`` expresses the highest restricted weight over chamber
    coordinates (entries are exact integers, halves or twos), so that the
    maximal eigenvalue at a closed-chamber point a is weight_coeffs . a.
    The ``halfspin_plus`` tag always names the representation whose weight
    has all entries +1/2; ``chirality`` records which volume-element
    eigenspace realizes it.  ``gram`` is the invariant Gram matrix; ``None``
    means the identity.
    """

    family: AlgebraFamily
    tag: str                    # "compound_p" | "spin" | "halfspin_plus/minus"
    p: int | None
    dim: int
    weight_coeffs: np.ndarray
    gram: np.ndarray | None = None
    chirality: int = 0          # half-spins only: +1 / -1 volume eigenspace

    def apply(self, X_ambient: np.ndarray) -> np.ndarray:
        """Representation matrix of an algebra element (ambient realization)."""
        cx = complexify(self.family, X_ambient)
        if self.tag.startswith("compound"):
            return compound_matrix(cx, self.p)
        if self.tag == "spin":
            return spin_matrix(cx, "spin")
        variant = "halfspin_plus" if self.chirality > 0 else "halfspin_minus"
        return spin_matrix(cx, variant)


def _compound_weight_coeffs(family: AlgebraFamily, p: int) -> np.ndarray:
    L = family.chamber_len
    w = np.zeros(L)
    if family.kind == "sl_h":
        q, rem = divmod(p, 2)
        w[:q] = 2.0
        if rem and q < L:
            w[q] = 1.0
    else:
        w[: min(p, L)] = 1.0
    return w


def _halfspin_plus_first(family: AlgebraFamily) -> bool:
    """Whether the +1 chirality block carries the all-plus-half weight.

    Decided numerically at a generic interior chamber point; for m > n both
    blocks restrict to the same functional and the choice is immaterial.
    """
    L = family.chamber_len
    a = np.arange(L, 0, -1, dtype=float)
    X = embed_point(family, a).matrix
    cx = complexify(family, X)
    target = a.sum() / 2.0
    top_plus = np.linalg.eigvalsh(spin_matrix(cx, "halfspin_plus")).max()
    return bool(abs(top_plus - target) <= 1e-9 * max(1.0, target))


@lru_cache(maxsize=None)
def fundamental_reps(family: AlgebraFamily) -> tuple[FundamentalRep, ...]:
    """All fundamental representations used for the family's pencil set.

    For so_mn of odd ambient size both the top exterior power and the spin
    representation are emitted (their weights differ by the factor two);
    even ambient size emits the two half-spin representations.
    """
    out: list[FundamentalRep] = []
    N = family.ambient_size

    def add_compound(p: int) -> None:
        dim = math.comb(N, p)
        if dim > COMPOUND_CAP:
            raise SizeError(
                f"compound dimension C({N},{p}) = {dim} exceeds cap {COMPOUND_CAP}")
        out.append(FundamentalRep(family, f"compound_{p}", p, dim,
                                  _compound_weight_coeffs(family, p)))

    if family.kind in ("sl_r", "sl_h"):
        for p in range(1, N):
            add_compound(p)
        return tuple(out)

    if N % 2 == 1:
        r_cx = (N - 1) // 2
        for p in range(1, r_cx + 1):
            add_compound(p)
        if N > SPINOR_MAX_M:
            raise SizeError(f"spinor construction capped at M <= {SPINOR_MAX_M}")
        w = np.full(family.chamber_len, 0.5)
        out.append(FundamentalRep(family, "spin", None, 2**r_cx, w))
        return tuple(out)

    r_cx = N // 2
    for p in range(1, r_cx - 1):
        add_compound(p)
    if N > SPINOR_MAX_M:
        raise SizeError(f"spinor construction capped at M <= {SPINOR_MAX_M}")
    w_plus = np.full(family.chamber_len, 0.5)
    w_minus = w_plus.copy()
    if family.m == family.n:
        w_minus[-1] = -0.5
    plus_chir = 1 if _halfspin_plus_first(family) else -1
    dim = 2 ** (r_cx - 1)
    out.append(FundamentalRep(family, "halfspin_minus", None, dim, w_minus,
                              chirality=-plus_chir))
    out.append(FundamentalRep(family, "halfspin_plus", None, dim, w_plus,
                              chirality=plus_chir))
    return tuple(out)


def rep_by_tag(family: AlgebraFamily, tag: str) -> FundamentalRep:
    for rep in fundamental_reps(family):
        if rep.tag == tag:
            return rep
    raise RangeError(f"{family.label} has no representation tagged {tag!r}")


# ---------------------------------------------------------------------------
# Unitarization (invariant Gram matrix)
# ---------------------------------------------------------------------------

def _compact_form_images(rep: FundamentalRep) -> list[np.ndarray]:
    fam = rep.family
    images = [rep.apply(u) for u in basis_of_k(fam)]
    images += [1j * rep.apply(E) for E in basis_of_p(fam)]
    return images


def _hermitian_basis(d: int) -> list[np.ndarray]:
    out = []
    for q in range(d):
        S = np.zeros((d, d), dtype=complex)
        S[q, q] = 1.0
        out.append(S)
    for p in range(d):
        for q in range(p + 1, d):
            S = np.zeros((d, d), dtype=complex)
            S[p, q] = S[q, p] = 1.0
            out.append(S)
            S = np.zeros((d, d), dtype=complex)
            S[p, q], S[q, p] = 1j, -1j
            out.append(S)
    return out


def solve_invariant_gram(mats: list[np.ndarray], tol: float = 1e-9) -> np.ndarray:
    """Positive-definite Hermitian H with H A + A* H = 0 for all given A.

    Solves the real-linear system over the Hermitian matrices and picks a
    positive-definite element of the null space (normalized to trace = dim).
    """
    d = mats[0].shape[0]
    if d > GRAM_SOLVE_CAP:
        raise SizeError(f"invariant Gram solve capped at dimension {GRAM_SOLVE_CAP}")
    basis = _hermitian_basis(d)
    rows = []
    for A in mats:
        cols = []
        for S in basis:
            T = S @ A + A.conj().T @ S
            cols.append(np.concatenate([T.real.ravel(), T.imag.ravel()]))
        rows.append(np.stack(cols, axis=1))
    system = np.vstack(rows)
    null = scipy.linalg.null_space(system, rcond=1e-10)
    if null.shape[1] == 0:
        raise SolveError("no invariant Hermitian matrix found")
    rng = np.random.default_rng(0)
    candidates = [null[:, j] for j in range(null.shape[1])]
    candidates += [null @ rng.normal(size=null.shape[1]) for _ in range(8)]
    for t in candidates:
        H = sum(c * S for c, S in zip(t, basis))
        H = (H + H.conj().T) / 2.0
        if np.trace(H).real < 0:
            H = -H
        evals = np.linalg.eigvalsh(H)
        if evals.min() > tol * max(1.0, evals.max()):
            return H * (d / np.trace(H).real)
    raise SolveError("no positive-definite invariant Gram matrix found")


def unitarize(rep: FundamentalRep, tol: float = 1e-8) -> np.ndarray:
    """Invariant Gram matrix of a representation.

    The standard constructions are already unitary on the compact form, in
    which case the identity is returned after a direct skew-adjointness
    check; otherwise the linear solve runs.
    """
    images = _compact_form_images(rep)
    worst = max(float(np.max(np.abs(A + A.conj().T))) for A in images)
    scale = max(1.0, max(float(np.max(np.abs(A))) for A in images))
    if worst <= tol * scale:
        return np.eye(rep.dim, dtype=complex)
    return solve_invariant_gram(images)


# ---------------------------------------------------------------------------
# Maximal eigenvalues
# ---------------------------------------------------------------------------

def rep_matrix(rep: FundamentalRep, y) -> np.ndarray:
    """Representation matrix at a point or chamber vector."""
    if isinstance(y, PointP):
        if y.family != rep.family:
            raise FamilyMismatch(
                f"point family {y.family.label} != rep family {rep.family.label}")
        return rep.apply(y.matrix)
    if isinstance(y, ChamberPoint):
        return rep.apply(embed_point(rep.family, y.a).matrix)
    return rep.apply(embed_point(rep.family, np.asarray(y, dtype=float)).matrix)


def max_eigenvalue(rep: FundamentalRep, y) -> float:
    """Largest eigenvalue of the (Gram-self-adjoint) representation matrix."""
    phi = rep_matrix(rep, y)
    try:
        if rep.gram is None:
            herm = (phi + phi.conj().T) / 2.0
            return float(np.linalg.eigvalsh(herm).max())
        L = np.linalg.cholesky(rep.gram)
        B = L.conj().T @ phi @ np.linalg.inv(L.conj().T)
        B = (B + B.conj().T) / 2.0
        return float(np.linalg.eigvalsh(B).max())
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise ComputationError(str(exc)) from exc
