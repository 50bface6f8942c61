"""Jumping pairs: rank-one tensors v (x) h inside the span W = T_0* of phi.

Membership of v h^T in W is tested against the annihilator N of W: for a
fixed hyperplane h the contraction G(h)[r, i] = sum_j N[r, i, j] h[j] is a
linear map S* -> F^r whose kernel is exactly {v : v (x) h in W}.  One batched
rank computation over all of P(U*) therefore gives the whole profile.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bundle import ReducedBundle
from .errors import InvariantViolation, ValidationError
from .exactalg import (
    FieldCtx,
    Subspace,
    annihilator,
    batch_rank,
    kernel,
    normalize,
    projective_point_blocks,
    rank,
    rref,
)

Vec = tuple


@dataclass(frozen=True, order=True)
class JumpingPair:
    """A normalized rank-one element v h^T of W; ordering is by (h, v)."""

    h: Vec
    v: Vec
    coords: Vec = field(compare=False)

    def matrix(self, p: int) -> np.ndarray:
        return np.outer(self.v, self.h) % p

    def key(self):
        return (self.h, self.v)


@dataclass
class JumpingLocusReport:
    p: int
    n: int
    s: int
    t0: int
    pairs: list
    sigma: list
    j_set: list
    profile: dict
    tangent_dims: list
    bound: int
    max_tangent_dim: int
    consistent: bool

    @property
    def empty(self) -> bool:
        return not self.pairs

    def histogram(self) -> dict:
        return dict(sorted(Counter(self.profile.values()).items()))

    def certificate(self) -> dict:
        return {"max_tangent_dim": self.max_tangent_dim, "bound": self.bound, "consistent": self.consistent}


def _tup(x) -> tuple:
    return tuple(int(a) for a in x)


# -- fibers of the two projections ---------------------------------------------


def _contract_h(ann: np.ndarray, hs: np.ndarray, p: int) -> np.ndarray:
    return np.einsum("rij,bj->bri", ann, hs) % p


def _contract_v(ann: np.ndarray, vs: np.ndarray, p: int) -> np.ndarray:
    # rows of the result act on h
    return np.einsum("rij,bi->brj", ann, vs) % p


def fiber_over_h(red: ReducedBundle, h, ann=None) -> Subspace:
    """A_h = {v in S* : v (x) h in W}."""
    h = np.asarray(h, dtype=np.int64) % red.p
    ann = red.annihilator() if ann is None else ann
    if ann.shape[0] == 0:
        return Subspace.span(np.eye(red.s, dtype=np.int64), red.p)
    return kernel(_contract_h(ann, h[None, :], red.p)[0], red.p)


def fiber_over_v(red: ReducedBundle, v, ann=None) -> Subspace:
    """{h in U* : v (x) h in W}; its dimension is b(v)."""
    v = np.asarray(v, dtype=np.int64) % red.p
    ann = red.annihilator() if ann is None else ann
    if ann.shape[0] == 0:
        return Subspace.span(np.eye(red.width, dtype=np.int64), red.p)
    return kernel(_contract_v(ann, v[None, :], red.p)[0], red.p)


def _fiber_dims(red: ReducedBundle, dim: int, contract, full: int):
    ann = red.annihilator()
    out = {}
    for block in projective_point_blocks(dim, red.ctx):
        if ann.shape[0] == 0:
            dims = np.full(block.shape[0], full)
        else:
            dims = full - batch_rank(contract(ann, block, red.p), red.p)
        for pt, d in zip(block.tolist(), dims.tolist()):
            out[tuple(pt)] = d
    return out


def hyperplane_profile(red: ReducedBundle) -> dict:
    """Map every h in P(U*)(F_p) to a(h) = dim{v : v (x) h in W}."""
    return _fiber_dims(red, red.width, _contract_h, red.s)


def point_profile(red: ReducedBundle) -> dict:
    """Map every v in P(S*)(F_p) to b(v) = dim{h : v (x) h in W}."""
    return _fiber_dims(red, red.s, _contract_v, red.width)


# -- tangent spaces ----------------------------------------------------------


def tecnico_space(W, B, A, p: int):
    """{f in span(W) : f(B) subset A} as coefficients in the RREF basis of span(W).

    ``W`` is a stack of ``s x r`` matrices (maps U -> V), ``B`` rows spanning a
    nonzero subspace of U, ``A`` rows spanning a subspace of V (possibly none).
    Returns ``(basis_of_W, Subspace)``.
    """
    W = np.asarray(W, dtype=np.int64) % p
    if W.ndim != 3:
        raise ValidationError(f"W must be a stack of matrices, got shape {W.shape}")
    _, s, r = W.shape
    B = np.asarray(B, dtype=np.int64).reshape(-1, r) % p if np.size(B) else np.zeros((0, r), dtype=np.int64)
    A = np.asarray(A, dtype=np.int64).reshape(-1, s) % p if np.size(A) else np.zeros((0, s), dtype=np.int64)
    if rank(B, p) != B.shape[0] or B.shape[0] == 0:
        raise ValidationError("B must be given by a nonempty independent set of vectors in U")
    if A.shape[0] and rank(A, p) != A.shape[0]:
        raise ValidationError("A must be given by independent vectors in V")
    if A.shape[0] >= s:
        raise ValidationError(f"A must be a proper subspace of V (dim {A.shape[0]} >= s={s})")
    t, e, _ = rref(W.reshape(W.shape[0], s * r), p)
    Wb = e[:t].reshape(t, s, r)
    Q = annihilator(Subspace.span(A, p, s))
    # constraint (q, b): q^T f b = 0, linear in the coefficients of f
    C = np.einsum("qi,kij,bj->qbk", Q, Wb, B) % p
    return Wb, kernel(C.reshape(-1, t), p)


def tecnico_dim(W, B, A, p: int) -> int:
    """dim{f in span(W) : f(B) subset A}; bounded by t-r-s+a+b+1 for transitive W."""
    return tecnico_space(W, B, A, p)[1].dim


def tecnico_bound(t: int, r: int, s: int, a: int, b: int) -> int:
    return t - r - s + a + b + 1


def hyperplane_basis(h, p: int) -> np.ndarray:
    """Basis of ker h inside U."""
    h = np.asarray(h, dtype=np.int64).reshape(1, -1)
    return kernel(h, p).basis


def tangent_space(red: ReducedBundle, pair: JumpingPair) -> Subspace:
    """Coefficient vectors (in the basis of W) of {f in W : f(ker h) subset <v>}."""
    if red.coords(pair.matrix(red.p)) is None:
        raise ValidationError(f"pair v={list(pair.v)}, h={list(pair.h)} is not in W")
    return tecnico_space(red.basis, hyperplane_basis(pair.h, red.p), [pair.v], red.p)[1]


def tangent_dim(red: ReducedBundle, pair: JumpingPair) -> int:
    """Projective dimension of the embedded tangent space of the pair set at ``pair``."""
    return tangent_space(red, pair).dim - 1


def complement_frames(vecs, p: int) -> np.ndarray:
    """For normalized rows x (pivot entry 1), the rows e_i - x_i e_pivot, i != pivot.

    They span the hyperplane {y : x . y = 0} and also form a quotient map with kernel <x>.
    """
    x = np.asarray(vecs, dtype=np.int64) % p
    nb, m = x.shape
    piv = np.argmax(x != 0, axis=1)
    frames = np.zeros((nb, m - 1, m), dtype=np.int64)
    for b in range(nb):
        others = [i for i in range(m) if i != piv[b]]
        frames[b, np.arange(m - 1), others] = 1
        frames[b, :, piv[b]] = (-x[b, others]) % p
    return frames


def tangent_dims(red: ReducedBundle, pairs) -> list:
    """Batched :func:`tangent_dim` over many pairs."""
    if not pairs:
        return []
    p = red.p
    Q = complement_frames([pr.v for pr in pairs], p)
    K = complement_frames([pr.h for pr in pairs], p)
    C = np.einsum("bai,kil,bjl->bajk", Q, red.basis, K, optimize=True) % p
    ranks = batch_rank(C.reshape(len(pairs), -1, red.t0), p)
    return [int(red.t0 - r - 1) for r in ranks]


def tangent_bound(red: ReducedBundle) -> int:
    return red.t0 - red.n - red.s + 1


# -- enumeration -------------------------------------------------------------


def _pairs(red: ReducedBundle) -> list:
    p = red.p
    ann = red.annihilator()
    pairs = []
    for block in projective_point_blocks(red.width, red.ctx):
        if ann.shape[0] == 0:
            hits = np.arange(block.shape[0])
        else:
            a = red.s - batch_rank(_contract_h(ann, block, p), p)
            hits = np.nonzero(a > 0)[0]
        for idx in hits:
            h = block[idx]
            fib = fiber_over_h(red, h, ann)
            for v in fib.points(red.ctx):
                coords = red.coords(np.outer(v, h))
                if coords is None:
                    raise InvariantViolation(f"v={v}, h={_tup(h)} solved but not in W")
                pairs.append(JumpingPair(_tup(h), v, _tup(coords)))
    pairs.sort()
    return pairs


def count_range(p: int, d: int):
    if d < 0:
        return 0.0, 0.0
    return p**d / 2, 3 * (p ** (d + 1) - 1) // (p - 1)


def build_report(red: ReducedBundle, pairs: list, check_bound: bool = True) -> JumpingLocusReport:
    bound = tangent_bound(red)
    tdims = tangent_dims(red, pairs) if red.s >= 2 else []
    if check_bound:
        for pr, d in zip(pairs, tdims):
            if d > bound:
                raise InvariantViolation(
                    f"tangent dim {d} > t0-n-s+1 = {bound} at v={list(pr.v)}, h={list(pr.h)}"
                )
    dmax = max(tdims) if tdims else -1
    lo, hi = count_range(red.p, dmax)
    consistent = (not pairs) or (lo <= len(pairs) <= hi)
    return JumpingLocusReport(
        p=red.p,
        n=red.n,
        s=red.s,
        t0=red.t0,
        pairs=pairs,
        sigma=sorted({pr.v for pr in pairs}),
        j_set=sorted({pr.h for pr in pairs}),
        profile=hyperplane_profile(red),
        tangent_dims=tdims,
        bound=bound,
        max_tangent_dim=dmax,
        consistent=consistent,
    )


def enumerate_jumping_pairs(red: ReducedBundle, check_bound: bool = True) -> JumpingLocusReport:
    if red.s < 2:
        raise ValidationError("jumping pairs need s >= 2 (the only reduced bundle with s = 1 is T(-1))")
    return build_report(red, _pairs(red), check_bound)


def is_jumping_pair_ab(red: ReducedBundle, A, B) -> bool:
    """Whether A (x) B lies in W, for A subset S* and B subset U* given by bases."""
    p = red.p
    A = np.asarray(A, dtype=np.int64).reshape(-1, red.s) % p
    B = np.asarray(B, dtype=np.int64).reshape(-1, red.width) % p
    a, b = A.shape[0], B.shape[0]
    if not (1 <= a <= red.s and 1 <= b <= red.width):
        raise ValidationError(f"need 1 <= a <= s and 1 <= b <= n+1, got a={a}, b={b}")
    if rank(A, p) != a or rank(B, p) != b:
        raise ValidationError("A and B must be given by linearly independent vectors")
    if a * b > red.t0:
        return False
    ann = red.annihilator().reshape(-1, red.s * red.width)
    if ann.shape[0] == 0:
        return True
    tensors = np.einsum("ai,bj->abij", A, B).reshape(a * b, -1)
    return not (ann @ tensors.T % p).any()


# -- reports over the pair set ---------------------------------------------------


def span_report(report: JumpingLocusReport, red: ReducedBundle) -> dict:
    """Projective spans of the pair set in P(T_0), Sigma in P(S) and J in P^n*."""
    p = red.p

    def span(rows, width):
        if not rows:
            return -1
        return rank(np.asarray(rows, dtype=np.int64).reshape(-1, width), p) - 1

    return {
        "pairs": span([pr.coords for pr in report.pairs], red.t0),
        "pairs_ambient": red.t0 - 1,
        "sigma": span(report.sigma, red.s),
        "sigma_ambient": red.s - 1,
        "j": span(report.j_set, red.width),
        "j_ambient": red.n,
    }


def segre_ok(red: ReducedBundle, pair: JumpingPair) -> bool:
    """sum coords_k W_k has rank exactly one, factors as v h^T and kills every 2x2 minor."""
    p = red.p
    m = red.combine(pair.coords)
    if not np.array_equal(m, pair.matrix(p)):
        return False
    if rank(m, p) != 1:
        return False
    minors = np.einsum("ij,kl->ikjl", m, m) - np.einsum("il,kj->ikjl", m, m)
    return not (minors % p).any()


def fixed_projection_ok(report: JumpingLocusReport):
    """If all pairs share one h or one v, the max tangent dim must be < the bound.

    Returns None when the locus is empty or neither projection is constant.
    """
    if not report.pairs:
        return None
    if len(report.j_set) == 1 or len(report.sigma) == 1:
        return report.max_tangent_dim <= report.bound - 1
    return None


def same_locus(a: list, b: list) -> bool:
    return [x.key() for x in a] == [x.key() for x in b]


def normalized(vec, p: int) -> tuple:
    return _tup(normalize(vec, p))
