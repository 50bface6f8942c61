"""Steiner bundles on P^n presented by the linear map phi: T* -> Hom(U, S*).

Coordinates: ``phi[k]`` is the ``s x (n+1)`` matrix of phi(e_k*), rows indexed
by a basis of S*, columns by a basis u_0..u_n of U = H^0(O(1))*.  A point of
P^n is a nonzero u in U up to scaling; a hyperplane is a nonzero h in U*.
Flattening a matrix is row-major, entry (i, j) going to slot i*(n+1) + j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import NotSteinerError, SamplerExhausted, ValidationError
from .exactalg import (
    FieldCtx,
    Subspace,
    batch_rank,
    kernel,
    projective_point_blocks,
    rref,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_REJECTIONS = 1000


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SteinerPresentation:
    ctx: FieldCtx
    n: int
    s: int
    t: int
    phi: np.ndarray  # shape (t, s, n+1)

    def __post_init__(self):
        n, s, t = self.n, self.s, self.t
        if n < 1 or s < 1:
            raise ValidationError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
        if t < s + n:
            raise ValidationError(f"Steiner bundles need t >= s + n, got (s,t,n)=({s},{t},{n})")
        phi = np.asarray(self.phi, dtype=np.int64)
        if phi.shape != (t, s, n + 1):
            raise ValidationError(f"phi has shape {phi.shape}, expected {(t, s, n + 1)}")
        if (phi < 0).any() or (phi >= self.ctx.p).any():
            raise ValidationError(f"phi entries must lie in [0, {self.ctx.p})")
        object.__setattr__(self, "phi", _freeze(phi))

    @classmethod
    def from_matrices(cls, matrices, ctx: FieldCtx) -> "SteinerPresentation":
        phi = ctx.mat(matrices)
        t, s, m = phi.shape
        return cls(ctx, m - 1, s, t, phi)

    @property
    def p(self) -> int:
        return self.ctx.p

    def flattened(self) -> np.ndarray:
        return self.phi.reshape(self.t, self.s * (self.n + 1))

    def evaluation(self, u) -> np.ndarray:
        """The s x t matrix [M_0 u | ... | M_{t-1} u]."""
        u = np.asarray(u, dtype=np.int64) % self.p
        return (self.phi @ u % self.p).T

    def __eq__(self, other):
        if not isinstance(other, SteinerPresentation):
            return NotImplemented
        return self.ctx == other.ctx and np.array_equal(self.phi, other.phi)

    def __repr__(self):
        return f"SteinerPresentation(p={self.p}, n={self.n}, s={self.s}, t={self.t})"


@dataclass(frozen=True, eq=False)
class ReducedBundle:
    """Basis of the image T_0* of phi, in RREF under flattening."""

    ctx: FieldCtx
    n: int
    s: int
    basis: np.ndarray  # shape (t0, s, n+1)
    kernel_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "basis", _freeze(self.basis))

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def t0(self) -> int:
        return self.basis.shape[0]

    @property
    def width(self) -> int:
        return self.n + 1

    def flattened(self) -> np.ndarray:
        return self.basis.reshape(self.t0, self.s * self.width)

    def pivots(self) -> list[int]:
        """Pivot columns of the flattened echelon basis."""
        flat = self.flattened()
        return [int(np.nonzero(row)[0][0]) for row in flat]

    def coords(self, matrix) -> np.ndarray | None:
        """Coordinates of ``matrix`` in the basis, or None if it is not in the span."""
        x = np.asarray(matrix, dtype=np.int64).reshape(-1) % self.p
        c = x[self.pivots()]
        if not np.array_equal(c @ self.flattened() % self.p, x):
            return None
        return c

    def combine(self, coords) -> np.ndarray:
        c = np.asarray(coords, dtype=np.int64)
        return np.tensordot(c, self.basis, axes=1) % self.p

    def annihilator(self) -> np.ndarray:
        """Rows N with N x = 0 exactly for flattened x in the span, shape (r, s, n+1)."""
        ann = kernel(self.flattened(), self.p).basis
        return ann.reshape(-1, self.s, self.width)

    def as_presentation(self) -> SteinerPresentation:
        return SteinerPresentation(self.ctx, self.n, self.s, self.t0, self.basis)

    def __eq__(self, other):
        if not isinstance(other, ReducedBundle):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.n == other.n
            and self.s == other.s
            and np.array_equal(self.basis, other.basis)
        )

    def __repr__(self):
        return f"ReducedBundle(p={self.p}, n={self.n}, s={self.s}, t0={self.t0}, kernel_dim={self.kernel_dim})"


# -- operations ----------------------------------------------------------------


def steiner_witness(pres: SteinerPresentation):
    """Lexicographically first u in P(U)(F_p) where evaluation drops rank, or None."""
    for block in projective_point_blocks(pres.n + 1, pres.ctx):
        evals = np.einsum("ksj,bj->bsk", pres.phi, block) % pres.p
        bad = np.nonzero(batch_rank(evals, pres.p) < pres.s)[0]
        if bad.size:
            return tuple(int(x) for x in block[bad[0]])
    return None


def is_steiner(pres: SteinerPresentation):
    """Exhaustive Steiner check. Returns ``(ok, witness)``; witness is None when ok."""
    w = steiner_witness(pres)
    return w is None, w


def require_steiner(pres: SteinerPresentation) -> None:
    w = steiner_witness(pres)
    if w is not None:
        raise NotSteinerError(
            f"Steiner condition fails: evaluation at u={list(w)} has rank < s={pres.s}", w
        )


def reduced_summand(pres: SteinerPresentation) -> ReducedBundle:
    require_steiner(pres)
    r, e, _ = rref(pres.flattened(), pres.p)
    basis = e[:r].reshape(r, pres.s, pres.n + 1)
    return ReducedBundle(pres.ctx, pres.n, pres.s, basis, kernel_dim=pres.t - r)


def fiber_dual(pres: SteinerPresentation, u) -> Subspace:
    """{c in T* : sum_k c_k M_k u = 0}; a (t-s)-dimensional subspace for Steiner input."""
    u = np.asarray(u, dtype=np.int64) % pres.p
    if u.shape != (pres.n + 1,):
        raise ValidationError(f"u must have length {pres.n + 1}")
    if not u.any():
        raise ValidationError("fiber_dual needs a nonzero point u")
    return kernel(pres.evaluation(u), pres.p)


def sample_steiner(s, t, n, ctx: FieldCtx, seed: int, max_rejections: int = DEFAULT_MAX_REJECTIONS):
    """Rejection-sample uniform matrix tuples until one is Steiner.

    Returns ``(presentation, rejections)``.
    """
    if s < 1 or n < 1:
        raise ValidationError(f"need s >= 1 and n >= 1, got s={s}, n={n}")
    if t < s + n:
        raise ValidationError(f"Steiner bundles need t >= s + n, got (s,t,n)=({s},{t},{n})")
    rng = np.random.default_rng(seed)
    for rejections in range(max_rejections + 1):
        phi = rng.integers(0, ctx.p, size=(t, s, n + 1), dtype=np.int64)
        pres = SteinerPresentation(ctx, n, s, t, phi)
        if steiner_witness(pres) is None:
            return pres, rejections
    raise SamplerExhausted(
        f"no Steiner presentation for (s,t,n)=({s},{t},{n}) over F_{ctx.p} after {max_rejections} rejections"
    )


def random_steiner(s, t, n, ctx: FieldCtx, seed: int, max_rejections: int = DEFAULT_MAX_REJECTIONS):
    pres, rejections = sample_steiner(s, t, n, ctx, seed, max_rejections)
    log.debug("random_steiner(%d,%d,%d,p=%d,seed=%d): %d rejections", s, t, n, ctx.p, seed, rejections)
    return pres
