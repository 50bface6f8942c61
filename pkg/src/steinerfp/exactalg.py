"""Dense linear algebra over prime fields F_p.

Matrices are plain ``numpy.int64`` arrays with entries reduced into
``[0, p)``.  Since ``p < 2**31`` every product of two reduced entries fits
in 63 bits, so one multiply followed by ``% p`` never overflows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ValidationError

DEFAULT_BUDGET = 10**7
MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldCtx:
    """An odd prime field F_p together with the projective enumeration budget."""

    p: int
    budget: int = field(default=DEFAULT_BUDGET, compare=False)

    def __post_init__(self):
        p = self.p
        if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
            raise ValidationError(f"field modulus must be an integer, got {p!r}")
        if p < 3 or p >= MAX_PRIME:
            raise ValidationError(f"field modulus must be an odd prime in [3, 2^31), got {p}")
        if not is_prime(int(p)):
            raise ValidationError(f"field modulus {p} is not prime")
        if self.budget < 1:
            raise ValidationError("enumeration budget must be positive")

    def mat(self, rows) -> np.ndarray:
        """Coerce nested lists (or an array) to a reduced int64 array."""
        return np.asarray(rows, dtype=np.int64) % self.p

    def inv(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return pow(x, -1, self.p)

    def count_points(self, dim: int) -> int:
        """Number of points of the projective space of lines in F_p^dim."""
        return (self.p**dim - 1) // (self.p - 1)

    def check_budget(self, dim: int, what: str = "projective points") -> int:
        n = self.count_points(dim)
        if n > self.budget:
            raise BudgetExceeded(
                f"{what}: {n} points of P^{dim - 1}(F_{self.p}) exceed budget {self.budget}"
            )
        return n


# -- elimination ---------------------------------------------------------------


def rref(m, p: int):
    """Reduced row echelon form over F_p.

    Returns ``(rank, echelon, pivot_cols)``; ``echelon`` has the same shape as
    ``m`` with the zero rows at the bottom.
    """
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValidationError(f"rref expects a 2-d matrix, got shape {a.shape}")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return r, a, pivots


def rank(m, p: int) -> int:
    a = np.asarray(m)
    if a.size == 0:
        return 0
    return rref(a, p)[0]


def _inv_vec(x: np.ndarray, p: int) -> np.ndarray:
    # Fermat inverse by square-and-multiply, elementwise.
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def batch_rank(stack, p: int) -> np.ndarray:
    """Ranks of a stack of matrices, shape ``(B, m, k)`` -> ``(B,)``."""
    a = np.array(stack, dtype=np.int64) % p
    if a.ndim != 3:
        raise ValidationError(f"batch_rank expects a 3-d stack, got shape {a.shape}")
    nb, m, k = a.shape
    ranks = np.zeros(nb, dtype=np.int64)
    if nb == 0 or m == 0 or k == 0:
        return ranks
    row_ids = np.arange(m)
    for c in range(k):
        cand = (a[:, :, c] != 0) & (row_ids[None, :] >= ranks[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        r = ranks[b]
        piv = np.argmax(cand[b], axis=1)
        top = a[b, r].copy()
        a[b, r] = a[b, piv]
        a[b, piv] = top
        prow = a[b, r] * _inv_vec(a[b, r, c], p)[:, None] % p
        a[b, r] = prow
        factors = a[b, :, c].copy()
        factors[np.arange(b.size), r] = 0
        a[b] = (a[b] - factors[:, :, None] * prow[:, None, :]) % p
        ranks[b] += 1
    return ranks


# -- subspaces -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of F_p^ambient_dim stored by its RREF basis."""

    p: int
    ambient_dim: int
    basis: np.ndarray

    @classmethod
    def span(cls, vectors, p: int, ambient_dim: int | None = None) -> "Subspace":
        a = np.asarray(vectors, dtype=np.int64)
        if ambient_dim is None:
            if a.ndim != 2:
                raise ValidationError("ambient dimension needed for an empty span")
            ambient_dim = a.shape[1]
        a = a.reshape(-1, ambient_dim)
        if a.shape[0] == 0:
            basis = np.zeros((0, ambient_dim), dtype=np.int64)
        else:
            r, e, _ = rref(a, p)
            basis = e[:r]
        basis.setflags(write=False)
        return cls(p, ambient_dim, basis)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls.span(np.zeros((0, ambient_dim), dtype=np.int64), p, ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, vec) -> bool:
        v = np.asarray(vec, dtype=np.int64).reshape(1, self.ambient_dim) % self.p
        if not v.any():
            return True
        if self.dim == 0:
            return False
        return rank(np.vstack([self.basis, v]), self.p) == self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, dim={self.dim}/{self.ambient_dim}, basis={self.basis.tolist()})"

    def points(self, ctx: FieldCtx):
        """Normalized vectors of the projective points of this subspace."""
        if self.dim == 0:
            return []
        coeffs = projective_points_array(self.dim, ctx)
        pts = coeffs @ self.basis % self.p
        return sorted(tuple(int(x) for x in normalize(v, self.p)) for v in pts)


def kernel(m, p: int) -> Subspace:
    """Null space {x : m x = 0} as a Subspace of F_p^cols."""
    a = np.asarray(m, dtype=np.int64)
    rows, cols = a.shape
    r, e, pivots = rref(a, p) if rows else (0, a, [])
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(pivots):
            basis[i, pc] = (-e[row, f]) % p
    return Subspace.span(basis, p, cols)


def solve(m, b, p: int):
    """One solution x of ``m x = b`` or ``None`` when the system is inconsistent."""
    a = np.asarray(m, dtype=np.int64)
    rows, cols = a.shape
    aug = np.hstack([a, np.asarray(b, dtype=np.int64).reshape(rows, 1)])
    r, e, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for row, pc in enumerate(pivots):
        x[pc] = e[row, cols]
    return x


def annihilator(sub: Subspace) -> np.ndarray:
    """Rows spanning the linear functionals that vanish on ``sub``."""
    if sub.dim == 0:
        return np.eye(sub.ambient_dim, dtype=np.int64)
    return kernel(sub.basis, sub.p).basis


# -- projective points ---------------------------------------------------------


def normalize(vec, p: int) -> np.ndarray:
    """Scale so the first nonzero coordinate is 1."""
    v = np.asarray(vec, dtype=np.int64) % p
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        raise ValidationError("cannot normalize the zero vector")
    return v * pow(int(v[nz[0]]), -1, p) % p


def projective_points(dim: int, ctx: FieldCtx):
    """Yield normalized representatives of P(F_p^dim) in lexicographic order."""
    if dim < 1:
        raise ValidationError(f"projective point dimension must be >= 1, got {dim}")
    ctx.check_budget(dim)
    p = ctx.p
    for lead in range(dim - 1, -1, -1):
        head = (0,) * lead + (1,)
        for tail in itertools.product(range(p), repeat=dim - 1 - lead):
            yield head + tail


def projective_point_blocks(dim: int, ctx: FieldCtx, chunk: int = 1 << 16):
    """Same points as :func:`projective_points`, as arrays of at most ``chunk`` rows."""
    if dim < 1:
        raise ValidationError(f"projective point dimension must be >= 1, got {dim}")
    ctx.check_budget(dim)
    p = ctx.p
    for lead in range(dim - 1, -1, -1):
        width = dim - 1 - lead
        total = p**width
        for start in range(0, total, chunk):
            idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
            block = np.zeros((idx.size, dim), dtype=np.int64)
            block[:, lead] = 1
            for j in range(width):
                # most significant digit first gives lexicographic order
                block[:, dim - 1 - j] = (idx // p**j) % p
            yield block


def projective_points_array(dim: int, ctx: FieldCtx) -> np.ndarray:
    blocks = list(projective_point_blocks(dim, ctx))
    return np.vstack(blocks)
