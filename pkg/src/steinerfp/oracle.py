"""Brute-force verifiers kept apart from the fast paths.

``brute_rank_one_scan`` walks every point of P(T_0) and tests the 2x2 minors
directly; it shares nothing with the per-hyperplane solver in ``jumping``
beyond the projective point iterator.
"""

from __future__ import annotations

import numpy as np

from .bundle import ReducedBundle
from .errors import SamplerExhausted, ValidationError
from .exactalg import FieldCtx, batch_rank, projective_point_blocks, rank
from .jumping import JumpingPair, tecnico_bound, tecnico_dim

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master: int, trial: int) -> int:
    """Per-trial seed: splitmix64 of the master seed advanced ``trial + 1`` golden-ratio steps."""
    return splitmix64((master + trial * 0x9E3779B97F4A7C15) & MASK64)


def _rank_le_one(mats: np.ndarray, p: int) -> np.ndarray:
    # all 2x2 minors m[i,j] m[k,l] - m[i,l] m[k,j] vanish
    a = np.einsum("bij,bkl->bikjl", mats, mats)
    b = np.einsum("bil,bkj->bikjl", mats, mats)
    return ~((a - b) % p).reshape(mats.shape[0], -1).any(axis=1)


def _first_nonzero_normalized(rows: np.ndarray, p: int) -> np.ndarray:
    piv = np.argmax(rows != 0, axis=1)
    lead = rows[np.arange(rows.shape[0]), piv]
    inv = np.array([pow(int(x), -1, p) for x in lead], dtype=np.int64)
    return rows * inv[:, None] % p


def brute_rank_one_scan(red: ReducedBundle) -> list:
    """All rank-one points of P(W), factored as v h^T and sorted by (h, v)."""
    p = red.p
    flat = red.flattened()
    pivots = red.pivots()
    found = []
    for block in projective_point_blocks(red.t0, red.ctx):
        mats = (block @ flat % p).reshape(-1, red.s, red.width)
        hits = np.nonzero(_rank_le_one(mats, p))[0]
        if hits.size == 0:
            continue
        m = mats[hits]
        # a rank-one matrix: any nonzero row is proportional to h, any nonzero column to v
        rows = m[np.arange(hits.size), np.argmax(m.any(axis=2), axis=1)]
        cols = m.transpose(0, 2, 1)[np.arange(hits.size), np.argmax(m.any(axis=1), axis=1)]
        hs = _first_nonzero_normalized(rows, p)
        vs = _first_nonzero_normalized(cols, p)
        for v, h in zip(vs, hs):
            outer = np.outer(v, h).reshape(-1) % p
            coords = outer[pivots]
            found.append(JumpingPair(tuple(int(x) for x in h), tuple(int(x) for x in v),
                                     tuple(int(x) for x in coords)))
    found.sort()
    return found


# -- the dimension bound for {f in W : f(B) subset A} ---------------------------


def is_transitive(W: np.ndarray, p: int, ctx: FieldCtx) -> bool:
    """For every u in P(U)(F_p) the evaluation f -> f(u) maps W onto V."""
    t, s, r = W.shape
    for block in projective_point_blocks(r, ctx):
        evals = np.einsum("ksj,bj->bsk", W, block) % p
        if (batch_rank(evals, p) < s).any():
            return False
    return True


def _random_independent(rng, k: int, m: int, p: int) -> np.ndarray:
    while True:
        a = rng.integers(0, p, size=(k, m), dtype=np.int64)
        if rank(a, p) == k:
            return a


def sample_transitive(rng, t: int, r: int, s: int, ctx: FieldCtx, max_rejections: int = 1000) -> np.ndarray:
    p = ctx.p
    for _ in range(max_rejections + 1):
        W = rng.integers(0, p, size=(t, s, r), dtype=np.int64)
        if rank(W.reshape(t, -1), p) == t and is_transitive(W, p, ctx):
            return W
    raise SamplerExhausted(f"no transitive {t}-dim W in Hom(F^{r}, F^{s}) after {max_rejections} rejections")


def tecnico_bound_property(trials: int, ctx: FieldCtx, seed: int, r_range=(1, 4), s_range=(1, 4),
                           t_max: int = 10, max_rejections: int = 1000) -> list:
    """Sample (W, B, A) and collect every case where dim{f : f(B) in A} exceeds t-r-s+a+b+1.

    Returns the list of violations (dicts); an empty list is the expected outcome.
    """
    if r_range[0] < 1 or s_range[0] < 1 or r_range[1] < r_range[0] or s_range[1] < s_range[0]:
        raise ValidationError("invalid dimension ranges")
    violations = []
    p = ctx.p
    for trial in range(trials):
        rng = np.random.default_rng(trial_seed(seed, trial))
        r = int(rng.integers(r_range[0], r_range[1] + 1))
        s = int(rng.integers(s_range[0], s_range[1] + 1))
        lo, hi = r + s - 1, min(t_max, r * s)
        if lo > hi:
            continue
        t = int(rng.integers(lo, hi + 1))
        W = sample_transitive(rng, t, r, s, ctx, max_rejections)
        b = int(rng.integers(0, r))  # codim of B, b < r
        a = int(rng.integers(0, s))  # dim of A, a < s; a = 0 means A = 0
        B = _random_independent(rng, r - b, r, p)
        A = _random_independent(rng, a, s, p) if a else np.zeros((0, s), dtype=np.int64)
        got = tecnico_dim(W, B, A, p)
        bound = tecnico_bound(t, r, s, a, b)
        if got > bound:
            violations.append({"trial": trial, "t": t, "r": r, "s": s, "a": a, "b": b,
                               "dim": got, "bound": bound})
    return violations
