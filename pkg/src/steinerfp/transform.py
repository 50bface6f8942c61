"""Reduction F -> F' at a jumping pair and the classification driver.

Quotienting S* by the line <v> of a jumping pair sends every W_k to Q W_k;
the span of those is T_0'* for an (s-1)-bundle on the same P^n, and the
kernel of W -> T_0'* is {v (x) h' in W}, of dimension b(v).  Repeating at the
first pair in canonical order brings a maximal locus down to s = 2, where the
pair set must be a rational normal scroll over P^1.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .bundle import ReducedBundle, steiner_witness
from .errors import InvariantViolation, ValidationError
from .exactalg import FieldCtx, Subspace, kernel, rank, rref
from .jumping import (
    JumpingLocusReport,
    JumpingPair,
    _pairs,
    build_report,
    enumerate_jumping_pairs,
    fiber_over_v,
    hyperplane_profile,
    normalized,
    point_profile,
    tangent_space,
)

CASES = ("P1LineBundles", "AmpleOnP1", "Scroll", "Veronese", "NotMaximal", "Empty")


@dataclass(frozen=True, eq=False)
class TransformStep:
    input: ReducedBundle
    pair: JumpingPair
    quotient_map: np.ndarray  # (s-1) x s, kills v
    output: ReducedBundle
    b_v: int

    @property
    def fiber_dim_alpha(self) -> int:
        """Projective dimension of the fiber of the pair set over alpha = [v]."""
        return self.b_v - 1

    def summary(self) -> dict:
        return {
            "s": self.input.s,
            "t0": self.input.t0,
            "v": list(self.pair.v),
            "h": list(self.pair.h),
            "b_v": self.b_v,
            "t0_out": self.output.t0,
        }


def quotient_map(v, p: int) -> np.ndarray:
    """Rows e_i - v_i e_pivot for i != pivot, where v[pivot] = 1 is the first nonzero entry."""
    v = normalized(v, p)
    s = len(v)
    piv = next(i for i, x in enumerate(v) if x)
    rows = []
    for i in range(s):
        if i == piv:
            continue
        row = np.zeros(s, dtype=np.int64)
        row[i] = 1
        row[piv] = (-v[i]) % p
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(s - 1, s)


def transform_at(red: ReducedBundle, pair: JumpingPair) -> TransformStep:
    p = red.p
    if red.s < 2:
        raise ValidationError("transform needs s >= 2")
    if red.coords(pair.matrix(p)) is None:
        raise ValidationError(f"pair v={list(pair.v)}, h={list(pair.h)} is not in W")
    Q = quotient_map(pair.v, p)
    images = np.einsum("ai,kij->kaj", Q, red.basis) % p
    r, e, _ = rref(images.reshape(red.t0, -1), p)
    out = ReducedBundle(red.ctx, red.n, red.s - 1, e[:r].reshape(r, red.s - 1, red.width))
    b_v = fiber_over_v(red, pair.v).dim
    if out.t0 != red.t0 - b_v:
        raise InvariantViolation(f"t0' = {out.t0} but t0 - b(v) = {red.t0 - b_v}")
    # the kernel of W -> T_0'* is exactly the rank-one part v (x) U* inside W
    ker = kernel(images.reshape(red.t0, -1).T, p)
    if ker.dim != b_v or any(rank(red.combine(c), p) > 1 for c in ker.basis):
        raise InvariantViolation("kernel of the quotient on W is not {v (x) h' in W}")
    if out.t0 < out.s + out.n or steiner_witness(out.as_presentation()) is not None:
        raise InvariantViolation("transformed bundle fails the Steiner condition")
    if out.s == 1 and out.t0 != red.width:
        raise InvariantViolation(f"s' = 1 output should be all of Hom(U, F), got t0' = {out.t0}")
    Q.setflags(write=False)
    return TransformStep(red, pair, Q, out, b_v)


def _report_any_s(red: ReducedBundle) -> JumpingLocusReport:
    return build_report(red, _pairs(red), check_bound=red.s >= 2)


def projected(Q: np.ndarray, v, p: int) -> tuple:
    return normalized(Q @ np.asarray(v, dtype=np.int64) % p, p)


def sigma_limits(red: ReducedBundle, v, Q: np.ndarray, pairs) -> set:
    """Points of P(S') reached as limits of the projection from [v]: Q f u0 for tangent f."""
    p = red.p
    out = set()
    for pr in pairs:
        if pr.v != tuple(v):
            continue
        u0 = np.zeros(red.width, dtype=np.int64)
        u0[next(i for i, x in enumerate(pr.h) if x)] = 1
        tan = tangent_space(red, pr)
        images = np.stack([Q @ red.combine(c) @ u0 % p for c in tan.basis]) if tan.dim else np.zeros((0, Q.shape[0]))
        sub = Subspace.span(images, p, Q.shape[0])
        out.update(sub.points(red.ctx))
    return out


@dataclass
class LawReport:
    inclusion: bool
    projection: bool
    dims: bool
    maximal: bool
    model: str | None
    j_equal: bool | None = None
    sigma_equal: bool | None = None
    max_dim_drop: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(x is not False for x in (self.inclusion, self.projection, self.dims,
                                             self.j_equal, self.sigma_equal, self.max_dim_drop))


def verify_transform_laws(red: ReducedBundle, pair: JumpingPair, report: JumpingLocusReport | None = None) -> LawReport:
    p = red.p
    rep = report if report is not None else enumerate_jumping_pairs(red)
    step = transform_at(red, pair)
    Q = step.quotient_map
    rep2 = _report_any_s(step.output)
    keys2 = {x.key() for x in rep2.pairs}

    over_alpha = set(fiber_over_v(red, pair.v).points(red.ctx))
    inclusion = set(rep.j_set) <= set(rep2.j_set) | over_alpha

    projection = True
    notes = []
    for pr in rep.pairs:
        if pr.v == pair.v:
            continue
        w = Q @ np.asarray(pr.v, dtype=np.int64) % p
        image = np.einsum("k,kij->ij", np.asarray(pr.coords), Q @ red.basis) % p
        target = (normalized(w, p), pr.h)
        if not np.array_equal(image, np.outer(w, pr.h) % p) or target[::-1] not in keys2:
            projection = False
            notes.append(f"projection identity fails at v={list(pr.v)}, h={list(pr.h)}")

    dims = step.output.t0 == red.t0 - step.b_v
    maximal = rep.max_tangent_dim == rep.bound and rep.consistent
    model = match_model(red, rep) if maximal else None
    law = LawReport(inclusion, projection, dims, maximal, model, notes=notes)
    if maximal and model is not None:
        law.j_equal = rep.j_set == rep2.j_set
        image = {projected(Q, pr.v, p) for pr in rep.pairs if pr.v != pair.v}
        image |= sigma_limits(red, pair.v, Q, rep.pairs)
        law.sigma_equal = set(rep2.sigma) == image
        if step.output.s >= 2:
            law.max_dim_drop = rep2.max_tangent_dim == rep.bound - step.fiber_dim_alpha
    return law


# -- classification ----------------------------------------------------------


def _veronese_map(rep: JumpingLocusReport, p: int):
    """The unique (up to scale) g with g h in <v> for every pair, if invertible."""
    rows = []
    for pr in rep.pairs:
        ann = kernel(np.asarray([pr.v], dtype=np.int64), p).basis  # 2 x 3
        # q^T g h = sum_ij q_i h_j g_ij
        rows.extend(np.outer(q, pr.h).reshape(-1) for q in ann)
    sol = kernel(np.asarray(rows, dtype=np.int64) % p, p)
    if sol.dim != 1:
        return None
    g = sol.basis[0].reshape(3, 3)
    return g if rank(g, p) == 3 else None


def match_model(red: ReducedBundle, rep: JumpingLocusReport) -> str | None:
    """First model (Veronese > P1LineBundles > AmpleOnP1 > Scroll) whose signature matches."""
    p, s, t0, n = red.p, red.s, red.t0, red.n
    npairs = len(rep.pairs)
    plane = p * p + p + 1
    if (s, t0, n) == (3, 6, 2) and npairs == len(rep.sigma) == len(rep.j_set) == plane:
        if _veronese_map(rep, p) is not None:
            return "Veronese"
    if t0 == n + s and npairs == p + 1:
        return "P1LineBundles"
    if n == 1 and all(a == t0 - s for a in hyperplane_profile(red).values()):
        return "AmpleOnP1"
    if s == 2 and scroll_signature(red):
        return "Scroll"
    return None


def scroll_signature(red: ReducedBundle) -> bool:
    """s = 2: every point of P(S) carries a fiber of projective dimension t0-n-2."""
    return red.s == 2 and all(b == red.t0 - red.n - 1 for b in point_profile(red).values())


def recovered_params(case: str, red: ReducedBundle) -> dict:
    if case == "P1LineBundles":
        return {"dL": red.s - 1, "dM": red.n}
    if case == "AmpleOnP1":
        return {"degree": red.s, "rank": red.t0 - red.s}
    if case == "Scroll":
        return {"dimension": red.t0 - red.n - 1, "degree": red.n + 1}
    return {}


@dataclass
class ClassificationReport:
    case: str
    invariants_observed: dict
    iteration_trace: list
    recovered_params: dict
    notes: list = field(default_factory=list)


def _observed(red: ReducedBundle, rep: JumpingLocusReport) -> dict:
    pts = point_profile(red)
    return {
        "p": red.p,
        "s": red.s,
        "t0": red.t0,
        "n": red.n,
        "pairs": len(rep.pairs),
        "max_tangent_dim": rep.max_tangent_dim,
        "bound": rep.bound,
        "consistent": rep.consistent,
        "sigma_fibers": dict(sorted(Counter(pts[v] for v in rep.sigma).items())),
        "j_fibers": dict(sorted(Counter(rep.profile[h] for h in rep.j_set).items())),
    }


def classify_max(red: ReducedBundle) -> ClassificationReport:
    if red.s < 2:
        raise ValidationError("classification needs s >= 2")
    rep = enumerate_jumping_pairs(red)
    obs = _observed(red, rep)
    if rep.empty:
        return ClassificationReport("Empty", obs, [], {}, ["no F_p-rational jumping pairs"])
    if rep.max_tangent_dim < rep.bound:
        return ClassificationReport(
            "NotMaximal", obs, [], {},
            [f"max tangent dim {rep.max_tangent_dim} < bound {rep.bound}"],
        )

    trace, notes = [], []
    cur, cur_rep = red, rep
    while cur.s > 2:
        step = transform_at(cur, cur_rep.pairs[0])
        nxt = enumerate_jumping_pairs(step.output)
        expected = cur_rep.bound - step.fiber_dim_alpha
        entry = step.summary()
        entry["max_tangent_dim_out"] = nxt.max_tangent_dim
        entry["expected_max_tangent_dim_out"] = expected
        trace.append(entry)
        if step.output.t0 != cur.t0 - step.b_v or step.b_v < 1:
            raise InvariantViolation("inconsistent trace: t0 did not drop by b(v) >= 1")
        if nxt.max_tangent_dim != expected:
            notes.append(f"after step {len(trace)}: max tangent dim {nxt.max_tangent_dim} != {expected}")
            return ClassificationReport("NotMaximal", obs, trace, {}, notes)
        cur, cur_rep = step.output, nxt

    if len(trace) != red.s - 2:
        raise InvariantViolation("iteration did not take exactly s-2 steps")
    if not scroll_signature(cur):
        notes.append("s = 2 endpoint: pi_1 fibers are not all of dimension t0-n-2 over P^1(F_p)")
        return ClassificationReport("NotMaximal", obs, trace, {}, notes)

    case = match_model(red, rep)
    if case is None:
        notes.append("maximal certificate but no irreducible model matched the point counts")
        return ClassificationReport("NotMaximal", obs, trace, {}, notes)
    if case in ("Veronese", "P1LineBundles", "AmpleOnP1") and red.s == 2 and red.n == 1:
        notes.append("n = 1, s = 2 satisfies several models; priority order applied")
    return ClassificationReport(case, obs, trace, recovered_params(case, red), notes)
