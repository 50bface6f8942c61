"""Schwarzenberger bundles of triplets (X, L, M).

phi is the dual of the multiplication map H^0(L) (x) H^0(M) -> H^0(L (x) M),
so for a multiplication table ``c[k][i][j] = e_k*(mu(l_i (x) sigma_j))`` the
presentation is simply ``phi[k] = c[k]``.  All bases are monomial: x^0..x^d on
P^1 and degree-lex monomials in x_0, x_1, x_2 on P^2.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .bundle import SteinerPresentation
from .errors import InjectivityError, ValidationError
from .exactalg import FieldCtx, batch_rank, projective_point_blocks


@dataclass(frozen=True)
class TripletSpec:
    """A tagged triplet description.

    ``variant`` is one of ``"p1"`` (params ``(dL, dM)``), ``"scroll"``
    (params ``(a_1, ..., a_m)``), ``"veronese"`` (no params), ``"ample"``
    (params ``(a_1, ..., a_m)``, the ample bundle sum O(a_i) on P^1) or
    ``"tensor"`` (params is the coefficient table ``c[k][i][j]``).
    """

    variant: str
    params: tuple
    ctx: FieldCtx

    def dims(self):
        """Induced (s, t, n)."""
        v, a = self.variant, self.params
        if v == "p1":
            dL, dM = a
            return dL + 1, dL + dM + 1, dM
        if v == "scroll":
            return 2, sum(x + 1 for x in a), sum(a) - 1
        if v == "veronese":
            return 3, 6, 2
        if v == "ample":
            return sum(a), sum(x + 1 for x in a), 1
        c = np.asarray(a)
        return c.shape[1], c.shape[0], c.shape[2] - 1

    def build(self) -> SteinerPresentation:
        v, a = self.variant, self.params
        if v == "p1":
            return schwarz_p1(a[0], a[1], self.ctx)
        if v == "scroll":
            return schwarz_scroll(a, self.ctx)
        if v == "veronese":
            return schwarz_veronese(self.ctx)
        if v == "ample":
            return schwarz_from_tensor(ample_p1_table(a), self.ctx)
        return schwarz_from_tensor(a, self.ctx)


def _int_list(value, name):
    if not isinstance(value, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in value):
        raise ValidationError(f"triplet field {name!r} must be a list of integers, got {value!r}")
    return tuple(value)


def parse_triplet(text: str, budget: int | None = None) -> TripletSpec:
    """Parse ``{"p":5,"triplet":{"p1":[2,2]}}`` or the flat ``{"p":5,"p1":[2,2]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"triplet: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "p" not in doc:
        raise ValidationError("triplet: expected an object with an integer field 'p'")
    ctx = FieldCtx(doc["p"]) if budget is None else FieldCtx(doc["p"], budget)
    body = doc.get("triplet", doc)
    if not isinstance(body, dict):
        raise ValidationError("triplet: field 'triplet' must be an object")
    keys = [k for k in ("p1", "scroll", "veronese", "ample", "tensor") if k in body]
    if len(keys) != 1:
        raise ValidationError(
            "triplet: exactly one of 'p1', 'scroll', 'veronese', 'ample', 'tensor' is required"
        )
    key = keys[0]
    value = body[key]
    if key == "p1":
        params = _int_list(value, "p1")
        if len(params) != 2:
            raise ValidationError("triplet field 'p1' must be [dL, dM]")
        return TripletSpec("p1", params, ctx)
    if key in ("scroll", "ample"):
        return TripletSpec(key, _int_list(value, key), ctx)
    if key == "veronese":
        if value is not True:
            raise ValidationError("triplet field 'veronese' must be true")
        return TripletSpec("veronese", (), ctx)
    table = value.get("c") if isinstance(value, dict) else value
    c = _check_table(table)
    if isinstance(value, dict):
        t, s, m = c.shape
        for name, expect in (("t", t), ("s", s), ("m", m)):
            if name in value and value[name] != expect:
                raise ValidationError(f"tensor field {name!r}={value[name]} does not match table size {expect}")
    return TripletSpec("tensor", c.tolist(), ctx)


def _check_table(c) -> np.ndarray:
    try:
        arr = np.asarray(c, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"tensor table is not a rectangular integer array: {exc}") from exc
    if arr.ndim != 3 or 0 in arr.shape:
        raise ValidationError(f"tensor table must be a nonempty t x s x m array, got shape {arr.shape}")
    return arr


# -- constructors ----------------------------------------------------------------


def _check_degrees(**kw):
    for name, (value, lo) in kw.items():
        if not isinstance(value, (int, np.integer)) or value < lo:
            raise ValidationError(f"{name} must be an integer >= {lo}, got {value!r}")


def schwarz_p1(dL: int, dM: int, ctx: FieldCtx) -> SteinerPresentation:
    """Triplet (P^1, O(dL), O(dM)): Hankel slices (M_k)_{ij} = [i + j == k]."""
    _check_degrees(dL=(dL, 0), dM=(dM, 1))
    s, n = dL + 1, dM
    t = s + n
    i = np.arange(s)[:, None]
    j = np.arange(n + 1)[None, :]
    phi = np.stack([(i + j == k).astype(np.int64) for k in range(t)])
    return SteinerPresentation(ctx, n, s, t, phi)


def scroll_table(a_list) -> np.ndarray:
    """Multiplication table for (P^1, O(1), E(-1)) with E = sum O(a_i)."""
    a_list = list(a_list)
    if not a_list:
        raise ValidationError("scroll needs at least one a_i")
    for a in a_list:
        _check_degrees(a_i=(a, 1))
    m = sum(a_list)
    t = sum(a + 1 for a in a_list)
    c = np.zeros((t, 2, m), dtype=np.int64)
    u_off = t_off = 0
    for a in a_list:
        # block: x^i (i in {0,1}) times x^j (j < a) lands on x^(i+j) of O(a)
        for i in range(2):
            for j in range(a):
                c[t_off + i + j, i, u_off + j] = 1
        u_off += a
        t_off += a + 1
    return c


def schwarz_scroll(a_list, ctx: FieldCtx) -> SteinerPresentation:
    """Rational normal scroll S(a_1..a_m) with L = O(f), M = O(h - f); s = 2."""
    return SteinerPresentation.from_matrices(scroll_table(a_list), ctx)


def veronese_table() -> np.ndarray:
    monomials = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    c = np.zeros((6, 3, 3), dtype=np.int64)
    for k, (a, b) in enumerate(monomials):
        c[k, a, b] = c[k, b, a] = 1
    return c


def schwarz_veronese(ctx: FieldCtx) -> SteinerPresentation:
    """Triplet (P^2, O(1), O(1)); the six matrices span the symmetric 3x3 matrices."""
    return SteinerPresentation.from_matrices(veronese_table(), ctx)


def ample_p1_table(a_list) -> np.ndarray:
    """Triplet (P^1, F(-1), O(1)) for F = sum O(a_i), a_i >= 1: an (s, t)-bundle on P^1."""
    a_list = list(a_list)
    if not a_list:
        raise ValidationError("ample bundle needs at least one a_i")
    for a in a_list:
        _check_degrees(a_i=(a, 1))
    s = sum(a_list)
    t = sum(a + 1 for a in a_list)
    c = np.zeros((t, s, 2), dtype=np.int64)
    s_off = t_off = 0
    for a in a_list:
        for i in range(a):
            for j in range(2):
                c[t_off + i + j, s_off + i, j] = 1
        s_off += a
        t_off += a + 1
    return c


def injectivity_witness(table, ctx: FieldCtx):
    """First sigma in P(H^0(M))(F_p) for which l -> mu(l (x) sigma) is not injective."""
    c = np.asarray(table, dtype=np.int64) % ctx.p
    t, s, m = c.shape
    for block in projective_point_blocks(m, ctx):
        images = np.einsum("kij,bj->bik", c, block) % ctx.p
        bad = np.nonzero(batch_rank(images, ctx.p) < s)[0]
        if bad.size:
            return tuple(int(x) for x in block[bad[0]])
    return None


def schwarz_from_tensor(table, ctx: FieldCtx) -> SteinerPresentation:
    """Presentation of a raw multiplication table ``c[k][i][j]`` (t x s x m, m = n + 1)."""
    c = _check_table(table)
    t, s, m = c.shape
    if m < 2:
        raise ValidationError(f"H^0(M) must have dimension >= 2, got {m}")
    if t < s + m - 1:
        raise ValidationError(f"tensor too small: t={t} < s + n = {s + m - 1}")
    c = c % ctx.p
    w = injectivity_witness(c, ctx)
    if w is not None:
        raise InjectivityError(f"multiplication by sigma={list(w)} is not injective on H^0(L)", w)
    return SteinerPresentation(ctx, m - 1, s, t, c)


def all_families(p_values=(3, 5, 7), max_t0: int = 8):
    """Yield ``(label, params, presentation)`` over the constructor families with t <= max_t0."""
    for p in p_values:
        ctx = FieldCtx(p)
        for dL, dM in itertools.product(range(1, max_t0), range(1, max_t0)):
            if dL + dM + 1 <= max_t0:
                yield "p1", (dL, dM), schwarz_p1(dL, dM, ctx)
        yield "veronese", (), schwarz_veronese(ctx)
        for m in range(2, max_t0 // 2 + 1):
            for a in itertools.combinations_with_replacement(range(1, max_t0), m):
                a = tuple(sorted(a, reverse=True))
                if sum(x + 1 for x in a) <= max_t0:
                    yield "scroll", a, schwarz_scroll(a, ctx)
                    yield "ample", a, schwarz_from_tensor(ample_p1_table(a), ctx)
