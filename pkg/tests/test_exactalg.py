import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinerfp.errors import BudgetExceeded, ValidationError
from steinerfp.exactalg import (
    FieldCtx,
    Subspace,
    annihilator,
    batch_rank,
    kernel,
    normalize,
    projective_points,
    projective_points_array,
    rank,
    rref,
    solve,
)

PRIMES = [3, 5, 7, 11]


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    p = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    flat = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return p, np.array(flat, dtype=np.int64).reshape(r, c)


def test_field_ctx_rejects_bad_moduli():
    for bad in (2, 4, 9, 1, 0, -5):
        with pytest.raises(ValidationError):
            FieldCtx(bad)
    assert FieldCtx(2**31 - 1).p == 2**31 - 1


def test_rref_identity():
    r, e, piv = rref(np.eye(2, dtype=np.int64), 5)
    assert r == 2 and piv == [0, 1]
    assert np.array_equal(e, np.eye(2))


def test_rref_zero():
    r, e, piv = rref(np.zeros((3, 4), dtype=np.int64), 5)
    assert r == 0 and piv == [] and not e.any()


def test_rref_proportional_rows():
    r, e, _ = rref([[1, 2], [2, 4]], 5)
    assert r == 1
    assert e.tolist() == [[1, 2], [0, 0]]


def test_rref_scales_pivot():
    r, e, _ = rref([[3, 1]], 7)
    assert r == 1 and e.tolist() == [[1, 5]]


def test_kernel_examples():
    assert kernel(np.eye(3, dtype=np.int64), 5).dim == 0
    assert kernel(np.zeros((2, 3), dtype=np.int64), 5).dim == 3
    k = kernel([[1, 1, 0]], 3)
    assert k.dim == 2
    assert k.contains([1, 2, 0]) and k.contains([0, 0, 1])
    assert not k.contains([1, 0, 0])


def test_solve_and_annihilator():
    m = np.array([[1, 2], [3, 4]])
    x = solve(m, [1, 0], 7)
    assert np.array_equal(m @ x % 7, [1, 0])
    assert solve([[1, 1], [2, 2]], [0, 1], 5) is None
    sub = Subspace.span([[1, 0, 0], [0, 1, 0]], 5)
    ann = annihilator(sub)
    assert ann.shape == (1, 3) and not (sub.basis @ ann.T % 5).any()


def test_subspace_equality_is_basis_independent():
    a = Subspace.span([[1, 2, 3], [0, 1, 1]], 7)
    b = Subspace.span([[1, 3, 4], [2, 5, 7], [0, 0, 0]], 7)
    assert a == b and hash(a) == hash(b)


def test_projective_points_examples():
    ctx = FieldCtx(3)
    assert list(projective_points(2, ctx)) == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert list(projective_points(1, FieldCtx(7))) == [(1,)]
    assert len(list(projective_points(3, FieldCtx(5)))) == 31


def test_projective_points_budget():
    with pytest.raises(BudgetExceeded):
        list(projective_points(3, FieldCtx(5, budget=30)))
    with pytest.raises(ValidationError):
        list(projective_points(0, FieldCtx(5)))


@pytest.mark.parametrize("p", PRIMES)
def test_projective_points_exhaustive(p):
    ctx = FieldCtx(p)
    for dim in range(1, 7):
        pts = projective_points_array(dim, ctx)
        assert pts.shape == ((p**dim - 1) // (p - 1), dim)
        lead = pts[np.arange(len(pts)), np.argmax(pts != 0, axis=1)]
        assert (lead == 1).all()
        # normalized and distinct means pairwise non-proportional
        assert len({tuple(r) for r in pts.tolist()}) == len(pts)
        assert [tuple(r) for r in pts.tolist()] == sorted(tuple(r) for r in pts.tolist())
    assert list(projective_points(3, ctx)) == [tuple(r) for r in projective_points_array(3, ctx).tolist()]


def test_normalize():
    assert normalize([0, 3, 1], 5).tolist() == [0, 1, 2]
    with pytest.raises(ValidationError):
        normalize([0, 0], 5)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_idempotent(pm):
    p, m = pm
    r, e, piv = rref(m, p)
    r2, e2, piv2 = rref(e, p)
    assert (r, piv) == (r2, piv2)
    assert np.array_equal(e, e2)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_transpose_and_nullity(pm):
    p, m = pm
    r = rank(m, p)
    assert r == rank(m.T, p)
    k = kernel(m, p)
    assert k.dim + r == m.shape[1]
    assert not (m @ k.basis.T % p).any()


@settings(max_examples=100, deadline=None)
@given(matrices(max_rows=4, max_cols=4), st.integers(1, 5))
def test_batch_rank_matches_rank(pm, copies):
    p, m = pm
    stack = np.stack([np.roll(m, i, axis=0) * (i + 1) % p for i in range(copies)])
    assert batch_rank(stack, p).tolist() == [rank(x, p) for x in stack]
