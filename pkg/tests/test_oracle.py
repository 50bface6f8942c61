import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinerfp.bundle import ReducedBundle, random_steiner, reduced_summand
from steinerfp.errors import BudgetExceeded, ValidationError
from steinerfp.exactalg import FieldCtx, rank, rref
from steinerfp.jumping import tecnico_bound, tecnico_dim
from steinerfp.oracle import (
    brute_rank_one_scan,
    is_transitive,
    splitmix64,
    tecnico_bound_property,
    trial_seed,
)
from steinerfp.schwarz import schwarz_p1


def test_splitmix_reference_values():
    # reference outputs of the standard splitmix64 generator seeded with 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert trial_seed(0, 0) == splitmix64(0)
    assert len({trial_seed(7, k) for k in range(1000)}) == 1000


def test_scan_hankel_over_f3():
    red = reduced_summand(schwarz_p1(2, 2, FieldCtx(3)))
    assert len(brute_rank_one_scan(red)) == 4


def test_scan_finds_planted_rank_one():
    p = 3
    rng = np.random.default_rng(5)
    mats = [np.outer([1, 2, 0], [0, 1, 1]) % p]
    while len(mats) < 4:
        m = rng.integers(0, p, size=(3, 3))
        if rank(m, p) >= 2:
            mats.append(m)
    r, e, _ = rref(np.stack(mats).reshape(4, -1), p)
    assert r == 4
    red = ReducedBundle(FieldCtx(p), 2, 3, e[:r].reshape(r, 3, 3))
    keys = {pr.key() for pr in brute_rank_one_scan(red)}
    assert ((0, 1, 1), (1, 2, 0)) in keys


def test_scan_generic_bundle_empty():
    red = reduced_summand(random_steiner(3, 8, 4, FieldCtx(5), seed=2))
    assert brute_rank_one_scan(red) == []


def test_scan_respects_budget():
    red = reduced_summand(schwarz_p1(2, 2, FieldCtx(5, budget=100)))
    with pytest.raises(BudgetExceeded):
        brute_rank_one_scan(red)


def test_tecnico_property_seed7():
    assert tecnico_bound_property(100, FieldCtx(5), seed=7) == []


def test_tecnico_property_reproducible():
    a = tecnico_bound_property(10, FieldCtx(3), seed=1, r_range=(2, 3), s_range=(2, 3))
    b = tecnico_bound_property(10, FieldCtx(3), seed=1, r_range=(2, 3), s_range=(2, 3))
    assert a == b == []
    with pytest.raises(ValidationError):
        tecnico_bound_property(1, FieldCtx(3), seed=1, r_range=(0, 2))


def test_tecnico_bound_instance():
    assert tecnico_bound(4, 2, 2, 1, 1) == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_full_space_attains_bound(r, s, seed):
    p = 5
    rng = np.random.default_rng(seed)
    full = np.eye(r * s, dtype=np.int64).reshape(r * s, s, r)
    assert is_transitive(full, p, FieldCtx(p))
    b = int(rng.integers(0, r))
    a = int(rng.integers(0, s))
    while True:
        B = rng.integers(0, p, size=(r - b, r))
        A = rng.integers(0, p, size=(a, s))
        if rank(B, p) == r - b and (a == 0 or rank(A, p) == a):
            break
    got = tecnico_dim(full, B, A, p)
    assert got == a * (r - b) + s * b
    # gap to the bound is (dim B - 1)(s - a - 1): tight when B is a line or A a hyperplane
    assert tecnico_bound(r * s, r, s, a, b) - got == (r - b - 1) * (s - a - 1)
