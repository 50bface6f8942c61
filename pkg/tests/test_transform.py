import numpy as np
import pytest

from steinerfp.bundle import random_steiner, reduced_summand
from steinerfp.errors import ValidationError
from steinerfp.exactalg import FieldCtx, rank
from steinerfp.jumping import JumpingPair, enumerate_jumping_pairs
from steinerfp.schwarz import all_families, schwarz_p1, schwarz_scroll, schwarz_veronese
from steinerfp.transform import (
    classify_max,
    match_model,
    quotient_map,
    transform_at,
    verify_transform_laws,
)


def red_of(pres):
    return reduced_summand(pres)


def test_quotient_map_kills_v():
    for v in [(1, 2, 3), (0, 1, 4), (0, 0, 1)]:
        Q = quotient_map(v, 5)
        assert Q.shape == (2, 3)
        assert not (Q @ np.array(v) % 5).any()
        assert rank(Q, 5) == 2


def test_hankel_transform_at_lambda_zero(f5):
    red = red_of(schwarz_p1(2, 2, f5))
    pair = next(pr for pr in enumerate_jumping_pairs(red).pairs if pr.h == (1, 0, 0))
    step = transform_at(red, pair)
    assert step.b_v == 1 and step.fiber_dim_alpha == 0
    assert step.output == red_of(schwarz_p1(1, 2, f5))
    assert (step.output.s, step.output.t0) == (2, 4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_rank_one_output_is_full_hom(n, ctx):
    red = red_of(schwarz_p1(1, n, ctx))
    for pair in enumerate_jumping_pairs(red).pairs:
        out = transform_at(red, pair).output
        assert out.s == 1 and out.t0 == n + 1
        assert np.array_equal(out.flattened(), np.eye(n + 1, dtype=np.int64))


def test_transform_rejects_foreign_pair(f5):
    red = red_of(schwarz_p1(2, 2, f5))
    with pytest.raises(ValidationError):
        transform_at(red, JumpingPair((0, 1, 0), (1, 0, 0), ()))


@pytest.mark.parametrize("build", [
    lambda c: schwarz_p1(2, 2, c),
    lambda c: schwarz_scroll((2, 1), c),
    lambda c: schwarz_scroll((1, 1), c),
])
def test_dimension_drop_every_pair(build, ctx):
    red = red_of(build(ctx))
    for pair in enumerate_jumping_pairs(red).pairs:
        step = transform_at(red, pair)
        assert step.output.t0 == red.t0 - step.b_v
        assert step.b_v >= 1 and step.output.s == red.s - 1


def test_laws_hankel_over_f7():
    red = red_of(schwarz_p1(2, 2, FieldCtx(7)))
    rep = enumerate_jumping_pairs(red)
    assert len(rep.pairs) == 8
    for pair in rep.pairs:
        law = verify_transform_laws(red, pair, rep)
        assert law.ok and law.maximal and law.j_equal and law.sigma_equal and law.max_dim_drop
        assert law.model == "P1LineBundles"


def test_laws_scroll_and_veronese(f5):
    red = red_of(schwarz_scroll((2, 1), f5))
    rep = enumerate_jumping_pairs(red)
    assert all(verify_transform_laws(red, pr, rep).inclusion for pr in rep.pairs)
    red = red_of(schwarz_veronese(f5))
    rep = enumerate_jumping_pairs(red)
    for pr in rep.pairs[:8]:
        law = verify_transform_laws(red, pr, rep)
        assert law.inclusion and law.projection and law.ok


def test_laws_on_random_bundle():
    red = red_of(random_steiner(3, 6, 2, FieldCtx(5), seed=4))
    rep = enumerate_jumping_pairs(red)
    for pr in rep.pairs[:5]:
        law = verify_transform_laws(red, pr, rep)
        assert law.inclusion and law.projection and law.dims


def test_classify_examples(ctx):
    rep = classify_max(red_of(schwarz_p1(2, 2, ctx)))
    assert rep.case == "P1LineBundles" and rep.recovered_params == {"dL": 2, "dM": 2}
    rep = classify_max(red_of(schwarz_veronese(ctx)))
    assert rep.case == "Veronese" and len(rep.iteration_trace) == 1
    rep = classify_max(red_of(schwarz_scroll((2, 1), ctx)))
    assert rep.case == "Scroll"
    assert rep.invariants_observed["max_tangent_dim"] == 2
    assert rep.recovered_params == {"dimension": 2, "degree": 3}


def test_classify_trace_length():
    rep = classify_max(red_of(schwarz_p1(3, 2, FieldCtx(5))))
    assert len(rep.iteration_trace) == 2
    t0s = [e["t0"] for e in rep.iteration_trace] + [rep.iteration_trace[-1]["t0_out"]]
    assert t0s == sorted(t0s, reverse=True) and len(set(t0s)) == 3


def test_classify_empty(f5):
    rep = classify_max(red_of(random_steiner(3, 8, 4, f5, seed=2)))
    assert rep.case == "Empty" and rep.invariants_observed["pairs"] == 0


def test_classify_not_maximal(f5):
    rep = classify_max(red_of(random_steiner(3, 6, 2, f5, seed=4)))
    assert rep.case == "NotMaximal"
    assert rep.invariants_observed["max_tangent_dim"] < rep.invariants_observed["bound"]


def test_segre_surface_priority(f5):
    red = red_of(schwarz_scroll((1, 1), f5))
    rep = classify_max(red)
    assert rep.case == "AmpleOnP1"
    assert any("priority" in note for note in rep.notes)
    assert match_model(red, enumerate_jumping_pairs(red)) == "AmpleOnP1"


def test_classification_round_trip_small():
    expected = {"p1": "P1LineBundles", "veronese": "Veronese", "ample": "AmpleOnP1"}
    for label, params, pres in all_families(p_values=(3,), max_t0=6):
        rep = classify_max(red_of(pres))
        want = expected.get(label) or ("Scroll" if pres.n >= 2 else "AmpleOnP1")
        assert rep.case == want, (label, params, rep.case, rep.notes)
        if rep.case not in ("NotMaximal", "Empty"):
            assert rep.invariants_observed["max_tangent_dim"] == rep.invariants_observed["bound"]
