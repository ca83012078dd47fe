import pytest

from lambdabox import alpha_eq, parse, parse_context
from lambdabox.cbv import eq_cbv, is_value
from lambdabox.comp import (
    comp_redexes,
    critical_pair_suite,
    eq_comp,
    floor,
    is_let_intro_at_box,
    let_encode,
    normalize_comp,
)
from lambdabox.gen import GenConfig, gen_terms
from lambdabox.reduction import RuleLabel as L
from lambdabox.syntax import Calculus, Let, children
from lambdabox.typecheck import infer


def test_id_let_and_beta_let_overlap():
    steps = comp_redexes(parse("let x = c:p in x"))
    assert {s.label for s in steps} == {L.IdLet, L.BetaLetV}
    assert all(s.result == parse("c:p") for s in steps)


def test_let_introduction():
    ctx = parse_context("y:q->p->r, z:q, m:p")
    t = parse("y z m")
    hits = [s for s in comp_redexes(t, ctx) if s.label is L.LetIntro]
    assert any(alpha_eq(s.result, parse("let x = y z in x m")) for s in hits)
    assert normalize_comp(t, ctx)[0] == parse("let x = y z in x m")


def test_comp_reassociates():
    ctx = parse_context("f:p->q, a:p, g:q->r")
    t = parse("let x = (let y = f a in g y) in c:(r->s) x")
    (s,) = [s for s in comp_redexes(t, ctx) if s.label is L.Comp]
    assert alpha_eq(s.result, parse("let y = f a in let x = g y in c:(r->s) x"))


def test_let_value():
    v = parse(r"\z:p. z")
    assert normalize_comp(Let("x", v, parse("x")))[0] == v


def test_let_encode():
    assert let_encode(parse("let x = c:p in x")) == parse(r"(\x:p. x) c:p")
    nested = let_encode(parse("let x = c:p in let y = d:(p->q) x in y"))
    assert nested == parse(r"(\x:p. (\y:q. y) (d:(p->q) x)) c:p")


def test_floor_value_argument():
    assert floor(parse("box [x:p] <- [v] in x")) == parse("v")
    assert floor(parse(r"box [x:p->p] <- [\z:[]p. c:p] in x")) == parse(r"\z:p. c:p")


def test_floor_nonvalue_argument():
    out = floor(parse("box [x:p] <- [y z] in x"))
    assert isinstance(out, Let) and out.bound == parse("y z")
    assert alpha_eq(out, parse("let w = y z in w"))


def test_floor_output_is_box_free():
    from lambdabox.syntax import BoxIn

    def box_free(t):
        return not isinstance(t, BoxIn) and all(box_free(c) for c in children(t))

    for ctx, t in gen_terms(GenConfig(seed=9, max_size=20, calculus=Calculus.COMP), 50):
        assert box_free(floor(t))


@pytest.mark.parametrize("i", range(2))
def test_critical_pairs_join(i):
    t, s1, s2, joined = critical_pair_suite()[i]
    assert L.LetIntro in (s1.label, s2.label)
    assert joined


def test_let_intro_at_box_detected():
    ctx = parse_context("f:p->[]q, a:p")
    t = parse("box [x:q] <- [f a] in x")
    assert any(is_let_intro_at_box(s) for s in comp_redexes(t, ctx))


def test_subject_reduction_and_let_encoding():
    for ctx, t in gen_terms(GenConfig(seed=4, max_size=20, calculus=Calculus.COMP), 60):
        ty = infer(ctx, t)
        enc = let_encode(t, ctx)
        assert infer(ctx, enc) == ty
        for s in comp_redexes(t, ctx):
            assert infer(ctx, s.result) == ty
            assert eq_comp(t, s.result, ctx)
            assert eq_cbv(enc, let_encode(s.result, ctx), ctx)


def test_values_not_let_bound():
    ctx = parse_context("f:p->q, a:p")
    assert all(not is_value(s.redex) for s in comp_redexes(parse("f a"), ctx) if s.label is L.LetIntro)


def _inside_unused_let(t, path):
    from lambdabox.syntax import subterm

    return any(
        isinstance(u := subterm(t, path[:i]), Let) and path[i] == 0 and u.binder not in u.body.fv
        for i in range(len(path))
    )


def test_ceil_simulates_box_steps_outside_erased_bindings():
    from lambdabox.cps import ceil, ceil_simulates

    for ctx, t in gen_terms(GenConfig(seed=13, max_size=25, calculus=Calculus.COMP), 150):
        for s in comp_redexes(t, ctx):
            if s.label in (L.IdBox, L.BetaBoxV) and not _inside_unused_let(t, s.position):
                assert ceil_simulates(ctx, t, s.result) is True
            elif is_let_intro_at_box(s):
                assert alpha_eq(ceil(t), ceil(s.result))


def test_steps_under_an_unused_let_are_erased_by_ceil():
    from lambdabox.cps import ceil

    ctx = parse_context("l:[]p")
    t = parse(r"let x = box [y:p] <- [box [] <- [] in c:p] in d:q in e:r")
    (s,) = [s for s in comp_redexes(t, ctx) if s.label is L.BetaBoxV]
    assert alpha_eq(ceil(t), ceil(s.result))
