import pytest
from hypothesis import given, settings, strategies as st

from lambdabox import alpha_eq, parse, parse_context
from lambdabox.cbv import CBV_RULES, cbv_redexes, eq_cbv, is_restricted, is_value, normalize_cbv
from lambdabox.gen import GenConfig, gen_terms
from lambdabox.reduction import RuleLabel as L, steps
from lambdabox.typecheck import infer


def labels(src, ctx=""):
    return {s.label for s in cbv_redexes(parse(src), parse_context(ctx))}


@pytest.mark.parametrize(
    "src, expected",
    [
        (r"\x:p.x", True),
        ("box [x:p] <- [y z] in x", False),
        ("box [x:p] <- [w] in x", True),
        ("y z", False),
        ("c:p", True),
    ],
)
def test_is_value(src, expected):
    assert is_value(parse(src)) is expected


def test_is_restricted():
    assert is_restricted(parse(r"box [x:p->p] <- [m] in \y:p. x y"))
    assert not is_restricted(parse("box [x:p->p, y:p] <- [m, n] in x y"))


def test_id_on_nonvalue_argument():
    assert L.IdArrow in labels(r"(\x:p. x) (y z)", "y:q->p, z:q")


def test_beta_v_needs_a_value_but_lift_applies():
    assert L.BetaArrowV not in labels(r"(\x:p. c:q) (y z)", "y:q->p, z:q")
    ls = labels(r"(\x:p. c:(q->r)) (y z) w", "y:q->p, z:q, w:q")
    assert L.Lift in ls and L.BetaArrowV not in ls


def test_beta_omega():
    t = parse(r"(\x:p. (\z:q. z) (y x)) m")
    ctx = parse_context("y:p->q, m:p")
    hits = [s for s in cbv_redexes(t, ctx) if s.label is L.BetaOmega]
    assert hits and hits[0].result == parse(r"(\z:q. z) (y m)")


def test_beta_omega_normal_form():
    ctx = parse_context("m:q->r, y:p->q, z:p")
    nf, _ = normalize_cbv(parse(r"(\x:p. m x) (y z)"), ctx)
    assert nf == parse("m (y z)")


def test_identity_on_constant():
    assert normalize_cbv(parse(r"(\x:p. x) c:p"))[0] == parse("c:p")


def test_nested_box():
    ctx = parse_context("w:[]p")
    assert normalize_cbv(parse("box [x:p] <- [box [y:p] <- [w] in y] in x"), ctx)[0] == parse("w")


def test_box_merge_is_an_equality():
    ctx = parse_context("l:[]p")
    a = parse(r"box [x:p->p] <- [box [y:p] <- [l] in \u:p. y] in \v:p. x v")
    b = parse(r"box [y:p] <- [l] in \v:p. (\u:p. y) v")
    assert eq_cbv(a, b, ctx)
    assert eq_cbv(parse(r"(\x:p.x) m"), parse("m"), parse_context("m:p"))


def test_nonvalue_box_argument_blocks_merge():
    ctx = parse_context("y:p->[]p, z:p")
    t = parse(r"box [x:p] <- [y z] in \u:q. x")
    assert L.BetaBoxV not in {s.label for s in cbv_redexes(t, ctx)}


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000))
def test_restriction_and_types_preserved(seed):
    (ctx, t), = gen_terms(GenConfig(seed=seed, max_size=22), 1)
    assert is_restricted(t)
    ty = infer(ctx, t)
    for s in steps(t, CBV_RULES, ctx):
        assert is_restricted(s.result)
        assert infer(ctx, s.result) == ty


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_confluence_sample(seed):
    (ctx, t), = gen_terms(GenConfig(seed=seed, max_size=22), 1)
    nf = normalize_cbv(t, ctx)[0]
    for s in cbv_redexes(t, ctx):
        assert alpha_eq(normalize_cbv(s.result, ctx)[0], nf)
