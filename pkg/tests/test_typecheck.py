import pytest

from lambdabox import parse, parse_context, show_type
from lambdabox.cbn import cbn_redexes, normalize_cbn
from lambdabox.gen import GenConfig, gen_terms
from lambdabox.reduction import RuleLabel as L, steps
from lambdabox.cbv import CBV_RULES
from lambdabox.syntax import Atom, Box, Calculus
from lambdabox.typecheck import (
    BodyUsesOuterVariable,
    TypeMismatch,
    UnboundVariable,
    check_subject_reduction,
    infer,
    subformula_check,
)

K_SRC = r"\f:[](p->q). \x:[]p. box [f':p->q, x':p] <- [f, x] in f' x'"


def test_k_axiom_type_prints_exactly():
    assert show_type(infer((), parse(K_SRC)), spaced=True) == "[](p->q) -> []p -> []q"


def test_box_rule_image():
    assert infer((), parse("box [] <- [] in c:p")) == Box(Atom("p"))


def test_open_term_is_unbound():
    with pytest.raises(UnboundVariable) as e:
        infer((), parse("box [x:p] <- [y] in x"))
    assert "y" in str(e.value)


def test_body_cannot_see_outer_context():
    with pytest.raises(BodyUsesOuterVariable):
        infer(parse_context("z:p, y:[]p"), parse("box [x:p] <- [y] in z"))


def test_mismatches():
    with pytest.raises(TypeMismatch):
        infer(parse_context("f:p->q"), parse("f c:q"))
    with pytest.raises(TypeMismatch):
        infer(parse_context("y:p"), parse("box [x:p] <- [y] in x"))


def test_arity_checked_at_construction():
    from lambdabox.syntax import BoxIn, Var

    with pytest.raises(ValueError):
        BoxIn((("x", Atom("p")),), (Var("y"), Var("y")), Var("x"))


def test_subject_reduction_identity_redex():
    t = parse(r"(\x:p. x) c:p")
    (st,) = cbn_redexes(t)
    assert st.label is L.BetaArrow
    assert check_subject_reduction((), t, st)
    assert infer((), st.result) == Atom("p")


def test_subject_reduction_k_instance():
    # K witness at q := p applied to a boxed identity
    t = parse(f"({K_SRC.replace('q', 'p')}) (box [] <- [] in \\z:p. z)")
    ty = infer((), t)
    assert show_type(ty) == "[]p->[]p"
    for st in steps(t, CBV_RULES):
        assert infer((), st.result) == ty


def test_subject_reduction_beta_box():
    t = parse("box [x:p] <- [box [] <- [] in c:p] in x")
    results = {str(s.label): s.result for s in cbn_redexes(t)}
    assert any(r == parse("box [] <- [] in c:p") for r in results.values())
    for st in cbn_redexes(t):
        assert check_subject_reduction((), t, st)


def test_subformula_examples():
    assert subformula_check((), parse(K_SRC))
    assert subformula_check((), parse(r"\x:p.x"))


def test_subformula_on_generated_normal_forms():
    for ctx, t in gen_terms(GenConfig(seed=5, max_size=20, calculus=Calculus.CBN, restricted=False), 80):
        assert subformula_check(ctx, normalize_cbn(t)[0])
