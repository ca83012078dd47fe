import pytest

from lambdabox import alpha_eq, parse, parse_context, show, show_type
from lambdabox.s4 import (
    INSTANCE_KINDS,
    ROUND_TRIP_SUITE,
    S4,
    S4_ST_SYM,
    EqTheory,
    NotFoundWithinBudget,
    Proven,
    boxsub,
    ceilx,
    delta,
    dual_eq_bounded,
    dual_infer,
    eps,
    eq_bounded,
    floorx,
    gen_dual_terms,
    round_trip,
    s4_instances,
    st_sym_schemes,
    transport_context,
    unbox,
)
from lambdabox.syntax import Atom, Box, BoxIn, LetBox
from lambdabox.typecheck import BodyUsesOuterVariable, infer

p = Atom("p")


def test_counit_after_comult():
    res = eq_bounded(S4, parse("counit@[]p (comult@p n)"), parse("n"), 4)
    assert isinstance(res, Proven)
    assert alpha_eq(res.trace[0][1], parse("counit@[]p (comult@p n)"))
    assert alpha_eq(res.trace[-1][1], parse("n"))


def test_naturality_of_counit():
    res = eq_bounded(S4, parse("counit@p (box [x:p] <- [n] in x)"), parse("counit@p n"), 2)
    assert res


def test_symmetry_needs_its_scheme():
    a = parse("box [x:p, y:q] <- [n, l] in c:(p->q->r) x y")
    b = parse("box [y:q, x:p] <- [l, n] in c:(p->q->r) x y")
    assert eq_bounded(S4_ST_SYM, a, b)
    miss = eq_bounded(S4, a, b)
    assert isinstance(miss, NotFoundWithinBudget) and not miss


def test_not_found_is_not_a_disproof():
    miss = eq_bounded(S4, parse("counit@p n"), parse("counit@p m"), 50)
    assert not miss and miss.expanded <= 50


@pytest.mark.parametrize(
    "a, b",
    [
        ("box [x:p, u:q] <- [n, l] in x", "box [x:p] <- [n] in x"),
        ("box [x:p, y:p] <- [n, n] in f:(p->p->q) x y", "box [x:p] <- [n] in f:(p->p->q) x x"),
        ("box [x:p, y:q] <- [n, l] in c:(p->q->r) x y", "box [y:q, x:p] <- [l, n] in c:(p->q->r) x y"),
    ],
)
def test_strongness_and_symmetricity(a, b):
    assert eq_bounded(st_sym_schemes(), parse(a), parse(b))


def test_weakening_needs_st():
    assert not eq_bounded(S4, parse("box [x:p, u:q] <- [n, l] in x"), parse("box [x:p] <- [n] in x"), 200)


def test_unbox_boxsub():
    t = unbox(boxsub([("x", p)], [parse("n")], parse("x")), Box(p))
    assert infer(parse_context("n:[]p"), t) == Box(p)
    assert eq_bounded(S4, t, parse("n"))


def test_boxsub_empty_and_typing():
    assert boxsub([], [], parse("c:p")) == parse("box [] <- [] in c:p")
    t = boxsub([("x", p)], [parse("n")], parse("f x"))
    assert show_type(infer(parse_context("n:[]p, f:[]p->q"), BoxIn(t.binders, t.args, parse("c:q")))) == "[]q"


@pytest.mark.parametrize("kind", INSTANCE_KINDS)
def test_generated_scheme_instances(kind):
    for lhs, rhs in s4_instances(kind, seed=3, count=15):
        assert eq_bounded(S4, lhs, rhs), (show(lhs), show(rhs))


class TestDual:
    def test_ordinary_variable(self):
        assert dual_infer((), parse_context("x:[]p"), parse("x")) == Box(p)

    def test_boxup(self):
        assert dual_infer((("@a", p),), (), parse("boxup @a")) == Box(p)

    def test_boxup_body_drops_gamma(self):
        with pytest.raises(BodyUsesOuterVariable):
            dual_infer((), parse_context("x:p"), parse("boxup x"))

    def test_floorx_of_comult(self):
        t = parse(r"\x:[]p. let box @a:p = x in boxup boxup @a")
        assert show_type(dual_infer((), (), t), spaced=True) == "[]p -> [][]p"
        assert alpha_eq(floorx(parse("comult@p")), t)

    @pytest.mark.parametrize(
        "a, b",
        [
            ("let box @a = boxup n in boxup @a", "boxup n"),
            ("let box @a = n in boxup @a", "n"),
            (r"(\y:[]p. y) (let box @a = n in boxup @a)", r"let box @a = n in (\y:[]p. y) (boxup @a)"),
        ],
    )
    def test_equalities(self, a, b):
        assert dual_eq_bounded(parse(a), parse(b))

    def test_ceilx_boxup(self):
        out = ceilx(parse("boxup @a"), (("@a", p),))
        assert alpha_eq(out, parse("box [a1:[]p] <- [comult@p a] in counit@p a1"))

    def test_floorx_box(self):
        out = floorx(parse(r"box [x:p] <- [n] in \z:q. x"))
        assert isinstance(out, LetBox) and out.bound == parse("n")
        assert alpha_eq(out, parse(r"let box @a:p = n in boxup \z:q. @a"))

    def test_ceilx_typing_transport(self):
        for d, g, t in gen_dual_terms(5, 60):
            ty = dual_infer(d, g, t)
            assert infer(transport_context(d, g), ceilx(t, d, g)) == ty

    @pytest.mark.parametrize("ctx_src, src", ROUND_TRIP_SUITE)
    def test_round_trip(self, ctx_src, src):
        t = parse(src)
        assert infer(parse_context(ctx_src), t) is not None
        assert round_trip(t)


def test_theory_flags():
    assert len(EqTheory(st=True, sym=True).rules()) > len(S4.rules())
    assert eps(p, parse("n")) == parse("counit@p n")
    assert delta(p, parse("n")) == parse("comult@p n")
