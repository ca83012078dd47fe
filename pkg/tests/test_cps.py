from lambdabox import alpha_eq, parse, parse_context, parse_type, show, show_type
from lambdabox.cbn import CBN_RULES
from lambdabox.cbv import CBV_RULES, eq_cbv, is_value
from lambdabox.cps import (
    COUNTEREXAMPLE,
    COUNTEREXAMPLE_CONTEXT,
    BETA_ETA,
    CpsClass,
    SimulationReport,
    admin_nf,
    ceil,
    ceil_context,
    ceil_simulates,
    ceil_type,
    classify_cps,
    continuation_context,
    cps_context,
    cps_term,
    cps_type,
    cps_value,
    cpsx,
    cpsx_context,
    cpsx_type,
    eq_cbn_images,
    icps,
    simulation_check,
    cps_equality_check,
)
from lambdabox.gen import GenConfig, gen_terms
from lambdabox.reduction import RuleLabel as L, normalize, reachable, steps
from lambdabox.syntax import ANSWER, Arrow, BoxIn, strip_admin
from lambdabox.typecheck import infer


def P(src, cps=False):
    return parse(src, cps=cps)


class TestTypes:
    def test_arrow(self):
        assert show_type(cps_type(parse_type("p -> p"))) == "(p->R)->p->R"

    def test_box(self):
        assert cps_type(parse_type("[]p")) == parse_type("[]p")
        assert show_type(cps_type(parse_type("[](p->p)"))) == "[]((p->R)->p->R)"

    def test_modified_box(self):
        assert show_type(cpsx_type(parse_type("[]p"))) == "[]((p->R)->R)"

    def test_ceil_box(self):
        assert show_type(ceil_type(parse_type("[]p"))) == "(p->P0)->P0"


class TestTransform:
    def test_variable(self):
        assert alpha_eq(cps_term(P("x"), parse_context("x:p")), P(r"\k:p->R. k x", cps=True))

    def test_lambda_value(self):
        out = cps_value(P(r"\x:p. x"))
        assert alpha_eq(out, P(r"\k:p->R. \x:p. (\k:p->R. k x) k", cps=True))

    def test_admin_variable(self):
        assert admin_nf(P("x"), parse_context("x:p")) == P("k x", cps=True)

    def test_admin_application_is_continuation_first(self):
        assert admin_nf(P("x y"), parse_context("x:p->q, y:p")) == P("x k y", cps=True)

    def test_admin_agrees_with_full_beta(self):
        ctx = parse_context("x:p->q, y:p")
        tagged = cps_term(P("x y"), ctx)
        from lambdabox.syntax import App, Var

        full = normalize(App(tagged, Var("k")), (CBN_RULES[0],))[0]
        assert alpha_eq(full, admin_nf(P("x y"), ctx))

    def test_no_admin_tags_leak(self):
        t = cps_term(P("f a"), parse_context("f:p->q, a:p"))
        assert strip_admin(t) == t and show(P(show(t), cps=True)) == show(t)

    def test_lift_is_invisible(self):
        ctx = parse_context("y:q->p, z:q, w:q")
        t = P(r"(\x:p. c:(q->r)) (y z) w")
        (lift,) = [s for s in steps(t, CBV_RULES, ctx) if s.label is L.Lift]
        assert alpha_eq(admin_nf(t, ctx), admin_nf(lift.result, ctx))


class TestClassify:
    def test_k_abstraction(self):
        assert classify_cps(P(r"\k:p->R. k", cps=True)) is CpsClass.V

    def test_answer(self):
        assert classify_cps(P("k x", cps=True)) is CpsClass.A

    def test_continuation(self):
        assert classify_cps(P("k", cps=True)) is CpsClass.K
        assert classify_cps(P(r"\x:p. k x", cps=True)) is CpsClass.K

    def test_not_in_language(self):
        assert classify_cps(P("x y z")) is None

    def test_admin_normal_forms_are_answers(self):
        for ctx, t in gen_terms(GenConfig(seed=2, max_size=20), 60):
            assert classify_cps(admin_nf(t, ctx)) is CpsClass.A


class TestInverse:
    def test_identity_continuation(self):
        assert alpha_eq(icps(P(r"\k:p->R. k", cps=True)), P(r"\x:p. x"))

    def test_answer(self):
        assert icps(P("k x", cps=True), parse_context("x:p, k:p->R", cps=True)) == P("x")

    def test_round_trip_by_lift_and_flat(self):
        from lambdabox.cbv import LIFT_FLAT

        for ctx, t in gen_terms(GenConfig(seed=6, max_size=20), 60):
            back = icps(admin_nf(t, ctx), continuation_context(ctx, t))
            assert reachable(t, back, LIFT_FLAT, ctx, min_steps=0) is True


def test_cps_typing_contract():
    for ctx, t in gen_terms(GenConfig(seed=8, max_size=22), 80):
        want = Arrow(Arrow(cps_type(infer(ctx, t)), ANSWER), ANSWER)
        assert infer(cps_context(ctx), cps_term(t, ctx)) == want


def test_cps_language_closed_under_cbn():
    for ctx, t in gen_terms(GenConfig(seed=12, max_size=20), 40):
        u = admin_nf(t, ctx)
        for _ in range(10):
            rs = list(steps(u, CBN_RULES))
            if not rs:
                break
            assert all(classify_cps(s.result) is not None for s in rs)
            u = rs[-1].result


class TestSimulation:
    def test_item2_identity(self):
        # both the id and the beta-v step apply here
        rep = simulation_check((), P(r"(\x:p. x) c:p"))
        assert rep.ok and rep.checked[2] == 2 and rep.inconclusive[2] == 0

    def test_item1_flat(self):
        ctx = parse_context("f:p->q->r, g:q->p, a:q, b:q")
        t = P(r"f ((\x:q. g x) a) b")
        rep = simulation_check(ctx, t)
        assert rep.ok
        assert {s.label for s in steps(t, CBV_RULES, ctx)} & {L.Lift, L.Flat}

    def test_item3_id_box_inside_cps_term(self):
        ctx = parse_context("l:[]p")
        t = P("box [x:p] <- [l] in x")
        nf = admin_nf(t, ctx)
        assert any(s.label is L.IdBox for s in steps(nf, CBN_RULES))
        rep = simulation_check(ctx, t)
        assert rep.ok and rep.checked[3] >= 1

    def test_generated(self):
        rep = SimulationReport()
        for ctx, t in gen_terms(GenConfig(seed=21, max_size=22), 60):
            simulation_check(ctx, t, rep)
        assert rep.ok, rep.violations[:3]
        assert rep.inconclusive_rate() < 0.01


class TestCpsEquality:
    def test_one_step_related(self):
        ctx = parse_context("m:p")
        a = P(r"(\x:p. x) m")
        assert cps_equality_check(a, P("m"), ctx) == (True, True)

    def test_distinct_values(self):
        assert cps_equality_check(P("x"), P("c:p"), parse_context("x:p")) == (False, False)

    def test_generated_steps(self):
        for ctx, t in gen_terms(GenConfig(seed=30, max_size=20), 40):
            for s in steps(t, CBV_RULES, ctx):
                assert cps_equality_check(t, s.result, ctx) == (True, True)


class TestCeil:
    def test_single_box(self):
        assert alpha_eq(ceil(P("box [x:p] <- [n] in x")), P(r"\k:p->P0. n (\x:p. k x)", cps=True))

    def test_box_in_box_chain(self):
        ctx = parse_context("l:[]p")
        t = P("box [x:q] <- [box [y:p] <- [l] in c:(p->q) y] in d:(q->r) x")
        (merge,) = [s for s in steps(t, CBN_RULES, ctx) if s.label is L.BetaBox]
        assert reachable(ceil(t), ceil(merge.result), BETA_ETA, ceil_context(ctx), min_steps=2) is True

    def test_id_box_is_eta(self):
        ctx = parse_context("m:[]p")
        t = P("box [x:p] <- [m] in x")
        eta_only = (BETA_ETA[1],)
        assert reachable(ceil(t), ceil(P("m")), eta_only, ceil_context(ctx)) is True

    def test_typing_preserved(self):
        for ctx, t in gen_terms(GenConfig(seed=40, max_size=20, restricted=False), 60):
            assert infer(ceil_context(ctx), ceil(t)) == ceil_type(infer(ctx, t))

    def test_simulation_cbn(self):
        for ctx, t in gen_terms(GenConfig(seed=41, max_size=20, restricted=False), 60):
            for s in steps(t, CBN_RULES, ctx):
                if s.label in (L.IdBox, L.BetaBox):
                    assert ceil_simulates(ctx, t, s.result) is True


class TestModified:
    def test_typing(self):
        for ctx, t in gen_terms(GenConfig(seed=50, max_size=20, restricted=False), 60):
            want = Arrow(Arrow(cpsx_type(infer(ctx, t)), ANSWER), ANSWER)
            assert infer(cpsx_context(ctx), cpsx(t, ctx)) == want

    def test_soundness_sample(self):
        for ctx, t in gen_terms(GenConfig(seed=51, max_size=20, restricted=False), 40):
            for s in steps(t, CBV_RULES, ctx):
                assert eq_cbn_images(t, s.result, lambda u: cpsx(u, ctx))

    def test_counterexample(self):
        ctx = parse_context(COUNTEREXAMPLE_CONTEXT)
        a, b = (P(s) for s in COUNTEREXAMPLE)
        inner = a.args[0]
        assert isinstance(inner, BoxIn) and not is_value(inner.body)
        assert eq_cbn_images(a, b, lambda u: cpsx(u, ctx))
        assert not eq_cbv(a, b, ctx)

    def test_value_body_merges(self):
        ctx = parse_context("l:[](p->q)")
        a = P(r"box [x:p->q] <- [box [y:p->q] <- [l] in \z:p. y z] in \w:p. x w")
        (merge,) = [s for s in steps(a, CBV_RULES, ctx) if s.label is L.BetaBoxV]
        assert eq_cbv(a, merge.result, ctx)
        assert eq_cbn_images(a, merge.result, lambda u: cpsx(u, ctx))
