"""The acceptance battery: fourteen numbered criteria over generated corpora.

Each criterion returns a ``CriterionResult``; ``run_suite`` runs them in
order. ``SuiteConfig(count=...)`` shrinks the corpora for quick runs; the
default is 500 terms of size at most 25 per calculus, seeds 1 to 500.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import cbn, cbv, comp, cps, s4
from .gen import corpus
from .parsing import parse, parse_context, show
from .reduction import DEFAULT_FUEL, RuleLabel, normalize, steps
from .syntax import Calculus, Let, Term, Var, alpha_eq, show_type, subst_many, fresh, subterm
from .typecheck import infer, subformula_check

L = RuleLabel


@dataclass(frozen=True)
class SuiteConfig:
    count: int = 500
    max_size: int = 25
    bfs_depth: int = 50
    budget: int = s4.DEFAULT_BUDGET
    s4_instances: int = 50


@dataclass
class CriterionResult:
    cid: int
    name: str
    passed: bool
    detail: str
    stats: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.cid:2d} {self.name}: {self.detail}"


@lru_cache(maxsize=None)
def _corpus(calc: Calculus, count: int, max_size: int, restricted: bool):
    return tuple(corpus(calc, count, max_size, restricted))


def cbn_corpus(cfg):
    return _corpus(Calculus.CBN, cfg.count, cfg.max_size, False)


def cbv_corpus(cfg):
    return _corpus(Calculus.CBV, cfg.count, cfg.max_size, True)


def comp_corpus(cfg):
    return _corpus(Calculus.COMP, cfg.count, cfg.max_size, True)


def s4_corpus(cfg):
    return _corpus(Calculus.S4EQ, cfg.count, cfg.max_size, False)


def golden_files() -> dict[str, str]:
    root = resources.files("lambdabox") / "golden"
    return {p.name: p.read_text() for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".lb")}


def split_golden(text: str) -> tuple[str, str]:
    """``(context source, term source)`` of a golden file; the context comes from a ``-- context:`` line."""
    ctx, body = "", []
    for line in text.splitlines():
        if line.startswith("-- context:"):
            ctx = line.split(":", 1)[1].strip()
        elif not line.startswith("--") and line.strip():
            body.append(line)
    return ctx, "\n".join(body)


K_AXIOM = r"\f:[](p->q). \x:[]p. box [f':p->q, x':p] <- [f, x] in f' x'"


def k_axiom(cfg) -> CriterionResult:
    ty = show_type(infer((), parse(K_AXIOM)), spaced=True)
    want = "[](p->q) -> []p -> []q"
    return CriterionResult(1, "K-axiom witness", ty == want, f"inferred {ty}")


def _systems(cfg):
    return (
        ("cbn", cbn_corpus(cfg), cbn.CBN_RULES),
        ("cbv", cbv_corpus(cfg), cbv.CBV_RULES),
        ("comp", comp_corpus(cfg), comp.COMP_RULES),
    )


def subject_reduction(cfg) -> CriterionResult:
    total, bad = 0, []
    for name, terms, rules in _systems(cfg):
        for ctx, t in terms:
            ty = infer(ctx, t)
            for st in steps(t, rules, ctx):
                total += 1
                try:
                    ok = infer(ctx, st.result) == ty
                except Exception:
                    ok = False
                if not ok:
                    bad.append((name, show(t), str(st.label)))
    return CriterionResult(2, "subject reduction", not bad, f"{total} steps, {len(bad)} violations", {"witnesses": bad[:5]})


def strong_normalization(cfg) -> CriterionResult:
    worst, failures = {}, 0
    for name, terms, rules in _systems(cfg):
        worst[name] = 0
        for ctx, t in terms:
            try:
                _, n = normalize(t, rules, ctx, DEFAULT_FUEL)
            except Exception:
                failures += 1
                continue
            worst[name] = max(worst[name], n)
    detail = f"{failures} failures; max steps " + ", ".join(f"{k}={v}" for k, v in worst.items())
    return CriterionResult(3, "strong normalization within fuel", failures == 0, detail, worst)


def confluence(cfg) -> CriterionResult:
    pairs, bad = 0, []
    for name, terms, rules in _systems(cfg):
        for ctx, t in terms:
            nfs = [normalize(st.result, rules, ctx)[0] for st in steps(t, rules, ctx)]
            n = len(nfs)
            pairs += n * (n - 1) // 2
            if any(not alpha_eq(nfs[0], u) for u in nfs[1:]):
                bad.append((name, show(t)))
    schemas = cbn.critical_pair_suite() + comp.critical_pair_suite()
    joined = sum(ok for *_, ok in schemas)
    passed = not bad and joined == len(schemas) == 6
    detail = f"{pairs} reduct pairs, {len(bad)} unjoined; critical pairs {joined}/{len(schemas)} joined"
    return CriterionResult(4, "confluence", passed, detail, {"witnesses": bad[:5]})


def subformula(cfg) -> CriterionResult:
    bad = []
    terms = cbn_corpus(cfg)
    for ctx, t in terms:
        nf = cbn.normalize_cbn(t)[0]
        if not subformula_check(ctx, nf):
            bad.append(show(nf))
    return CriterionResult(5, "subformula property", not bad, f"{len(terms)} normal forms, {len(bad)} violations", {"witnesses": bad[:5]})


def cps_typing(cfg) -> CriterionResult:
    from .syntax import ANSWER, Arrow

    bad = []
    terms = cbv_corpus(cfg)
    for ctx, t in terms:
        want = Arrow(Arrow(cps.cps_type(infer(ctx, t)), ANSWER), ANSWER)
        try:
            ok = infer(cps.cps_context(ctx), cps.cps_term(t, ctx)) == want
        except Exception:
            ok = False
        if not ok:
            bad.append(show(t))
    return CriterionResult(6, "CPS typing", not bad, f"{len(terms)} terms, {len(bad)} violations", {"witnesses": bad[:5]})


def cps_closure(cfg, walk: int = 30) -> CriterionResult:
    checked, bad = 0, []
    for ctx, t in cbv_corpus(cfg):
        raw, nf = cps.cps_term(t, ctx), cps.admin_nf(t, ctx)
        if cps.classify_cps(nf) is None:
            bad.append(show(nf))
        for start in (raw, nf):
            if cps.classify_cps(start) is None:
                continue
            u = start
            for _ in range(walk):
                reducts = list(steps(u, cbn.CBN_RULES))
                if not reducts:
                    break
                for st in reducts:
                    checked += 1
                    if cps.classify_cps(st.result) is None:
                        bad.append(show(st.result))
                u = reducts[0].result
    return CriterionResult(7, "CPS language closure", not bad, f"{checked} reducts, {len(bad)} escaped", {"witnesses": bad[:5]})


def simulation(cfg) -> CriterionResult:
    report = cps.SimulationReport()
    for ctx, t in cbv_corpus(cfg):
        cps.simulation_check(ctx, t, report, max_depth=cfg.bfs_depth)
    rate = report.inconclusive_rate()
    passed = report.ok and rate < 0.01
    detail = (
        f"checks {report.checked}, violations {len(report.violations)}, "
        f"inconclusive {sum(report.inconclusive.values())} ({rate:.2%})"
    )
    wit = [(i, note, show(a)) for i, note, a, _ in report.violations[:5]]
    return CriterionResult(8, "CPS simulation", passed, detail, {"witnesses": wit})


def _walk(t, rules, ctx, rng, n):
    for _ in range(n):
        rs = list(steps(t, rules, ctx))
        if not rs:
            break
        t = rng.choice(rs).result
    return t


def _merge(ca, a, cb, b):
    """Put ``b`` beside ``a``: rename b's free variables that clash with a's context."""
    taken = {x for x, _ in ca} | {x for x, _ in cb}
    ren, ctx = {}, list(ca)
    names_a = {x for x, _ in ca}
    for x, ty in cb:
        if x in names_a:
            y = fresh(x, taken)
            taken.add(y)
            ren[x] = Var(y)
            ctx.append((y, ty))
        else:
            ctx.append((x, ty))
    return tuple(ctx), subst_many(b, ren)


def paired(terms, rules, seed: int):
    """Half the pairs related by random rewriting from a common term, half independent."""
    rng = random.Random(seed)
    n = len(terms)
    out = []
    for ctx, t in terms[: n // 2]:
        out.append((ctx, _walk(t, rules, ctx, rng, rng.randint(0, 3)), _walk(t, rules, ctx, rng, rng.randint(1, 4)), True))
    rest = terms[n // 2 :]
    for i in range(n - n // 2):
        (ca, a), (cb, b) = rest[i], terms[(i * 7 + 3) % n]
        ctx, b2 = _merge(ca, a, cb, b)
        out.append((ctx, a, b2, False))
    return out


def cps_equality(cfg) -> CriterionResult:
    agree, related_eq, total = 0, 0, 0
    bad = []
    for ctx, a, b, related in paired(cbv_corpus(cfg), cbv.CBV_RULES, 2):
        total += 1
        left, right = cps.cps_equality_check(a, b, ctx)
        if left == right:
            agree += 1
        else:
            bad.append((show(a), show(b)))
        related_eq += related and left
    detail = f"{agree}/{total} agree ({related_eq} related pairs equal)"
    return CriterionResult(9, "CPS equality correspondence", agree == total, detail, {"witnesses": bad[:5]})


def modified_cps(cfg) -> CriterionResult:
    sampled, bad = 0, []
    for ctx, t in _corpus(Calculus.CBV, cfg.count, cfg.max_size, False):
        for st in steps(t, cbv.CBV_RULES, ctx):
            sampled += 1
            if not cps.eq_cbn_images(t, st.result, lambda u, ctx=ctx: cps.cpsx(u, ctx)):
                bad.append((show(t), str(st.label)))
    ctx = parse_context(cps.COUNTEREXAMPLE_CONTEXT)
    a, b = (parse(s) for s in cps.COUNTEREXAMPLE)
    images_equal = cps.eq_cbn_images(a, b, lambda u: cps.cpsx(u, ctx))
    v_equal = cbv.eq_cbv(a, b, ctx)
    nonvalue = not cbv.is_value(a.args[0].body)
    passed = not bad and images_equal and not v_equal and nonvalue
    detail = (
        f"{sampled} steps, {len(bad)} unsound; counterexample: images equal={images_equal}, "
        f"v-equal={v_equal}"
    )
    return CriterionResult(10, "modified CPS soundness and incompleteness", passed, detail, {"witnesses": bad[:5]})


def let_encoding_equality(cfg) -> CriterionResult:
    agree, total, bad = 0, 0, []
    for ctx, a, b, _ in paired(comp_corpus(cfg), comp.COMP_RULES, 3):
        total += 1
        left = comp.eq_comp(a, b, ctx)
        right = cbv.eq_cbv(comp.let_encode(a, ctx), comp.let_encode(b, ctx), ctx)
        if left == right:
            agree += 1
        else:
            bad.append((show(a), show(b)))
    return CriterionResult(11, "let encoding preserves equality", agree == total, f"{agree}/{total} agree", {"witnesses": bad[:5]})


def _in_vacuous_let(t: Term, path: tuple) -> bool:
    for i in range(len(path)):
        u = subterm(t, path[:i])
        if isinstance(u, Let) and path[i] == 0 and u.binder not in u.body.fv:
            return True
    return False


def ceil_simulation(cfg) -> CriterionResult:
    checked, bad = 0, []
    for ctx, t in cbn_corpus(cfg):
        for st in steps(t, cbn.CBN_RULES, ctx):
            if st.label in (L.IdBox, L.BetaBox):
                checked += 1
                if cps.ceil_simulates(ctx, t, st.result, cfg.bfs_depth) is not True:
                    bad.append(("cbn", show(t), str(st.label), False))
    lets = 0
    for ctx, t in comp_corpus(cfg):
        for st in steps(t, comp.COMP_RULES, ctx):
            if st.label in (L.IdBox, L.BetaBoxV):
                checked += 1
                if cps.ceil_simulates(ctx, t, st.result, cfg.bfs_depth) is not True:
                    bad.append(("comp", show(t), str(st.label), _in_vacuous_let(t, st.position)))
            elif comp.is_let_intro_at_box(st):
                checked += 1
                lets += 1
                if not alpha_eq(cps.ceil(t), cps.ceil(st.result)):
                    bad.append(("comp", show(t), "let-at-box", False))
    vacuous = sum(1 for *_, v in bad if v)
    detail = (
        f"{checked} steps ({lets} let-at-box), {len(bad)} violations, "
        f"{vacuous} of them inside the bound term of a let whose variable is unused"
    )
    return CriterionResult(12, "box-free translation simulation", not bad, detail, {"witnesses": bad[:5]})


def s4_suite(cfg) -> CriterionResult:
    counts = {}
    failed = []
    for kind in s4.INSTANCE_KINDS:
        inst = s4.s4_instances(kind, seed=7, count=cfg.s4_instances)
        ok = 0
        for lhs, rhs in inst:
            if s4.eq_bounded(s4.S4, lhs, rhs, cfg.budget):
                ok += 1
            else:
                failed.append((kind, show(lhs), show(rhs)))
        counts[kind] = f"{ok}/{len(inst)}"
    ok = 0
    for _, src in s4.ROUND_TRIP_SUITE:
        if s4.round_trip(parse(src), budget=cfg.budget):
            ok += 1
        else:
            failed.append(("round-trip", src, ""))
    counts["round-trip"] = f"{ok}/{len(s4.ROUND_TRIP_SUITE)}"
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    return CriterionResult(13, "S4 equalities", not failed, detail, {"witnesses": failed[:5]})


def parser_round_trip(cfg) -> CriterionResult:
    golden = golden_files()
    bad = []
    for name, text in golden.items():
        _, src = split_golden(text)
        if show(parse(src, cps=True)) != src.strip():
            bad.append(name)
    generated = 0
    for terms in (cbn_corpus(cfg), cbv_corpus(cfg), comp_corpus(cfg), s4_corpus(cfg)):
        for _, t in terms:
            generated += 1
            text = show(t)
            if parse(text) != t or show(parse(text)) != text:
                bad.append(text)
    for _, _, t in s4.gen_dual_terms(11, cfg.count):
        generated += 1
        if parse(show(t)) != t:
            bad.append(show(t))
    detail = f"{len(golden)} golden files, {generated} generated terms, {len(bad)} mismatches"
    return CriterionResult(14, "parser round trip", not bad, detail, {"witnesses": bad[:5]})


CRITERIA = (
    k_axiom,
    subject_reduction,
    strong_normalization,
    confluence,
    subformula,
    cps_typing,
    cps_closure,
    simulation,
    cps_equality,
    modified_cps,
    let_encoding_equality,
    ceil_simulation,
    s4_suite,
    parser_round_trip,
)


def run_criterion(cid: int, cfg: SuiteConfig = SuiteConfig()) -> CriterionResult:
    t0 = time.perf_counter()
    res = CRITERIA[cid - 1](cfg)
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(cfg: SuiteConfig = SuiteConfig(), only=None, jobs: int = 1) -> list[CriterionResult]:
    """Run the chosen criteria; with ``jobs > 1`` they run in separate processes."""
    ids = list(only or range(1, len(CRITERIA) + 1))
    if jobs <= 1:
        return [run_criterion(i, cfg) for i in ids]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_criterion, ids, [cfg] * len(ids)))
