"""Continuation-passing translations.

``cps_term`` maps restricted call-by-value terms into the call-by-name
calculus; ``admin_nf`` contracts the redexes the translation itself
introduced; ``icps`` maps the resulting CPS language back. ``cpsx`` is the
variant defined on unrestricted terms, and ``ceil`` is the box-free
continuation-monad translation used as a normalization oracle.
"""

from __future__ import annotations

from enum import Enum

from .cbn import CBN_RULES, beta, eta
from .cbv import CBV_RULES, LIFT_FLAT, is_value
from .reduction import DEFAULT_FUEL, RuleLabel, normalize, reachable, steps
from .syntax import (
    ANSWER,
    App,
    Arrow,
    Atom,
    Box,
    BoxIn,
    Const,
    Hole,
    HOLE,
    Lam,
    Let,
    Term,
    Type,
    Var,
    all_names,
    alpha_eq,
    children,
    fresh,
    is_cont_name,
    strip_admin,
    substitute,
    with_children,
)
from .typecheck import infer

MONAD_ANSWER = Atom("P0")


class NotAValue(ValueError):
    pass


class NotInLanguage(ValueError):
    pass


class CpsClass(Enum):
    V = "V"
    K = "K"
    A = "A"


def cps_type(t: Type) -> Type:
    match t:
        case Arrow(a, b):
            return Arrow(Arrow(cps_type(b), ANSWER), Arrow(cps_type(a), ANSWER))
        case Box(a):
            return Box(cps_type(a))
    return t


def cps_context(ctx) -> tuple:
    return tuple((x, cps_type(ty)) for x, ty in ctx)


def _cont(ty: Type) -> Type:
    return Arrow(cps_type(ty), ANSWER)


class _Cps:
    def __init__(self, avoid, tag: bool):
        self.avoid = set(avoid)
        self.tag = tag

    def fresh(self, base):
        n = fresh(base, self.avoid)
        self.avoid.add(n)
        return n

    def term(self, t: Term, ctx) -> Term:
        ty = infer(ctx, t)
        k = Var("k")
        match t:
            case Var() | Const() | Lam():
                body = App(k, self.value(t, ctx))
            case App(m, n):
                y = self.fresh("y")
                cont = Lam(y, cps_type(infer(ctx, m)), App(self.term(n, ctx), App(Var(y), k)), self.tag)
                body = App(self.term(m, ctx), cont)
            case BoxIn(bs, args, v):
                ys = [self.fresh("y") for _ in args]
                inner = BoxIn(bs, tuple(map(Var, ys)), v)
                body = App(k, self.value(inner, ctx))
                for y, (_, s), a in reversed(list(zip(ys, bs, args))):
                    body = App(self.term(a, ctx), Lam(y, Box(cps_type(s)), body, self.tag))
            case _:
                raise TypeError(f"cannot translate {t!r}")
        return Lam("k", _cont(ty), body, self.tag)

    def value(self, t: Term, ctx) -> Term:
        match t:
            case Var():
                return t
            case Const(c, ann):
                return Const(c, cps_type(ann))
            case Lam(x, ann, m):
                inner = (*ctx, (x, ann))
                kty = _cont(infer(inner, m))
                return Lam("k", kty, Lam(x, cps_type(ann), App(self.term(m, inner), Var("k"))))
            case BoxIn(bs, args, v) if is_value(t):
                return BoxIn(
                    tuple((x, cps_type(s)) for x, s in bs),
                    tuple(self.value(a, ctx) for a in args),
                    self.value(v, bs),
                )
        raise NotAValue(f"not a value: {t!r}")


def _avoid(t, ctx):
    return all_names(t) | {x for x, _ in ctx}


def cps_term(t: Term, ctx=(), *, tag: bool = False) -> Term:
    return _Cps(_avoid(t, ctx), tag).term(t, ctx)


def cps_value(v: Term, ctx=()) -> Term:
    return _Cps(_avoid(v, ctx), False).value(v, ctx)


def admin_beta(t, ctx=()):
    """Contract a redex whose operator the translation introduced or binds a continuation."""
    match t:
        case App(Lam(x, _, body, admin), n) if admin or is_cont_name(x):
            yield RuleLabel.BetaArrow, substitute(body, x, n)


def admin_nf(t: Term, ctx=(), k: str = "k") -> Term:
    """Administrative normal form of the translation of ``t`` applied to the continuation ``k``."""
    applied = App(cps_term(t, ctx, tag=True), Var(k))
    return strip_admin(normalize(applied, (admin_beta,))[0])


def classify_cps(t: Term) -> CpsClass | None:
    """Stratum of ``t`` in the CPS language, or None when ``t`` is outside it."""
    match t:
        case Const():
            return CpsClass.V
        case Var(x):
            return CpsClass.K if is_cont_name(x) else CpsClass.V
        case Lam(x, _, body):
            c = classify_cps(body)
            if is_cont_name(x):
                return CpsClass.V if c is CpsClass.K else None
            return CpsClass.K if c is CpsClass.A else None
        case BoxIn(_, args, body):
            ok = all(classify_cps(a) is CpsClass.V for a in args) and classify_cps(body) is CpsClass.V
            return CpsClass.V if ok else None
        case App(f, a):
            cf, ca = classify_cps(f), classify_cps(a)
            if ca is CpsClass.V and cf is CpsClass.K:
                return CpsClass.A
            if ca is CpsClass.K:
                if cf is CpsClass.V:
                    return CpsClass.K
                if isinstance(f, Lam) and is_cont_name(f.binder) and classify_cps(f.body) is CpsClass.A:
                    return CpsClass.A
    return None


def inverse_type(t: Type) -> Type:
    match t:
        case Arrow(Arrow(b, r1), Arrow(a, r2)) if r1 == ANSWER == r2:
            return Arrow(inverse_type(a), inverse_type(b))
        case Box(a):
            return Box(inverse_type(a))
        case Atom() if t != ANSWER:
            return t
    raise NotInLanguage(f"not a translated type: {t!r}")


def plug(c: Term, t: Term) -> Term:
    """Fill the hole of the context ``c`` with ``t`` (holes never sit under binders)."""
    if isinstance(c, Hole):
        return t
    kids = children(c)
    if not kids:
        return c
    return with_children(c, tuple(plug(k, t) for k in kids))


def icps(t: Term, ctx=()) -> Term:
    """Map a CPS-language term back to call-by-value.

    ``ctx`` types the free variables (continuations included) on the CPS side.
    K-stratum terms become one-hole contexts.
    """
    match t:
        case Const(c, ann):
            return Const(c, inverse_type(ann))
        case Var(x) if is_cont_name(x):
            return HOLE
        case Var():
            return t
        case Lam(k, kty, body) if is_cont_name(k):
            inner = (*ctx, (k, kty))
            match body:
                case Var(k2) if k2 == k:
                    x = fresh("x", set())
                    return Lam(x, inverse_type(kty.dom), Var(x))
                case Lam(x, ann, a) if not is_cont_name(x):
                    return Lam(x, inverse_type(ann), icps(a, (*inner, (x, ann))))
                case App():
                    arg_ty = infer(inner, body).dom
                    x = fresh("x", body.fv)
                    return Lam(x, inverse_type(arg_ty), icps(App(body, Var(x)), (*inner, (x, arg_ty))))
        case Lam(x, ann, a):
            return App(Lam(x, inverse_type(ann), icps(a, (*ctx, (x, ann)))), HOLE)
        case BoxIn(bs, args, v):
            return BoxIn(
                tuple((x, inverse_type(s)) for x, s in bs),
                tuple(icps(a, ctx) for a in args),
                icps(v, bs),
            )
        case App(Lam(k, _, h), kk) if is_cont_name(k) and classify_cps(kk) is CpsClass.K:
            return icps(substitute(h, k, kk), ctx)
        case App(f, kk) if classify_cps(kk) is CpsClass.K and isinstance(f, (Var, Const)):
            return plug(icps(kk, ctx), App(icps(f, ctx), HOLE))
        case App(kk, v) if classify_cps(v) is CpsClass.V:
            return plug(icps(kk, ctx), icps(v, ctx))
    raise NotInLanguage(f"outside the CPS language: {t!r}")


# -- the variant on unrestricted terms -------------------------------------


def cpsx_type(t: Type) -> Type:
    match t:
        case Arrow(a, b):
            return Arrow(Arrow(cpsx_type(b), ANSWER), Arrow(cpsx_type(a), ANSWER))
        case Box(a):
            return Box(Arrow(Arrow(cpsx_type(a), ANSWER), ANSWER))
    return t


class _Cpsx(_Cps):
    def term(self, t: Term, ctx) -> Term:
        ty = infer(ctx, t)
        k = Var("k")
        kty = Arrow(cpsx_type(ty), ANSWER)
        match t:
            case Var():
                return Lam("k", kty, App(k, t))
            case Const(c, ann):
                return Lam("k", kty, App(k, Const(c, cpsx_type(ann))))
            case Lam(x, ann, m):
                inner = (*ctx, (x, ann))
                mk = Arrow(cpsx_type(infer(inner, m)), ANSWER)
                psi = Lam("k", mk, Lam(x, cpsx_type(ann), App(self.term(m, inner), Var("k"))))
                return Lam("k", kty, App(k, psi))
            case App(m, n):
                y = self.fresh("y")
                cont = Lam(y, cpsx_type(infer(ctx, m)), App(self.term(n, ctx), App(Var(y), k)))
                return Lam("k", kty, App(self.term(m, ctx), cont))
            case BoxIn(bs, args, m):
                ys = [self.fresh("y") for _ in args]
                zs = [self.fresh("z") for _ in args]
                hty = Arrow(cpsx_type(infer(bs, m)), ANSWER)
                inner = App(self.term(m, bs), Var("h"))
                for z, (x, s) in reversed(list(zip(zs, bs))):
                    inner = App(Var(z), Lam(x, cpsx_type(s), inner))
                zbs = tuple((z, Arrow(Arrow(cpsx_type(s), ANSWER), ANSWER)) for z, (_, s) in zip(zs, bs))
                body = App(k, BoxIn(zbs, tuple(map(Var, ys)), Lam("h", hty, inner)))
                for y, (_, b_ty), a in reversed(list(zip(ys, zbs, args))):
                    body = App(self.term(a, ctx), Lam(y, Box(b_ty), body))
                return Lam("k", kty, body)
        raise TypeError(f"cannot translate {t!r}")


def cpsx(t: Term, ctx=()) -> Term:
    return _Cpsx(_avoid(t, ctx), False).term(t, ctx)


def cpsx_context(ctx) -> tuple:
    return tuple((x, cpsx_type(ty)) for x, ty in ctx)


# -- continuation-monad translation ------------------------------------------


def ceil_type(t: Type) -> Type:
    match t:
        case Arrow(a, b):
            return Arrow(ceil_type(a), ceil_type(b))
        case Box(a):
            return Arrow(Arrow(ceil_type(a), MONAD_ANSWER), MONAD_ANSWER)
    return t


def ceil_context(ctx) -> tuple:
    return tuple((x, ceil_type(ty)) for x, ty in ctx)


def ceil(t: Term) -> Term:
    """Box-free image: a box becomes a continuation consumer over its arguments."""
    match t:
        case Var():
            return t
        case Const(c, ann):
            return Const(c, ceil_type(ann))
        case Lam(x, ann, body):
            return Lam(x, ceil_type(ann), ceil(body))
        case App(f, a):
            return App(ceil(f), ceil(a))
        case Let(x, n, body):
            return substitute(ceil(body), x, ceil(n))
        case BoxIn(bs, args, body):
            kty = Arrow(ceil_type(infer(bs, body)), MONAD_ANSWER)
            later = [frozenset().union(*(a.fv for a in args[i + 1 :])) for i in range(len(args))]
            names, used = [], set()
            for (x, _), fv in zip(bs, later):
                x2 = fresh(x, fv | used | {"k"}) if x in fv or x in used else x
                used.add(x2)
                names.append(x2)
            out = App(Var("k"), ceil(body))
            if names != list(t.names):
                from .syntax import subst_many

                out = App(Var("k"), subst_many(ceil(body), {x: Var(y) for x, y in zip(t.names, names) if x != y}))
            for y, (_, s), a in reversed(list(zip(names, bs, args))):
                out = App(ceil(a), Lam(y, ceil_type(s), out))
            return Lam("k", kty, out)
    raise TypeError(f"cannot translate {t!r}")


BETA_ETA = (beta, eta)


def ceil_simulates(ctx, m: Term, n: Term, max_depth: int = 50):
    """Is the image of ``n`` reachable from the image of ``m`` in one or more beta/eta steps?"""
    return reachable(ceil(m), ceil(n), BETA_ETA, ceil_context(ctx), max_depth=max_depth)


# -- simulation harness -----------------------------------------------------

ITEM1_LABELS = {RuleLabel.Lift, RuleLabel.Flat}
ITEM2_LABELS = {
    RuleLabel.IdArrow,
    RuleLabel.BetaArrowV,
    RuleLabel.EtaArrowV,
    RuleLabel.BetaOmega,
    RuleLabel.IdBox,
    RuleLabel.BetaBoxV,
}


def continuation_context(ctx, t: Term, k: str = "k") -> tuple:
    return (*cps_context(ctx), (k, _cont(infer(ctx, t))))


class SimulationReport:
    def __init__(self):
        self.checked = {1: 0, 2: 0, 3: 0, 4: 0}
        self.inconclusive = {1: 0, 2: 0, 3: 0, 4: 0}
        self.violations: list[tuple[int, str, Term, Term | None]] = []

    def record(self, item, verdict, witness, other=None, note=""):
        self.checked[item] += 1
        if verdict is None:
            self.inconclusive[item] += 1
        elif not verdict:
            self.violations.append((item, note, witness, other))

    @property
    def ok(self) -> bool:
        return not self.violations

    def inconclusive_rate(self) -> float:
        total = sum(self.checked.values())
        return sum(self.inconclusive.values()) / total if total else 0.0


def simulation_check(ctx, t: Term, report: SimulationReport | None = None, max_depth: int = 50) -> SimulationReport:
    """Check all four simulation items on ``t`` and each of its call-by-value steps."""
    report = report or SimulationReport()
    nf = admin_nf(t, ctx)
    kctx = continuation_context(ctx, t)
    for st in steps(t, CBV_RULES, ctx):
        if st.label in ITEM1_LABELS:
            report.record(1, alpha_eq(nf, admin_nf(st.result, ctx)), t, st.result, str(st.label))
        elif st.label in ITEM2_LABELS:
            found = reachable(nf, admin_nf(st.result, ctx), CBN_RULES, kctx, max_depth=max_depth)
            report.record(2, found, t, st.result, str(st.label))
    back = icps(nf, kctx)
    for st in steps(nf, CBN_RULES, kctx):
        if classify_cps(st.result) is None:
            report.record(3, False, nf, st.result, "left the CPS language")
            continue
        found = reachable(back, icps(st.result, kctx), CBV_RULES, ctx, max_depth=max_depth, min_steps=0)
        report.record(3, found, nf, st.result, str(st.label))
    report.record(4, reachable(t, back, LIFT_FLAT, ctx, max_depth=max_depth, min_steps=0), t, back)
    return report


def cps_equality_check(a: Term, b: Term, ctx=(), fuel: int | None = DEFAULT_FUEL) -> tuple[bool, bool]:
    """``(a =v b, [a] =n [b])``; the two must agree."""
    from .cbv import eq_cbv

    left = eq_cbv(a, b, ctx, fuel)
    ca, cb = cps_term(a, ctx), cps_term(b, ctx)
    right = alpha_eq(normalize(ca, CBN_RULES, fuel=fuel)[0], normalize(cb, CBN_RULES, fuel=fuel)[0])
    return left, right


def eq_cbn_images(a: Term, b: Term, translate, fuel: int | None = DEFAULT_FUEL) -> bool:
    return alpha_eq(normalize(translate(a), CBN_RULES, fuel=fuel)[0], normalize(translate(b), CBN_RULES, fuel=fuel)[0])


# The incompleteness witness for ``cpsx``: merging a box into a box whose
# body is not a value is sound under the translation but not a v-equality.
COUNTEREXAMPLE_CONTEXT = "l:[](p->q)"
COUNTEREXAMPLE = (
    "box [x:q] <- [box [y:p->q] <- [l] in y c:p] in d:(q->q) x",
    r"box [y:p->q] <- [l] in (\x:q. d:(q->q) x) (y c:p)",
)
