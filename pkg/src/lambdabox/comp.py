"""The computational calculus: call-by-value with ``let``.

Also the two bridges out of it: ``let_encode`` turns every ``let`` into a
beta-redex (back into the plain call-by-value syntax) and ``floor`` erases
boxes entirely, landing in the box-free fragment.
"""

from __future__ import annotations

from .cbn import id_box, instantiate_pairs
from .cbv import beta_v, eta_v, beta_v_box, is_value, simple_contexts
from .reduction import DEFAULT_FUEL, ReductionStep, RuleLabel, normalize, reducts
from .syntax import (
    App,
    Arrow,
    Box,
    BoxIn,
    Const,
    Lam,
    Let,
    Term,
    Type,
    Var,
    alpha_eq,
    fresh,
    rename_binder,
    subst_many,
    substitute,
)
from .typecheck import infer

L = RuleLabel


def id_let(t, ctx=()):
    match t:
        case Let(x, m, Var(y)) if x == y:
            yield L.IdLet, m


def beta_v_let(t, ctx=()):
    match t:
        case Let(x, v, body) if is_value(v):
            yield L.BetaLetV, substitute(body, x, v)


def comp(t, ctx=()):
    match t:
        case Let(x, Let(y, l, n), m):
            y2, n2 = rename_binder(y, n, m.fv)
            yield L.Comp, Let(y2, l, Let(x, n2, m))


def let_intro(t, ctx=()):
    for s, plug, other, _ in simple_contexts(t):
        if not is_value(s):
            x = fresh("x", other)
            yield L.LetIntro, Let(x, s, plug(Var(x)))


COMP_RULES = (id_let, beta_v_let, beta_v, eta_v, comp, let_intro, id_box, beta_v_box)


def is_let_intro_at_box(step: ReductionStep) -> bool:
    return step.label is L.LetIntro and isinstance(step.redex, BoxIn)


def comp_redexes(t: Term, ctx=()) -> list[ReductionStep]:
    return reducts(t, COMP_RULES, ctx)


def normalize_comp(t: Term, ctx=(), fuel: int | None = DEFAULT_FUEL, trace=None) -> tuple[Term, int]:
    return normalize(t, COMP_RULES, ctx, fuel, trace)


def eq_comp(a: Term, b: Term, ctx=(), fuel: int | None = DEFAULT_FUEL) -> bool:
    return alpha_eq(normalize_comp(a, ctx, fuel)[0], normalize_comp(b, ctx, fuel)[0])


def let_encode(t: Term, ctx=()) -> Term:
    """Replace each ``let x = N in M`` by ``(\\x:T. M) N`` with T the inferred type of N."""
    match t:
        case Let(x, n, body):
            ty = infer(ctx, n)
            return App(Lam(x, ty, let_encode(body, (*ctx, (x, ty)))), let_encode(n, ctx))
        case Lam(x, ann, body, admin):
            return Lam(x, ann, let_encode(body, (*ctx, (x, ann))), admin)
        case App(f, a):
            return App(let_encode(f, ctx), let_encode(a, ctx))
        case BoxIn(bs, args, body):
            return BoxIn(bs, tuple(let_encode(a, ctx) for a in args), let_encode(body, bs))
    return t


def erase_box(ty: Type) -> Type:
    match ty:
        case Arrow(a, b):
            return Arrow(erase_box(a), erase_box(b))
        case Box(b):
            return erase_box(b)
    return ty


def floor(t: Term) -> Term:
    """Box elimination for restricted terms.

    A box whose arguments are all values becomes its body with the arguments
    substituted; the first non-value argument is first bound by a ``let``.
    """
    match t:
        case Const(c, ann):
            return Const(c, erase_box(ann))
        case Lam(x, ann, body):
            return Lam(x, erase_box(ann), floor(body))
        case App(f, a):
            return App(floor(f), floor(a))
        case Let(x, n, body):
            return Let(x, floor(n), floor(body))
        case BoxIn(bs, args, body):
            for i, a in enumerate(args):
                if not is_value(a):
                    others = frozenset().union(*(b.fv for j, b in enumerate(args) if j != i))
                    y = fresh("y", others | a.fv)
                    rest = BoxIn(bs, args[:i] + (Var(y),) + args[i + 1 :], body)
                    return Let(y, floor(a), floor(rest))
            return subst_many(floor(body), {x: floor(a) for (x, _), a in zip(bs, args)})
    return t


# Overlaps of let-introduction with the box rules, as in the local-confluence proof.
CRITICAL_PAIRS = [
    (
        "let-introduction vs id-box",
        "f:p->[]q, a:p",
        "box [x:q] <- [f a] in x",
        ((L.LetIntro, ()), (L.IdBox, ())),
    ),
    (
        "let-introduction vs beta-v-box",
        "g:p->[]p, a:p",
        r"box [x:r->p] <- [box [y:p] <- [g a] in \z:r. y] in x d:r",
        ((L.LetIntro, ()), (L.BetaBoxV, ())),
    ),
]


def critical_pair_suite() -> list[tuple[Term, ReductionStep, ReductionStep, bool]]:
    return instantiate_pairs(CRITICAL_PAIRS, COMP_RULES)


__all__ = [
    "COMP_RULES",
    "comp_redexes",
    "critical_pair_suite",
    "eq_comp",
    "floor",
    "is_let_intro_at_box",
    "let_encode",
    "normalize_comp",
]
