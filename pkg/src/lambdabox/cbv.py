"""Call-by-value reductions over values and evaluation contexts.

Values are constants, variables, abstractions, and boxes whose arguments are
all values. A simple evaluation context is ``- M``, ``V -`` or a box argument
slot with only values to its left; evaluation contexts nest simple ones.
``flat`` and ``beta_omega`` accept a constant head wherever they accept a
variable head, matching how the CPS inverse treats the two.
"""

from __future__ import annotations

from typing import Iterator

from .cbn import id_box, merge_box
from .reduction import DEFAULT_FUEL, ReductionStep, RuleLabel, normalize, reducts
from .syntax import (
    App,
    Arrow,
    BoxIn,
    Box,
    Const,
    Lam,
    Term,
    Var,
    alpha_eq,
    children,
    fresh,
    rename_binder,
    substitute,
)
from .typecheck import lookup

L = RuleLabel


def is_value(t: Term) -> bool:
    match t:
        case Const() | Var() | Lam():
            return True
        case BoxIn(args=args):
            return all(is_value(a) for a in args)
    return False


def is_restricted(t: Term) -> bool:
    """Every box body is a value."""
    if isinstance(t, BoxIn) and not is_value(t.body):
        return False
    return all(is_restricted(c) for c in children(t))


def simple_contexts(t: Term) -> Iterator[tuple[Term, object, frozenset, str]]:
    """Decompose ``t = C[s]`` for simple contexts C.

    Yields ``(s, plug, other_fv, kind)`` where ``plug(u)`` rebuilds ``C[u]``,
    ``other_fv`` are the free variables of C, and ``kind`` is ``"fun"``
    (``- M``), ``"arg"`` (``V -``) or the argument index of a box slot.
    """
    match t:
        case App(f, a):
            yield f, (lambda u, a=a: App(u, a)), a.fv, "fun"
            if is_value(f):
                yield a, (lambda u, f=f: App(f, u)), f.fv, "arg"
        case BoxIn(bs, args, body):
            for i, a in enumerate(args):
                rest = args[:i] + args[i + 1 :]
                other = frozenset().union(*(r.fv for r in rest))
                yield a, (lambda u, i=i: BoxIn(bs, args[:i] + (u,) + args[i + 1 :], body)), other, i
                if not is_value(a):
                    break


def eval_contexts(t: Term) -> Iterator[tuple[Term, object]]:
    """Decompose ``t = E[s]`` for every evaluation context E (including the empty one)."""
    yield t, (lambda u: u)
    for s, plug, _, _ in simple_contexts(t):
        for s2, plug2 in eval_contexts(s):
            yield s2, (lambda u, plug=plug, plug2=plug2: plug(plug2(u)))


def id_arrow(t, ctx=()):
    match t:
        case App(Lam(x, _, Var(y)), m) if x == y:
            yield L.IdArrow, m


def beta_v(t, ctx=()):
    match t:
        case App(Lam(x, _, body), v) if is_value(v):
            yield L.BetaArrowV, substitute(body, x, v)


def eta_v(t, ctx=()):
    match t:
        case Lam(x, _, App(v, Var(y))) if x == y and x not in v.fv and is_value(v):
            yield L.EtaArrowV, v


def lift(t, ctx=()):
    for s, plug, other, _ in simple_contexts(t):
        match s:
            case App(Lam(x, ann, m), n):
                x2, m2 = rename_binder(x, m, other)
                yield L.Lift, App(Lam(x2, ann, plug(m2)), n)


def flat(t, ctx=()):
    for s, plug, other, kind in simple_contexts(t):
        if kind == "arg":
            continue
        match s:
            case App(Var() | Const() as y, _):
                if isinstance(kind, int):
                    ty = Box(t.binders[kind][1])
                else:
                    fty = y.ann if isinstance(y, Const) else lookup(ctx, y.name)
                    if not isinstance(fty, Arrow):
                        continue
                    ty = fty.cod
                x = fresh("x", other | s.fv)
                yield L.Flat, App(Lam(x, ty, plug(Var(x))), s)


def beta_omega(t, ctx=()):
    match t:
        case App(Lam(x, _, body), m):
            for s, plug in eval_contexts(body):
                match s:
                    case App(Var() | Const() as y, Var(z)) if z == x and y != Var(x):
                        if x not in plug(y).fv:
                            yield L.BetaOmega, plug(App(y, m))


def beta_v_box(t, ctx=()):
    if isinstance(t, BoxIn):
        for i, a in enumerate(t.args):
            if isinstance(a, BoxIn) and is_value(a.body):
                yield L.BetaBoxV, merge_box(t, i)
            if not is_value(a):
                break


CBV_RULES = (id_arrow, beta_v, eta_v, lift, flat, beta_omega, id_box, beta_v_box)
LIFT_FLAT = (lift, flat)


def cbv_redexes(t: Term, ctx=()) -> list[ReductionStep]:
    return reducts(t, CBV_RULES, ctx)


def normalize_cbv(t: Term, ctx=(), fuel: int | None = DEFAULT_FUEL, trace=None) -> tuple[Term, int]:
    return normalize(t, CBV_RULES, ctx, fuel, trace)


def eq_cbv(a: Term, b: Term, ctx=(), fuel: int | None = DEFAULT_FUEL) -> bool:
    return alpha_eq(normalize_cbv(a, ctx, fuel)[0], normalize_cbv(b, ctx, fuel)[0])

