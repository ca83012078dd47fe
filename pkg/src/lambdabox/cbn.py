"""Call-by-name reductions: beta, eta, id-box and beta-box, under full congruence."""

from __future__ import annotations

from .parsing import parse
from .reduction import (
    DEFAULT_FUEL,
    ReductionStep,
    RuleLabel,
    normalize,
    reducts,
    steps,
)
from .syntax import App, BoxIn, Lam, Term, Var, alpha_eq, fresh, subst_many, substitute

L = RuleLabel


def beta(t, ctx=()):
    match t:
        case App(Lam(x, _, body), n):
            yield L.BetaArrow, substitute(body, x, n)


def eta(t, ctx=()):
    match t:
        case Lam(x, _, App(m, Var(y))) if x == y and x not in m.fv:
            yield L.EtaArrow, m


def id_box(t, ctx=()):
    match t:
        case BoxIn(((x, _),), (m,), Var(y)) if x == y:
            yield L.IdBox, m


def merge_box(t: BoxIn, i: int) -> BoxIn:
    """Fuse the box argument at position ``i`` into ``t``.

    ``box [w, x, z] <- [P, box [y] <- [L] in N, Q] in M`` becomes
    ``box [w, y, z] <- [P, L, Q] in M[N/x]``, with the inner binders renamed
    away from the outer ones.
    """
    inner = t.args[i]
    x = t.binders[i][0]
    outer = t.binders[:i] + t.binders[i + 1 :]
    taken = {n for n, _ in outer} | (t.body.fv - {x})
    renaming, ys = {}, []
    for y, ty in inner.binders:
        y2 = y
        if y in taken:
            y2 = fresh(y, taken | set(inner.names))
            renaming[y] = Var(y2)
        taken.add(y2)
        ys.append((y2, ty))
    n = subst_many(inner.body, renaming)
    return BoxIn(
        t.binders[:i] + tuple(ys) + t.binders[i + 1 :],
        t.args[:i] + inner.args + t.args[i + 1 :],
        substitute(t.body, x, n),
    )


def beta_box(t, ctx=()):
    if isinstance(t, BoxIn):
        for i, a in enumerate(t.args):
            if isinstance(a, BoxIn):
                yield L.BetaBox, merge_box(t, i)


CBN_RULES = (beta, eta, id_box, beta_box)


def cbn_redexes(t: Term, ctx=()) -> list[ReductionStep]:
    return reducts(t, CBN_RULES, ctx)


def normalize_cbn(t: Term, fuel: int | None = DEFAULT_FUEL, trace=None) -> tuple[Term, int]:
    return normalize(t, CBN_RULES, (), fuel, trace)


def eq_cbn(a: Term, b: Term, fuel: int | None = DEFAULT_FUEL) -> bool:
    return alpha_eq(normalize_cbn(a, fuel)[0], normalize_cbn(b, fuel)[0])


def joinable(rules, ctx, a: Term, b: Term, fuel: int | None = DEFAULT_FUEL) -> bool:
    return alpha_eq(normalize(a, rules, ctx, fuel)[0], normalize(b, rules, ctx, fuel)[0])


# The overlaps named in the local-confluence proof, each with a small instance:
# (description, context, term, (label, position) of the two competing steps).
CRITICAL_PAIRS = [
    (
        "id-box at the outer box vs beta-box into it",
        "l:[]p",
        "box [x:q] <- [box [y:p] <- [l] in c:(p->q) y] in x",
        ((L.IdBox, ()), (L.BetaBox, ())),
    ),
    (
        "id-box at the inner box vs beta-box",
        "n:[]p",
        "box [x:p] <- [box [y:p] <- [n] in y] in c:(p->q) x",
        ((L.IdBox, (0,)), (L.BetaBox, ())),
    ),
    (
        "beta-box at the outer box vs beta-box at the nested argument",
        "m:[]p",
        "box [x:r] <- [box [y:q] <- [box [z:p] <- [m] in c:(p->q) z] in d:(q->r) y] in e:(r->s) x",
        ((L.BetaBox, ()), (L.BetaBox, (0,))),
    ),
    (
        "beta-box on the first vs the second argument",
        "l:[]p, l2:[]p",
        "box [x:q, x2:q] <- [box [y:p] <- [l] in c:(p->q) y, box [y:p] <- [l2] in c:(p->q) y]"
        " in g:(q->q->r) x x2",
        ((L.BetaBox, ()), (L.BetaBox, ())),
    ),
]


def _pick(t, rules, ctx, label, position, skip=None):
    for st in steps(t, rules, ctx):
        if st.label == label and st.position == position and st != skip:
            return st
    raise LookupError(f"no {label} step at {position}")


def instantiate_pairs(table, rules):
    from .parsing import parse_context

    out = []
    for _, ctx_src, src, ((l1, p1), (l2, p2)) in table:
        ctx = parse_context(ctx_src)
        t = parse(src)
        s1 = _pick(t, rules, ctx, l1, p1)
        s2 = _pick(t, rules, ctx, l2, p2, skip=s1)
        out.append((t, s1, s2, joinable(rules, ctx, s1.result, s2.result)))
    return out


def critical_pair_suite() -> list[tuple[Term, ReductionStep, ReductionStep, bool]]:
    """Instantiate each call-by-name critical overlap, take both steps, and join by normalization."""
    return instantiate_pairs(CRITICAL_PAIRS, CBN_RULES)
