"""IS4: the counit and comultiplication constants, the dual-context calculus,
and a bounded equational prover for both.

The S4 schemes are equalities with no intended orientation, so equality is
decided by a bidirectional breadth-first search over the congruence closure
of the schemes. Schemes whose right-to-left reading would have to invent
subterms are only used left to right; searching from both ends recovers most
of what that loses. A failed search is not a disproof.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .cbn import CBN_RULES, beta, eta
from .gen import ATOMS, BOUND_NAMES, CONSTS, comult, counit
from .reduction import normalize, steps
from .syntax import (
    App,
    Arrow,
    Box,
    BoxIn,
    BoxUp,
    Const,
    Lam,
    LetBox,
    MVar,
    Term,
    Type,
    Var,
    all_names,
    alpha_eq,
    alpha_key,
    children,
    fresh,
    is_modal_name,
    rename_binder,
    subst_many,
    substitute,
    with_children,
)
from .typecheck import (
    BodyUsesOuterVariable,
    LambdaBoxTypeError,
    ModalVariableInOrdinaryPosition,
    TypeMismatch,
    UnboundVariable,
    infer,
    lookup,
)

DEFAULT_BUDGET = 1000


def eps(sigma: Type, m: Term) -> Term:
    return App(counit(sigma), m)


def delta(sigma: Type, m: Term) -> Term:
    return App(comult(sigma), m)


def _eps_of(t):
    match t:
        case App(Const("counit", Arrow(Box(s), s2)), m) if s == s2:
            return s, m
    return None


def _delta_of(t):
    match t:
        case App(Const("comult", Arrow(Box(s), Box(Box(s2)))), m) if s == s2:
            return s, m
    return None


# -- the S4 schemes ----------------------------------------------------------


def nat_eps(t, ctx=()):
    hit = _eps_of(t)
    if hit and isinstance(hit[1], BoxIn):
        b = hit[1]
        yield "nat-eps", subst_many(b.body, {x: eps(s, n) for (x, s), n in zip(b.binders, b.args)})


def nat_delta(t, ctx=()):
    hit = _delta_of(t)
    if hit and isinstance(hit[1], BoxIn):
        b = hit[1]
        avoid = set(b.names) | b.fv
        ys = []
        for x, _ in b.binders:
            y = fresh("y", avoid)
            avoid.add(y)
            ys.append(y)
        inner = BoxIn(b.binders, tuple(map(Var, ys)), b.body)
        outer = tuple((y, Box(s)) for y, (_, s) in zip(ys, b.binders))
        yield "nat-delta", BoxIn(outer, tuple(delta(s, n) for (_, s), n in zip(b.binders, b.args)), inner)


def nat_delta_rev(t, ctx=()):
    match t:
        case BoxIn(outer, args, BoxIn(bs, inner_args, m)) if len(outer) == len(bs):
            if tuple(inner_args) != tuple(Var(y) for y, _ in outer):
                return
            ns = []
            for (_, ty), (_, s), a in zip(outer, bs, args):
                hit = _delta_of(a)
                if not hit or hit[0] != s or ty != Box(s):
                    return
                ns.append(hit[1])
            try:
                tau = infer(bs, m)
            except LambdaBoxTypeError:
                return
            yield "nat-delta", delta(tau, BoxIn(bs, tuple(ns), m))


def mon_dd(t, ctx=()):
    outer = _delta_of(t)
    if outer:
        inner = _delta_of(outer[1])
        if inner and outer[0] == Box(inner[0]):
            s = inner[0]
            yield "mon-dd", BoxIn((("x", Box(s)),), (outer[1],), delta(s, Var("x")))


def mon_dd_rev(t, ctx=()):
    match t:
        case BoxIn(((x, Box(s)),), (arg,), body):
            hit, use = _delta_of(arg), _delta_of(body)
            if hit and hit[0] == s and use and use[0] == s and use[1] == Var(x):
                yield "mon-dd", delta(Box(s), arg)


def mon_ed(t, ctx=()):
    outer = _eps_of(t)
    if outer:
        inner = _delta_of(outer[1])
        if inner and outer[0] == Box(inner[0]):
            s, m = inner
            yield "mon-ed", m
            yield "mon-ed", BoxIn((("x", Box(s)),), (outer[1],), eps(s, Var("x")))


def mon_ed_box(t, ctx=()):
    match t:
        case BoxIn(((x, Box(s)),), (arg,), body):
            hit, use = _delta_of(arg), _eps_of(body)
            if hit and hit[0] == s and use and use[0] == s and use[1] == Var(x):
                yield "mon-ed", hit[1]
                yield "mon-ed", eps(Box(s), arg)


def _unwrap_eps(t: Term, x: str, sigma: Type) -> Term:
    """Replace every ``counit@sigma x`` by ``x`` (respecting shadowing)."""
    if x not in t.fv:
        return t
    hit = _eps_of(t)
    if hit and hit[0] == sigma and hit[1] == Var(x):
        return Var(x)
    match t:
        case Lam(y, _, _) if y == x:
            return t
        case BoxIn(bs, args, body):
            return BoxIn(bs, tuple(_unwrap_eps(a, x, sigma) for a in args), body)
    kids = children(t)
    return with_children(t, tuple(_unwrap_eps(k, x, sigma) for k in kids)) if kids else t


def _only_eps_uses(t: Term, x: str, sigma: Type) -> bool:
    if x not in t.fv:
        return True
    hit = _eps_of(t)
    if hit and hit[0] == sigma and hit[1] == Var(x):
        return True
    match t:
        case Var():
            return False
        case Lam(y, _, _) if y == x:
            return True
        case BoxIn(_, args, _):
            return all(_only_eps_uses(a, x, sigma) for a in args)
    return all(_only_eps_uses(k, x, sigma) for k in children(t))


def absorb(t, ctx=()):
    """``box [.., x:[]s, ..] <- [.., comult N, ..] in M`` with x used only under counit
    equals ``box [.., x:s, ..] <- [.., N, ..] in M[x/counit x]``.

    Derived: expand the body back into a box of ``box [x] <- [comult N] in counit x``
    and apply the counit/comult law to that argument.
    """
    if not isinstance(t, BoxIn):
        return
    for i, ((x, ty), a) in enumerate(zip(t.binders, t.args)):
        hit = _delta_of(a)
        if hit and ty == Box(hit[0]) and _only_eps_uses(t.body, x, hit[0]):
            s, n = hit
            bs = t.binders[:i] + ((x, s),) + t.binders[i + 1 :]
            yield "absorb", BoxIn(bs, t.args[:i] + (n,) + t.args[i + 1 :], _unwrap_eps(t.body, x, s))


def st_weaken(t, ctx=()):
    if isinstance(t, BoxIn):
        for i, (x, _) in enumerate(t.binders):
            if x not in t.body.fv:
                yield "st", BoxIn(t.binders[:i] + t.binders[i + 1 :], t.args[:i] + t.args[i + 1 :], t.body)


def st_contract(t, ctx=()):
    if isinstance(t, BoxIn):
        for i in range(len(t.args) - 1):
            (x, s1), (y, s2) = t.binders[i], t.binders[i + 1]
            if s1 == s2 and alpha_eq(t.args[i], t.args[i + 1]):
                yield "st", BoxIn(
                    t.binders[: i + 1] + t.binders[i + 2 :],
                    t.args[: i + 1] + t.args[i + 2 :],
                    substitute(t.body, y, Var(x)),
                )


def sym_swap(t, ctx=()):
    if isinstance(t, BoxIn):
        for i in range(len(t.args) - 1):
            bs, args = list(t.binders), list(t.args)
            bs[i], bs[i + 1] = bs[i + 1], bs[i]
            args[i], args[i + 1] = args[i + 1], args[i]
            yield "sym", BoxIn(tuple(bs), tuple(args), t.body)


S4_SCHEMES = (nat_eps, nat_delta, nat_delta_rev, mon_dd, mon_dd_rev, mon_ed, mon_ed_box)
ST_SCHEMES = (st_weaken, st_contract)
SYM_SCHEMES = (sym_swap,)


@dataclass(frozen=True)
class EqTheory:
    """Which schemes the prover may use. ``base`` are oriented rewrites (the cbn rules by default)."""

    s4: bool = True
    st: bool = False
    sym: bool = False
    absorb: bool = True
    base: tuple = CBN_RULES

    def rules(self) -> tuple:
        out = list(self.base)
        if self.s4:
            out += S4_SCHEMES
            if self.absorb:
                out.append(absorb)
        if self.st:
            out += ST_SCHEMES
        if self.sym:
            out += SYM_SCHEMES
        return tuple(out)


S4 = EqTheory()
S4_ST_SYM = EqTheory(st=True, sym=True)


def st_sym_schemes() -> EqTheory:
    """The strongness and symmetricity schemes alone."""
    return EqTheory(s4=False, st=True, sym=True, base=())


# -- bounded bidirectional search -------------------------------------------


@dataclass(frozen=True)
class Proven:
    trace: tuple  # ((label, term), ...) from the left term to the right; "<-" marks reversed steps
    expanded: int

    def __bool__(self):
        return True


@dataclass(frozen=True)
class NotFoundWithinBudget:
    expanded: int
    exhausted: bool = False

    def __bool__(self):
        return False


def _chain(seen, key):
    out = []
    while True:
        parent, label, term = seen[key]
        out.append((label, term))
        if parent is None:
            return out[::-1]
        key = parent


def search(a: Term, b: Term, rules, budget: int = DEFAULT_BUDGET, oriented=()):
    """Expand at most ``budget`` terms, alternating sides, until the two searches meet.

    When ``oriented`` (a terminating subset of ``rules``) is given, each side
    is also seeded with its normal form under it, reached in one traced hop.
    """
    seen = ({}, {})
    frontiers = (deque(), deque())
    for side, t in ((0, a), (1, b)):
        k = alpha_key(t)
        seen[side][k] = (None, None, t)
        if oriented:
            nf = normalize(t, oriented)[0]
            kn = alpha_key(nf)
            if kn not in seen[side]:
                seen[side][kn] = (k, "normalize", nf)
                frontiers[side].append((kn, nf))
        frontiers[side].append((k, t))
    meet = seen[0].keys() & seen[1].keys()
    if meet:
        return Proven(_trace(seen, min(meet, key=repr)), 0)
    expanded = 0
    while expanded < budget and (frontiers[0] or frontiers[1]):
        side = 0 if frontiers[0] and (not frontiers[1] or len(frontiers[0]) <= len(frontiers[1])) else 1
        key, t = frontiers[side].popleft()
        expanded += 1
        for st in steps(t, rules):
            k = alpha_key(st.result)
            if k in seen[side]:
                continue
            seen[side][k] = (key, str(st.label), st.result)
            if k in seen[1 - side]:
                return Proven(_trace(seen, k), expanded)
            frontiers[side].append((k, st.result))
    return NotFoundWithinBudget(expanded, exhausted=not (frontiers[0] or frontiers[1]))


def _trace(seen, k):
    left, right = _chain(seen[0], k), _chain(seen[1], k)
    back = [("<- " + lbl, term) for (lbl, _), (_, term) in zip(right[::-1], right[-2::-1])]
    return tuple(left + back)


def eq_bounded(theory: EqTheory, a: Term, b: Term, budget: int = DEFAULT_BUDGET):
    return search(a, b, theory.rules(), budget, theory.base)


# -- Bierman/de Paiva encoding ----------------------------------------------


def boxsub(binders, args, body: Term) -> BoxIn:
    """``boxsub [x:s] <- [N] in M`` for ``N : []s`` is ``box [x:[]s] <- [comult@s N] in M``.

    Inside ``M`` each ``x`` has the boxed type ``[]s``.
    """
    return BoxIn(tuple((x, Box(s)) for x, s in binders), tuple(delta(s, n) for (_, s), n in zip(binders, args)), body)


def unbox(m: Term, ty: Type) -> Term:
    """``unbox M`` for ``M : []ty``."""
    return eps(ty, m)


# -- the dual-context calculus ----------------------------------------------


def dual_infer(delta_ctx, gamma, t: Term, path: tuple = (), _outer=()) -> Type:
    """Type of ``t`` under modal context ``delta_ctx`` and ordinary context ``gamma``."""
    match t:
        case MVar(a):
            ty = lookup(delta_ctx, a)
            if ty is None:
                raise UnboundVariable(a, path)
            return ty
        case Var(x):
            ty = lookup(gamma, x)
            if ty is None:
                if lookup(_outer, x) is not None:
                    raise BodyUsesOuterVariable({x}, path)
                raise UnboundVariable(x, path)
            return ty
        case Const(_, ann):
            return ann
        case Lam(x, ann, body):
            if is_modal_name(x):
                raise ModalVariableInOrdinaryPosition(f"lambda binds modal name {x}", path)
            return Arrow(ann, dual_infer(delta_ctx, (*gamma, (x, ann)), body, path + (0,), _outer))
        case App(f, a):
            tf = dual_infer(delta_ctx, gamma, f, path + (0,), _outer)
            if not isinstance(tf, Arrow):
                raise TypeMismatch("a function type", tf, path + (0,))
            ta = dual_infer(delta_ctx, gamma, a, path + (1,), _outer)
            if ta != tf.dom:
                raise TypeMismatch(tf.dom, ta, path + (1,))
            return tf.cod
        case BoxUp(body):
            return Box(dual_infer(delta_ctx, (), body, path + (0,), (*_outer, *gamma)))
        case LetBox(a, ann, n, body):
            tn = dual_infer(delta_ctx, gamma, n, path + (0,), _outer)
            if not isinstance(tn, Box) or (ann is not None and tn.body != ann):
                raise TypeMismatch(Box(ann) if ann is not None else "a box type", tn, path + (0,))
            return dual_infer((*delta_ctx, (a, tn.body)), gamma, body, path + (1,), _outer)
    raise ModalVariableInOrdinaryPosition(f"not a dual-context term: {type(t).__name__}", path)


def _dual_beta(t, ctx=()):
    yield from beta(t, ctx)


def dual_box_beta(t, ctx=()):
    match t:
        case LetBox(a, _, BoxUp(n), m):
            yield "letbox-beta", substitute(m, a, n)


def dual_box_eta(t, ctx=()):
    match t:
        case LetBox(a, _, m, BoxUp(MVar(b))) if a == b:
            yield "letbox-eta", m


def _lift_over(a, body, other):
    return rename_binder(a, body, other.fv)


def dual_commute(t, ctx=()):
    """Float a ``let box`` out of an application or out of another ``let box``'s bound term."""
    match t:
        case App(LetBox(a, s, n, m), l):
            a2, m2 = _lift_over(a, m, l)
            yield "commute", LetBox(a2, s, n, App(m2, l))
    match t:
        case App(l, LetBox(a, s, n, m)):
            a2, m2 = _lift_over(a, m, l)
            yield "commute", LetBox(a2, s, n, App(l, m2))
    match t:
        case LetBox(b, s2, LetBox(a, s, n, m), p):
            a2, m2 = rename_binder(a, m, p.fv | {b})
            yield "commute", LetBox(a2, s, n, LetBox(b, s2, m2, p))


def dual_commute_rev(t, ctx=()):
    match t:
        case LetBox(a, s, n, App(m, l)):
            if a not in l.fv:
                yield "commute", App(LetBox(a, s, n, m), l)
            if a not in m.fv:
                yield "commute", App(m, LetBox(a, s, n, l))
        case LetBox(a, s, n, LetBox(b, s2, m, p)) if a not in p.fv and a != b:
            b2, p2 = rename_binder(b, p, n.fv)
            yield "commute", LetBox(b2, s2, LetBox(a, s, n, m), p2)


DUAL_RULES = (_dual_beta, eta, dual_box_beta, dual_box_eta, dual_commute, dual_commute_rev)


DUAL_ORIENTED = (_dual_beta, eta, dual_box_beta, dual_box_eta)


def dual_eq_bounded(a: Term, b: Term, budget: int = DEFAULT_BUDGET):
    return search(a, b, DUAL_RULES, budget, DUAL_ORIENTED)


# -- translations between the two presentations -----------------------------


def ordinary_name(a: str) -> str:
    return a[1:]


def _modal_fv_in_order(t: Term, bound=frozenset()) -> list[str]:
    out: list[str] = []

    def walk(u, bound):
        match u:
            case MVar(a):
                if a not in bound and a not in out:
                    out.append(a)
                return
            case LetBox(a, _, n, body):
                walk(n, bound)
                walk(body, bound | {a})
                return
        for c in children(u):
            walk(c, bound)

    walk(t, bound)
    return out


def transport_context(delta_ctx, gamma) -> tuple:
    """The single context ``a:[]rho, ..., x:sigma, ...`` that types the image of ``ceilx``."""
    return tuple((ordinary_name(a), Box(r)) for a, r in delta_ctx) + tuple(gamma)


def ceilx(t: Term, delta_ctx=(), gamma=()) -> Term:
    """Dual-context term to box calculus with counit/comult.

    A modal variable ``@a`` becomes the ordinary variable ``a``; the two
    namespaces must not overlap once the ``@`` is dropped.
    """
    match t:
        case MVar(a):
            return eps(lookup(delta_ctx, a), Var(ordinary_name(a)))
        case Var() | Const():
            return t
        case Lam(x, ann, body):
            return Lam(x, ann, ceilx(body, delta_ctx, (*gamma, (x, ann))))
        case App(f, a):
            return App(ceilx(f, delta_ctx, gamma), ceilx(a, delta_ctx, gamma))
        case BoxUp(body):
            names = _modal_fv_in_order(body)
            rhos = [lookup(delta_ctx, a) for a in names]
            bs = tuple((ordinary_name(a), Box(r)) for a, r in zip(names, rhos))
            args = tuple(delta(r, Var(ordinary_name(a))) for a, r in zip(names, rhos))
            return BoxIn(bs, args, ceilx(body, delta_ctx, ()))
        case LetBox(a, ann, n, body):
            sigma = ann if ann is not None else dual_infer(delta_ctx, gamma, n).body
            lam = Lam(ordinary_name(a), Box(sigma), ceilx(body, (*delta_ctx, (a, sigma)), gamma))
            return App(lam, ceilx(n, delta_ctx, gamma))
    raise TypeError(f"not a dual-context term: {t!r}")


def floorx(t: Term) -> Term:
    """Box calculus with counit/comult to the dual-context calculus."""
    avoid = {n.lstrip("@") for n in all_names(t)}
    return _floorx(t, avoid)


def _modal(base, avoid):
    n = fresh(base, avoid)
    avoid.add(n)
    return "@" + n


def _floorx(t, avoid):
    match t:
        case Const("counit", Arrow(Box(s), _)):
            a = _modal("a", avoid)
            return Lam("y", Box(s), LetBox(a, s, Var("y"), MVar(a)))
        case Const("comult", Arrow(Box(s), _)):
            a = _modal("a", avoid)
            return Lam("y", Box(s), LetBox(a, s, Var("y"), BoxUp(BoxUp(MVar(a)))))
        case Var() | Const():
            return t
        case Lam(x, ann, body):
            return Lam(x, ann, _floorx(body, avoid))
        case App(f, a):
            return App(_floorx(f, avoid), _floorx(a, avoid))
        case BoxIn(bs, args, body):
            mods = [_modal(x, avoid) for x, _ in bs]
            out = BoxUp(subst_many(_floorx(body, avoid), {x: MVar(a) for (x, _), a in zip(bs, mods)}))
            for a, (_, s), n in reversed(list(zip(mods, bs, args))):
                out = LetBox(a, s, _floorx(n, avoid), out)
            return out
    raise TypeError(f"not a box-calculus term: {t!r}")


def round_trip(t: Term, theory: EqTheory = S4_ST_SYM, budget: int = DEFAULT_BUDGET):
    """Prove ``ceilx (floorx t) = t``."""
    return eq_bounded(theory, ceilx(floorx(t)), t, budget)


# A fixed suite of small terms for the round trip, with their contexts.
ROUND_TRIP_SUITE = (
    ("", "c:p"),
    ("x:p", "x"),
    ("n:[]p", "counit@p n"),
    ("n:[]p", "comult@p n"),
    ("n:[]p", "box [x:p] <- [n] in x"),
    ("", "box [] <- [] in c:p"),
    ("n:[]p", "box [x:p] <- [n] in c:(p->q) x"),
    ("", r"\f:[](p->q). \x:[]p. box [f1:p->q, x1:p] <- [f, x] in f1 x1"),
    ("n:[]p, l:[]q", "box [x:p, y:q] <- [n, l] in c:(p->q->r) x y"),
    ("n:[]p, l:[]q", "box [y:q, x:p] <- [l, n] in c:(p->q->r) x y"),
    ("n:[]p", "box [x:p] <- [n] in \\z:q. x"),
    ("n:[][]p", "box [x:[]p] <- [n] in box [y:p] <- [x] in y"),
    ("n:[]p", "counit@p (box [x:p] <- [n] in x)"),
    ("n:[]p", "comult@p (box [x:p] <- [n] in x)"),
    ("n:[]p", "counit@([]p) (comult@p n)"),
    ("n:[]p", "comult@([]p) (comult@p n)"),
    ("", r"\y:[]p. counit@p y"),
    ("", r"\y:[]p. comult@p y"),
    ("f:[]p->q, n:[]p", "f n"),
    ("f:[](p->q), n:[]p", "box [g:p->q, x:p] <- [f, n] in g (g1:(q->p) (g x))"),
    ("n:[]p", "box [x:p, u:q] <- [n, c:[]q] in x"),
    ("n:[]p", "counit@([]p) (comult@p (counit@([]p) (comult@p n)))"),
    ("n:[]p", r"(\z:[]p. box [x:p] <- [z] in x) n"),
    ("l:[]p", "box [x:[]p] <- [comult@p l] in counit@p x"),
    ("n:[]([]p)", "box [x:[]q] <- [box [y:[]p] <- [n] in f:([]p->[]q) y] in x"),
)


# -- a generator of dual-context terms ---------------------------------------


@dataclass
class _DualGen:
    rng: random.Random
    delta: list = field(default_factory=list)
    gamma: list = field(default_factory=list)
    used: set = field(default_factory=set)

    def type(self, depth):
        r = self.rng.random()
        if depth <= 0 or r < 0.5:
            return self.rng.choice(ATOMS)
        if r < 0.75:
            return Arrow(self.type(depth - 1), self.type(depth - 1))
        return Box(self.type(depth - 1))

    def name(self, pool):
        n = fresh(self.rng.choice(pool), self.used)
        self.used.add(n)
        return n

    def leaf(self, goal, dl, gl, outer):
        options = [Var(x) for x, t in gl if t == goal] + [MVar(a) for a, t in dl if t == goal]
        r = self.rng.random()
        if options and r < 0.6:
            return self.rng.choice(options)
        if outer and r < 0.75:
            x = self.name(("f", "g", "n", "m"))
            self.gamma.append((x, goal))
            return Var(x)
        if r < 0.9:
            a = "@" + self.name(("a", "b"))
            self.delta.append((a, goal))
            return MVar(a)
        return Const(self.rng.choice(CONSTS), goal)

    def term(self, goal, dl, gl, budget, outer):
        if budget <= 1:
            return self.leaf(goal, dl, gl, outer)
        r = self.rng.random()
        if isinstance(goal, Arrow) and r < 0.35:
            x = self.name(BOUND_NAMES)
            return Lam(x, goal.dom, self.term(goal.cod, dl, (*gl, (x, goal.dom)), budget - 1, outer))
        if isinstance(goal, Box) and r < 0.55:
            return BoxUp(self.term(goal.body, dl, (), budget - 1, False))
        if r < 0.75 and budget >= 3:
            s = self.type(1)
            a = "@" + self.name(("a", "b"))
            k = self.rng.randint(1, budget - 2)
            n = self.term(Box(s), dl, gl, k, outer)
            return LetBox(a, s, n, self.term(goal, (*dl, (a, s)), gl, budget - 1 - k, outer))
        if budget >= 3:
            s = self.type(1)
            k = self.rng.randint(1, budget - 2)
            return App(self.term(Arrow(s, goal), dl, gl, k, outer), self.term(s, dl, gl, budget - 1 - k, outer))
        return self.leaf(goal, dl, gl, outer)


def gen_dual_terms(seed: int, count: int, max_size: int = 15):
    """Typable dual-context terms as ``(delta, gamma, term)`` triples."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        g = _DualGen(rng)
        goal = g.type(2)
        t = g.term(goal, (), (), max_size, True)
        d, gm = tuple(g.delta), tuple(g.gamma)
        dual_infer(d, gm, t)
        out.append((d, gm, t))
    return out


# -- generated scheme instances ------------------------------------------------

INSTANCE_KINDS = ("counit-comult", "nat-counit", "nat-comult", "comult-comult", "unbox-boxsub")


def _instance(kind: str, g, ty: Type) -> tuple[Term, Term]:
    if kind in ("counit-comult", "comult-comult"):
        m = g.term(Box(ty), (), g.cfg.max_size, True)
        if kind == "counit-comult":
            return eps(Box(ty), delta(ty, m)), m
        return delta(Box(ty), delta(ty, m)), BoxIn((("w", Box(ty)),), (delta(ty, m),), delta(ty, Var("w")))
    bs = tuple((g.name(BOUND_NAMES), g.type(1)) for _ in range(g.rng.randint(1, 2)))
    share = max(1, g.cfg.max_size // (len(bs) + 1))
    if kind == "unbox-boxsub":
        args = tuple(g.term(Box(s), (), share, True) for _, s in bs)
        body = g.term(ty, tuple((x, Box(s)) for x, s in bs), share, False)
        return unbox(boxsub(bs, args, body), ty), subst_many(body, {x: a for (x, _), a in zip(bs, args)})
    args = tuple(g.term(Box(s), (), share, True) for _, s in bs)
    body = g.term(ty, bs, share, False)
    b = BoxIn(bs, args, body)
    if kind == "nat-counit":
        return eps(ty, b), subst_many(body, {x: eps(s, a) for (x, s), a in zip(bs, args)})
    used = all_names(b)
    ws = []
    for _ in bs:
        ws.append(fresh("w", used))
        used.add(ws[-1])
    outer = tuple((w, Box(s)) for w, (_, s) in zip(ws, bs))
    inner = BoxIn(bs, tuple(Var(w) for w in ws), body)
    return delta(ty, b), BoxIn(outer, tuple(delta(s, a) for (_, s), a in zip(bs, args)), inner)


def s4_instances(kind: str, seed: int = 0, count: int = 50, max_size: int = 12) -> list[tuple[Term, Term]]:
    """Generated ``(lhs, rhs)`` instances of one S4 scheme, both sides well-typed."""
    from .gen import GenConfig, _Gen
    from .syntax import Calculus

    if kind not in INSTANCE_KINDS:
        raise ValueError(f"unknown instance kind {kind!r}")
    rng = random.Random(f"{kind}:{seed}")
    cfg = GenConfig(max_size=max_size, calculus=Calculus.S4EQ, restricted=False)
    out = []
    while len(out) < count:
        g = _Gen(cfg, rng)
        lhs, rhs = _instance(kind, g, g.type(1))
        ctx = tuple(g.ctx)
        if infer(ctx, lhs) == infer(ctx, rhs):
            out.append((lhs, rhs))
    return out
