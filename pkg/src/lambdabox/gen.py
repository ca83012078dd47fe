"""Deterministic, type-directed generation of well-typed terms for property tests.

A goal type is drawn first and then inhabited top-down. Free variables are
invented on demand and collected into the returned typing context; box bodies
only ever see their own binders. Node weights lean towards applications and
boxes so that the interesting redexes show up often.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .syntax import App, Arrow, Atom, Box, BoxIn, Calculus, Const, Lam, Let, Term, Type, Var, fresh, size
from .typecheck import infer

ATOMS = (Atom("p"), Atom("q"))
CONSTS = ("c", "d", "e")
FREE_NAMES = ("a", "b", "f", "g", "l", "m", "n")
BOUND_NAMES = ("x", "y", "z", "w", "u", "v")


class GenerationStuck(RuntimeError):
    pass


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_size: int = 25
    calculus: Calculus = Calculus.CBV
    type_depth: int = 2
    restricted: bool = True


def counit(sigma: Type) -> Const:
    return Const("counit", Arrow(Box(sigma), sigma))


def comult(sigma: Type) -> Const:
    return Const("comult", Arrow(Box(sigma), Box(Box(sigma))))


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.ctx: list[tuple[str, Type]] = []
        self.used: set[str] = set()

    def type(self, depth: int) -> Type:
        r = self.rng.random()
        if depth <= 0 or r < 0.45:
            return self.rng.choice(ATOMS)
        if r < 0.75:
            return Arrow(self.type(depth - 1), self.type(depth - 1))
        return Box(self.type(depth - 1))

    def name(self, pool) -> str:
        n = fresh(self.rng.choice(pool), self.used)
        self.used.add(n)
        return n

    def hypothesis(self, ty: Type) -> Var:
        for x, t in self.ctx:
            if t == ty and self.rng.random() < 0.6:
                return Var(x)
        x = self.name(FREE_NAMES)
        self.ctx.append((x, ty))
        return Var(x)

    def leaf(self, goal: Type, env, outer: bool) -> Term:
        here = [x for x, t in env if t == goal]
        r = self.rng.random()
        if here and r < 0.55:
            return Var(self.rng.choice(here))
        if outer and r < 0.8:
            return self.hypothesis(goal)
        return Const(self.rng.choice(CONSTS), goal)

    def value(self, goal: Type, env, budget: int, outer: bool) -> Term:
        if budget >= 2:
            match goal:
                case Arrow(a, b) if self.rng.random() < 0.85:
                    x = self.name(BOUND_NAMES)
                    return Lam(x, a, self.term(b, (*env, (x, a)), budget - 1, outer))
                case Box(a) if self.rng.random() < 0.75:
                    return self.box(a, env, budget, outer, values_only=True)
        return self.leaf(goal, env, outer)

    def split(self, budget: int, parts: int) -> list[int]:
        """Random positive shares summing to at most ``budget``."""
        shares = [1] * parts
        for _ in range(budget - parts):
            if self.rng.random() < 0.9:
                shares[self.rng.randrange(parts)] += 1
        return shares

    def box(self, goal: Type, env, budget: int, outer: bool, values_only: bool = False) -> Term:
        n = self.rng.choice((0, 1, 1, 1, 2, 2, 3))
        n = min(n, budget - 2)
        if n < 0:
            return self.leaf(Box(goal), env, outer)
        bs = []
        for _ in range(n):
            bs.append((self.name(BOUND_NAMES), self.type(self.cfg.type_depth - 1)))
        shares = self.split(budget - 1, n + 1)
        args = []
        for (_, s), share in zip(bs, shares):
            if values_only:
                args.append(self.value(Box(s), env, share, outer))
            else:
                args.append(self.term(Box(s), env, share, outer))
        body_env = tuple(bs)
        if self.cfg.restricted:
            body = self.value(goal, body_env, shares[-1], False)
        else:
            body = self.term(goal, body_env, shares[-1], False)
        return BoxIn(tuple(bs), tuple(args), body)

    def term(self, goal: Type, env, budget: int, outer: bool) -> Term:
        if budget <= 1:
            return self.leaf(goal, env, outer)
        calc = self.cfg.calculus
        r = self.rng.random()
        if budget >= 3 and (r < 0.4 or isinstance(goal, Atom) and r < 0.8):
            return self.application(goal, env, budget, outer)
        if r < 0.65 and isinstance(goal, Box):
            return self.box(goal.body, env, budget, outer)
        if r < 0.75 and calc is Calculus.COMP and budget >= 3:
            x = self.name(BOUND_NAMES)
            s = self.type(1)
            a, b = self.split(budget - 1, 2)
            n = self.term(s, env, a, outer)
            return Let(x, n, self.term(goal, (*env, (x, s)), b, outer))
        if r < 0.8 and calc is Calculus.S4EQ:
            if isinstance(goal, Box) and isinstance(goal.body, Box) and self.rng.random() < 0.5:
                return App(comult(goal.body.body), self.term(goal.body, env, budget - 1, outer))
            return App(counit(goal), self.term(Box(goal), env, budget - 1, outer))
        if r < 0.95:
            return self.value(goal, env, budget, outer)
        return self.leaf(goal, env, outer)

    def application(self, goal: Type, env, budget: int, outer: bool) -> Term:
        arg_ty = self.type(1)
        a, b = self.split(budget - 1, 2)
        fun_ty = Arrow(arg_ty, goal)
        r = self.rng.random()
        if r < 0.35 and a >= 2:
            x = self.name(BOUND_NAMES)
            f = Lam(x, arg_ty, self.term(goal, (*env, (x, arg_ty)), a - 1, outer))
        elif r < 0.6 and outer:
            f = self.hypothesis(fun_ty)
        else:
            f = self.term(fun_ty, env, a, outer)
        return App(f, self.term(arg_ty, env, b, outer))


def gen_term(cfg: GenConfig, rng: random.Random, goal: Type | None = None) -> tuple[tuple, Term]:
    if cfg.max_size < 1:
        raise GenerationStuck("max_size must be at least 1")
    g = _Gen(cfg, rng)
    goal = goal if goal is not None else g.type(cfg.type_depth)
    if cfg.max_size == 1:
        # the smallest closed inhabitant
        return (), Const(CONSTS[0], goal)
    for _ in range(20):
        g.ctx, g.used = [], set()
        t = g.term(goal, (), cfg.max_size, True)
        if size(t) <= cfg.max_size:
            ctx = tuple(g.ctx)
            infer(ctx, t)
            return ctx, t
    raise GenerationStuck(f"no term of type {goal} within size {cfg.max_size}")


def gen_terms(cfg: GenConfig, count: int, goal: Type | None = None) -> list[tuple[tuple, Term]]:
    """``count`` pairs ``(context, term)``; the same config always yields the same sequence."""
    rng = random.Random(cfg.seed)
    return [gen_term(cfg, rng, goal) for _ in range(count)]


def corpus(calculus: Calculus, n: int = 500, max_size: int = 25, restricted: bool = True):
    """One term per seed ``1..n``, as the acceptance suites use."""
    out = []
    for seed in range(1, n + 1):
        cfg = GenConfig(seed=seed, max_size=max_size, calculus=calculus, restricted=restricted)
        out.append(gen_terms(cfg, 1)[0])
    return out
