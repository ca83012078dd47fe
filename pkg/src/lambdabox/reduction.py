"""Rule-set-agnostic reduction: congruence closure, normalization, bounded reachability.

A *rule* is a function ``rule(t, ctx)`` yielding ``(label, contractum)`` for
each way it applies at the root of ``t``. ``ctx`` is the typing context at that
position (a tuple of ``(name, Type)``; ``let`` binders carry ``None``), which
only rules that must invent annotations consult.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

from .syntax import (
    BoxIn,
    Calculus,
    Lam,
    Let,
    Term,
    alpha_key,
    children,
    replace_at,
    with_children,
)

DEFAULT_FUEL = 100_000


class RuleLabel(Enum):
    BetaArrow = "beta"
    EtaArrow = "eta"
    IdBox = "id-box"
    BetaBox = "beta-box"
    IdArrow = "id"
    BetaArrowV = "beta-v"
    EtaArrowV = "eta-v"
    Lift = "lift"
    Flat = "flat"
    BetaOmega = "beta-omega"
    BetaBoxV = "beta-v-box"
    IdLet = "id-let"
    BetaLetV = "beta-v-let"
    Comp = "comp"
    LetIntro = "let"

    def __str__(self):
        return self.value


IdBoxV = RuleLabel.IdBox

Rule = Callable[[Term, tuple], Iterable[tuple]]


class FuelExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class ReductionStep:
    label: RuleLabel
    position: tuple
    result: Term
    redex: Term
    contractum: Term


def child_ctx(t: Term, i: int, ctx: tuple) -> tuple:
    match t:
        case Lam(x, ann):
            return (*ctx, (x, ann))
        case BoxIn(bs, args):
            return bs if i == len(args) else ctx
        case Let(x):
            return ctx if i == 0 else (*ctx, (x, None))
    return ctx


def steps(t: Term, rules: Iterable[Rule], ctx: tuple = ()) -> Iterator[ReductionStep]:
    """Every one-step reduct of ``t`` under full congruence, root first, then children left to right."""
    rules = tuple(rules)
    yield from _steps(t, t, rules, ctx, ())


def _steps(whole, t, rules, ctx, path):
    for rule in rules:
        for label, r in rule(t, ctx):
            yield ReductionStep(label, path, replace_at(whole, path, r), t, r)
    for i, c in enumerate(children(t)):
        yield from _steps(whole, c, rules, child_ctx(t, i, ctx), path + (i,))


def reducts(t: Term, rules, ctx: tuple = ()) -> list[ReductionStep]:
    return list(steps(t, rules, ctx))


def is_normal(t: Term, rules, ctx: tuple = ()) -> bool:
    return next(steps(t, rules, ctx), None) is None


class _Fuel:
    def __init__(self, fuel):
        self.left = fuel
        self.used = 0

    def burn(self):
        if self.left is not None and self.used >= self.left:
            raise FuelExhausted(f"no normal form within {self.left} steps")
        self.used += 1


def normalize(
    t: Term,
    rules: Iterable[Rule],
    ctx: tuple = (),
    fuel: int | None = DEFAULT_FUEL,
    trace: list | None = None,
) -> tuple[Term, int]:
    """Normal form of ``t`` and the number of steps taken.

    The strategy is innermost (children first, then the root). Confluence makes
    the result independent of that choice. ``trace``, when given, receives
    ``(label, path, redex, contractum)`` per step.
    """
    f = _Fuel(fuel)
    out = _norm(t, tuple(rules), ctx, (), f, trace)
    return out, f.used


def _norm(t, rules, ctx, path, fuel, trace):
    while True:
        kids = children(t)
        if kids:
            new = tuple(_norm(c, rules, child_ctx(t, i, ctx), path + (i,), fuel, trace) for i, c in enumerate(kids))
            if any(a is not b for a, b in zip(new, kids)):
                t = with_children(t, new)
        for rule in rules:
            hit = next(iter(rule(t, ctx)), None)
            if hit is not None:
                fuel.burn()
                if trace is not None:
                    trace.append((hit[0], path, t, hit[1]))
                t = hit[1]
                break
        else:
            return t


def reachable(
    src: Term,
    target: Term,
    rules,
    ctx: tuple = (),
    max_depth: int = 50,
    max_nodes: int = 20_000,
    min_steps: int = 1,
):
    """Is ``target`` reachable from ``src`` (up to alpha) in ``min_steps`` or more steps?

    True when found; False when the whole reachable set was explored without a
    hit; None when the depth or node bound cut the search short.
    """
    goal = alpha_key(target)
    start = alpha_key(src)
    if min_steps == 0 and start == goal:
        return True
    seen = {start}
    frontier = deque([(src, 0)])
    cut = False
    while frontier:
        t, d = frontier.popleft()
        if d >= max_depth:
            cut = True
            continue
        for st in steps(t, rules, ctx):
            k = alpha_key(st.result)
            if k == goal:
                return True
            if k in seen:
                continue
            if len(seen) >= max_nodes:
                return None
            seen.add(k)
            frontier.append((st.result, d + 1))
    return None if cut else False


def rules_for(calc: Calculus) -> tuple:
    from .cbn import CBN_RULES
    from .cbv import CBV_RULES
    from .comp import COMP_RULES

    return {Calculus.CBN: CBN_RULES, Calculus.CBV: CBV_RULES, Calculus.COMP: COMP_RULES}[calc]
