"""Types and terms of the modal lambda calculus, with substitution and alpha-equality.

Terms are immutable. Every node caches its free-variable set and hash at
construction, so sharing subterms is cheap and sets/dicts keyed by terms work.

Box terms ``box [x1:T1, ..., xn:Tn] <- [N1, ..., Nn] in M`` scope their binders
over ``M`` only, and ``M`` sees *nothing* from the surrounding scope. Hence the
free variables of a box are those of its arguments, and substitution never
enters a box body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping


class Calculus(Enum):
    CBN = "cbn"
    CBV = "cbv"
    COMP = "comp"
    S4EQ = "s4"


# ---------------------------------------------------------------- types


class Type:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Type):
    name: str

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type

    def __str__(self):
        return show_type(self)


@dataclass(frozen=True)
class Box(Type):
    body: Type

    def __str__(self):
        return show_type(self)


ANSWER = Atom("R")


def arrows(*ts: Type) -> Type:
    """Right-nested arrow ``t1 -> t2 -> ... -> tn``."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Arrow(t, out)
    return out


def subformulas(t: Type) -> set[Type]:
    out = {t}
    match t:
        case Arrow(a, b):
            out |= subformulas(a) | subformulas(b)
        case Box(b):
            out |= subformulas(b)
    return out


def show_type(t: Type, spaced: bool = False) -> str:
    """Print a type. ``spaced`` puts blanks around top-level arrows only."""

    def go(t, prec):
        match t:
            case Atom(n):
                return n
            case Box(b):
                return "[]" + go(b, 1)
            case Arrow(a, b):
                s = go(a, 1) + "->" + go(b, 0)
                return f"({s})" if prec > 0 else s
        raise TypeError(f"not a type: {t!r}")

    if spaced and isinstance(t, Arrow):
        parts = []
        while isinstance(t, Arrow):
            parts.append(go(t.dom, 1))
            t = t.cod
        parts.append(go(t, 1))
        return " -> ".join(parts)
    return go(t, 0)


# ---------------------------------------------------------------- terms

_CONT = re.compile(r"[kh][0-9]*\Z")


def is_cont_name(name: str) -> bool:
    """Continuation variables (``k``, ``k3``, ``h``...) live in their own namespace."""
    return bool(_CONT.match(name))


def is_modal_name(name: str) -> bool:
    return name.startswith("@")


class Term:
    __slots__ = ()
    fv: frozenset

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .parsing import show

        return show(self)


def _init(node, fv, key):
    object.__setattr__(node, "fv", frozenset(fv))
    object.__setattr__(node, "_hash", hash(key))


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, (self.name,), ("var", self.name))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class MVar(Term):
    """Modal variable of the dual-context calculus; names carry a leading ``@``."""

    name: str
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_modal_name(self.name):
            raise ValueError(f"modal variable names start with '@': {self.name}")
        _init(self, (self.name,), ("mvar", self.name))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Const(Term):
    name: str
    ann: Type
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, (), ("const", self.name, self.ann))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Lam(Term):
    binder: str
    ann: Type
    body: Term
    admin: bool = field(default=False, compare=False)
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, self.body.fv - {self.binder}, ("lam", self.binder, self.ann, self.body))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class App(Term):
    fun: Term
    arg: Term
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, self.fun.fv | self.arg.fv, ("app", self.fun, self.arg))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class BoxIn(Term):
    binders: tuple  # of (name, Type)
    args: tuple  # of Term
    body: Term
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "binders", tuple((n, t) for n, t in self.binders))
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.binders) != len(self.args):
            raise ValueError("box binders and arguments differ in length")
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate box binders: {names}")
        fv = frozenset().union(*(a.fv for a in self.args))
        _init(self, fv, ("box", self.binders, self.args, self.body))

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.binders)

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Let(Term):
    binder: str
    bound: Term
    body: Term
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(
            self,
            self.bound.fv | (self.body.fv - {self.binder}),
            ("let", self.binder, self.bound, self.body),
        )

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class BoxUp(Term):
    """Dual-context box introduction ``boxup M``."""

    body: Term
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, self.body.fv, ("boxup", self.body))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class LetBox(Term):
    """Dual-context ``let box @a = N in M``; ``ann`` (the type of ``@a``) may be None."""

    binder: str
    ann: Type | None
    bound: Term
    body: Term
    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not is_modal_name(self.binder):
            raise ValueError(f"let box binds a modal variable, got {self.binder}")
        _init(
            self,
            self.bound.fv | (self.body.fv - {self.binder}),
            ("letbox", self.binder, self.ann, self.bound, self.body),
        )

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Hole(Term):
    """The hole ``-`` of a one-hole context."""

    fv: frozenset = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _init(self, (), ("hole",))

    __hash__ = Term.__hash__


HOLE = Hole()


def box(binders: Iterable, args: Iterable, body: Term) -> BoxIn:
    return BoxIn(tuple(binders), tuple(args), body)


def apps(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


# ------------------------------------------------------------- traversal


def children(t: Term) -> tuple:
    match t:
        case Lam(body=b) | BoxUp(body=b):
            return (b,)
        case App(f, a):
            return (f, a)
        case BoxIn(args=args, body=b):
            return (*args, b)
        case Let(bound=n, body=b) | LetBox(bound=n, body=b):
            return (n, b)
    return ()


def with_children(t: Term, kids: tuple) -> Term:
    match t:
        case Lam(x, a, _, admin):
            return Lam(x, a, kids[0], admin)
        case BoxUp():
            return BoxUp(kids[0])
        case App():
            return App(kids[0], kids[1])
        case BoxIn(bs, _, _):
            return BoxIn(bs, kids[:-1], kids[-1])
        case Let(x, _, _):
            return Let(x, kids[0], kids[1])
        case LetBox(a, ann, _, _):
            return LetBox(a, ann, kids[0], kids[1])
    return t


def subterm(t: Term, path: Iterable[int]) -> Term:
    for i in path:
        t = children(t)[i]
    return t


def replace_at(t: Term, path: tuple, new: Term) -> Term:
    if not path:
        return new
    kids = list(children(t))
    kids[path[0]] = replace_at(kids[path[0]], path[1:], new)
    return with_children(t, tuple(kids))


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def free_vars(t: Term) -> frozenset:
    return t.fv


def all_names(t: Term) -> set[str]:
    """Every variable name occurring in ``t``, bound or free."""
    out = set(t.fv)
    match t:
        case Lam(x) | Let(x) | LetBox(x):
            out.add(x)
        case BoxIn(bs):
            out.update(n for n, _ in bs)
    for c in children(t):
        out |= all_names(c)
    return out


def strip_admin(t: Term) -> Term:
    if isinstance(t, Lam):
        return Lam(t.binder, t.ann, strip_admin(t.body))
    kids = children(t)
    if not kids:
        return t
    return with_children(t, tuple(strip_admin(c) for c in kids))


# ---------------------------------------------------------- substitution


def fresh(base: str, avoid) -> str:
    """Deterministic fresh name: ``base`` minus its numeric suffix, plus the smallest free suffix."""
    stem = base.rstrip("0123456789") or base
    if stem not in avoid:
        return stem
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding ``t[s/x]``."""
    return subst_many(t, {x: s})


def subst_many(t: Term, m: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution. Box bodies are left alone."""
    m = {k: v for k, v in m.items() if k in t.fv}
    if not m:
        return t
    match t:
        case Var(x) | MVar(x):
            return m.get(x, t)
        case App(f, a):
            return App(subst_many(f, m), subst_many(a, m))
        case BoxIn(bs, args, body):
            return BoxIn(bs, tuple(subst_many(a, m) for a in args), body)
        case BoxUp(body):
            return BoxUp(subst_many(body, m))
        case Lam(x, ann, body, admin):
            x2, body2 = _under_binder(x, body, m)
            return Lam(x2, ann, body2, admin)
        case Let(x, n, body):
            x2, body2 = _under_binder(x, body, m)
            return Let(x2, subst_many(n, m), body2)
        case LetBox(a, ann, n, body):
            a2, body2 = _under_binder(a, body, m)
            return LetBox(a2, ann, subst_many(n, m), body2)
    return t


def _under_binder(x: str, body: Term, m: dict) -> tuple[str, Term]:
    m = {k: v for k, v in m.items() if k != x}
    incoming = set().union(*(v.fv for v in m.values())) if m else set()
    if x in incoming:
        x2 = fresh(x, incoming | body.fv | set(m))
        m[x] = MVar(x2) if is_modal_name(x) else Var(x2)
        x = x2
    return x, subst_many(body, m)


def rename_binder(x: str, body: Term, avoid) -> tuple[str, Term]:
    """Rename binder ``x`` of ``body`` away from ``avoid`` if needed."""
    if x not in avoid:
        return x, body
    x2 = fresh(x, set(avoid) | body.fv)
    new = MVar(x2) if is_modal_name(x) else Var(x2)
    return x2, substitute(body, x, new)


# ---------------------------------------------------------- alpha-equality


def alpha_key(t: Term, env: dict | None = None, depth: int = 0):
    """A hashable nameless form of ``t``; two terms are alpha-equal iff their keys are equal."""
    env = {} if env is None else env
    match t:
        case Var(x) | MVar(x):
            return ("b", depth - env[x]) if x in env else ("f", x)
        case Const(c, ann):
            return ("c", c, ann)
        case Hole():
            return ("hole",)
        case App(f, a):
            return ("app", alpha_key(f, env, depth), alpha_key(a, env, depth))
        case Lam(x, ann, body):
            return ("lam", ann, alpha_key(body, {**env, x: depth}, depth + 1))
        case Let(x, n, body):
            return ("let", alpha_key(n, env, depth), alpha_key(body, {**env, x: depth}, depth + 1))
        case LetBox(a, ann, n, body):
            return (
                "letbox",
                ann,
                alpha_key(n, env, depth),
                alpha_key(body, {**env, a: depth}, depth + 1),
            )
        case BoxUp(body):
            return ("up", alpha_key(body, env, depth))
        case BoxIn(bs, args, body):
            inner = {n: i for i, (n, _) in enumerate(bs)}
            return (
                "box",
                tuple(ty for _, ty in bs),
                tuple(alpha_key(a, env, depth) for a in args),
                alpha_key(body, inner, len(bs)),
            )
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(a: Term, b: Term) -> bool:
    return a == b or alpha_key(a) == alpha_key(b)
