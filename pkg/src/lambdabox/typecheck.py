"""Syntax-directed type inference for the shared typing rules of all three calculi.

A box body is checked under exactly its own binders, each argument against the
boxed binder type under the outer context. ``let x = N in M`` types ``M`` under
``x`` bound to the type of ``N``.
"""

from __future__ import annotations

from typing import Iterator

from .syntax import (
    App,
    Arrow,
    Box,
    BoxIn,
    BoxUp,
    Const,
    Hole,
    Lam,
    Let,
    LetBox,
    MVar,
    Term,
    Type,
    Var,
    show_type,
    subformulas,
)


class LambdaBoxTypeError(Exception):
    """Base class of typing failures; ``path`` locates the offending subterm."""

    def __init__(self, msg: str, path: tuple = ()):
        loc = "/".join(map(str, path)) or "root"
        super().__init__(f"at {loc}: {msg}")
        self.path = path


class UnboundVariable(LambdaBoxTypeError):
    def __init__(self, name: str, path: tuple = ()):
        super().__init__(f"unbound variable {name}", path)
        self.name = name


class TypeMismatch(LambdaBoxTypeError):
    def __init__(self, expected, found: Type, path: tuple = ()):
        exp = expected if isinstance(expected, str) else show_type(expected)
        super().__init__(f"expected {exp}, found {show_type(found)}", path)
        self.expected = expected
        self.found = found


class BoxArityMismatch(LambdaBoxTypeError):
    pass


class BodyUsesOuterVariable(LambdaBoxTypeError):
    def __init__(self, names, path: tuple = ()):
        super().__init__(f"box body uses variables outside its binders: {', '.join(sorted(names))}", path)
        self.names = set(names)


class ModalVariableInOrdinaryPosition(LambdaBoxTypeError):
    pass


class NotNormalForm(Exception):
    pass


def lookup(ctx, x: str):
    for name, ty in reversed(ctx):
        if name == x:
            return ty
    return None


def infer(ctx, t: Term, path: tuple = ()) -> Type:
    """The unique type of ``t`` under ``ctx`` (a sequence of ``(name, Type)``, rightmost wins)."""
    match t:
        case Const(_, ann):
            return ann
        case Var(x):
            ty = lookup(ctx, x)
            if ty is None:
                raise UnboundVariable(x, path)
            return ty
        case Lam(x, ann, body):
            return Arrow(ann, infer((*ctx, (x, ann)), body, path + (0,)))
        case App(f, a):
            tf = infer(ctx, f, path + (0,))
            if not isinstance(tf, Arrow):
                raise TypeMismatch("a function type", tf, path + (0,))
            ta = infer(ctx, a, path + (1,))
            if ta != tf.dom:
                raise TypeMismatch(tf.dom, ta, path + (1,))
            return tf.cod
        case BoxIn(bs, args, body):
            if len(bs) != len(args):
                raise BoxArityMismatch(f"{len(bs)} binders, {len(args)} arguments", path)
            outer = body.fv - set(t.names)
            if outer:
                raise BodyUsesOuterVariable(outer, path + (len(args),))
            for i, ((_, sigma), a) in enumerate(zip(bs, args)):
                ta = infer(ctx, a, path + (i,))
                if ta != Box(sigma):
                    raise TypeMismatch(Box(sigma), ta, path + (i,))
            return Box(infer(bs, body, path + (len(args),)))
        case Let(x, n, body):
            tn = infer(ctx, n, path + (0,))
            return infer((*ctx, (x, tn)), body, path + (1,))
        case MVar() | BoxUp() | LetBox():
            raise ModalVariableInOrdinaryPosition(
                "dual-context syntax in a box-calculus term (use dual_infer)", path
            )
        case Hole():
            raise LambdaBoxTypeError("a context hole has no type", path)
    raise TypeError(f"not a term: {t!r}")


def typable(ctx, t: Term) -> bool:
    try:
        infer(ctx, t)
    except LambdaBoxTypeError:
        return False
    return True


def check_subject_reduction(ctx, t: Term, step) -> bool:
    """Does the reduct of ``step`` keep the type of ``t``? False signals a bug."""
    try:
        return infer(ctx, step.result) == infer(ctx, t)
    except LambdaBoxTypeError:
        return False


def derivation_types(ctx, t: Term) -> Iterator[Type]:
    """Every type occurring in the typing derivation of ``t``: subjects and binder annotations."""
    yield infer(ctx, t)
    match t:
        case Lam(x, ann, body):
            yield ann
            yield from derivation_types((*ctx, (x, ann)), body)
        case App(f, a):
            yield from derivation_types(ctx, f)
            yield from derivation_types(ctx, a)
        case BoxIn(bs, args, body):
            for _, sigma in bs:
                yield sigma
            for a in args:
                yield from derivation_types(ctx, a)
            yield from derivation_types(bs, body)
        case Let(x, n, body):
            yield from derivation_types(ctx, n)
            yield from derivation_types((*ctx, (x, infer(ctx, n))), body)


def _constants(t: Term) -> Iterator[Const]:
    if isinstance(t, Const):
        yield t
    from .syntax import children

    for c in children(t):
        yield from _constants(c)


def subformula_check(ctx, t: Term) -> bool:
    """Subformula property of a cbn normal form.

    Constants behave as hypotheses, so their annotations join the context
    types as admissible roots.
    """
    from .cbn import cbn_redexes

    if next(iter(cbn_redexes(t)), None) is not None:
        raise NotNormalForm("term has a call-by-name redex")
    roots = [ty for _, ty in ctx] + [c.ann for c in _constants(t)] + [infer(ctx, t)]
    allowed = set().union(*(subformulas(r) for r in roots))
    return all(ty in allowed for ty in derivation_types(ctx, t))
