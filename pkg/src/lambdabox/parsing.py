"""Concrete syntax: a hand-written lexer/recursive-descent parser and the matching printer.

Grammar (``--`` starts a comment)::

    type  ::= unary ('->' type)?           unary ::= '[]' unary | atom | '(' type ')'
    term  ::= '\\' x ':' type '.' term
            | 'box' '[' (x ':' type),* ']' '<-' '[' term,* ']' 'in' term
            | 'let' x '=' term 'in' term
            | 'let' 'box' @a (':' type)? '=' term 'in' term
            | 'boxup' term
            | atom+
    atom  ::= x | @a | c ':' unary | 'counit@' unary | 'comult@' unary | '-' | '(' term ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    HOLE,
    App,
    Arrow,
    Atom,
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
    is_cont_name,
    show_type,
)

KEYWORDS = {"box", "in", "let", "boxup"}
S4_CONSTS = {"counit", "comult"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<s4>(?:counit|comult)@)
  | (?P<mvar>@[A-Za-z_][A-Za-z0-9_']*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|<-|\[\]|[\\.:(),=\[\]-])
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, line, pos - line_start + 1))
        for i, ch in enumerate(text):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


class Parser:
    def __init__(self, src: str, cps: bool = False):
        self.toks = tokenize(src)
        self.i = 0
        self.cps = cps

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str):
        raise ParseError(msg, self.tok.line, self.tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("op", "kw")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.error(f"expected identifier, found {self.tok.text or 'end of input'!r}")
        name = self.tok.text
        if is_cont_name(name) and not self.cps:
            self.error(f"{name!r} is a reserved continuation variable (allowed only in CPS mode)")
        self.i += 1
        return name

    def mvar(self) -> str:
        if self.tok.kind != "mvar":
            self.error(f"expected modal variable, found {self.tok.text!r}")
        name = self.tok.text
        self.i += 1
        return name

    def done(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.text!r}")

    # types

    def type(self) -> Type:
        t = self.unary_type()
        if self.at("->"):
            self.i += 1
            return Arrow(t, self.type())
        return t

    def unary_type(self) -> Type:
        if self.at("[]") or (self.at("[") and self.toks[self.i + 1].text == "]"):
            self.i += 1 if self.at("[]") else 2
            return Box(self.unary_type())
        if self.at("("):
            self.i += 1
            t = self.type()
            self.expect(")")
            return t
        if self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            name = self.tok.text
            self.i += 1
            return Atom(name)
        self.error(f"expected a type, found {self.tok.text or 'end of input'!r}")

    # terms

    def term(self) -> Term:
        if self.at("\\"):
            self.i += 1
            x = self.ident()
            self.expect(":")
            ann = self.type()
            self.expect(".")
            return Lam(x, ann, self.term())
        if self.at("box"):
            self.i += 1
            binders = self.bracketed(self.binder)
            self.expect("<-")
            args = self.bracketed(self.term)
            self.expect("in")
            body = self.term()
            if len(binders) != len(args):
                self.error(f"box has {len(binders)} binders but {len(args)} arguments")
            if len({n for n, _ in binders}) != len(binders):
                self.error("duplicate box binders")
            return BoxIn(tuple(binders), tuple(args), body)
        if self.at("let"):
            self.i += 1
            if self.at("box"):
                self.i += 1
                a = self.mvar()
                ann = None
                if self.at(":"):
                    self.i += 1
                    ann = self.type()
                self.expect("=")
                n = self.term()
                self.expect("in")
                return LetBox(a, ann, n, self.term())
            x = self.ident()
            self.expect("=")
            n = self.term()
            self.expect("in")
            return Let(x, n, self.term())
        if self.at("boxup"):
            self.i += 1
            return BoxUp(self.term())
        t = self.atom()
        while self.starts_atom():
            t = App(t, self.atom())
        if self.starts_binder():
            t = App(t, self.term())
        return t

    def bracketed(self, item) -> list:
        if self.at("[]"):
            self.i += 1
            return []
        self.expect("[")
        out = []
        while not self.at("]"):
            out.append(item())
            if not self.at("]"):
                self.expect(",")
        self.expect("]")
        return out

    def binder(self) -> tuple:
        x = self.ident()
        self.expect(":")
        return x, self.type()

    def starts_atom(self) -> bool:
        k = self.tok.kind
        return k in ("ident", "mvar", "s4") or self.at("(") or self.at("-")

    def starts_binder(self) -> bool:
        return self.at("\\") or self.at("box") or self.at("let") or self.at("boxup")

    def atom(self) -> Term:
        tok = self.tok
        if tok.kind == "s4":
            self.i += 1
            sigma = self.unary_type()
            if tok.text == "counit@":
                return Const("counit", Arrow(Box(sigma), sigma))
            return Const("comult", Arrow(Box(sigma), Box(Box(sigma))))
        if tok.kind == "mvar":
            self.i += 1
            return MVar(tok.text)
        if tok.kind == "ident":
            if self.toks[self.i + 1].text == ":":
                name = tok.text
                self.i += 2
                return Const(name, self.unary_type())
            return Var(self.ident())
        if self.at("-"):
            self.i += 1
            return HOLE
        if self.at("("):
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse(src: str, cps: bool = False) -> Term:
    """Parse one term. ``cps=True`` admits continuation variables (``k``, ``h``...)."""
    p = Parser(src, cps)
    t = p.term()
    p.done()
    return t


def parse_type(src: str) -> Type:
    p = Parser(src)
    t = p.type()
    p.done()
    return t


def parse_context(src: str, cps: bool = False) -> tuple:
    """``x:[]p, f:p->q`` into a typing context (tuple of pairs); ``@a:p`` entries are modal."""
    p = Parser(src, cps)
    out = []
    while p.tok.kind != "eof":
        x = p.mvar() if p.tok.kind == "mvar" else p.ident()
        p.expect(":")
        out.append((x, p.type()))
        if p.tok.kind != "eof":
            p.expect(",")
    return tuple(out)


# ---------------------------------------------------------------- printer


def _const(t: Const) -> str:
    ann = t.ann
    if t.name in S4_CONSTS and isinstance(ann, Arrow) and isinstance(ann.dom, Box):
        sigma = ann.dom.body
        if t.name == "counit" and ann.cod == sigma or t.name == "comult" and ann.cod == Box(ann.dom):
            return f"{t.name}@{_atomic_type(sigma)}"
    return f"{t.name}:{_atomic_type(ann)}"


def _atomic_type(t: Type) -> str:
    s = show_type(t)
    return f"({s})" if isinstance(t, Arrow) else s


def show(t: Term) -> str:
    """Print a term in the concrete grammar; ``parse(show(t))`` gives ``t`` back."""
    return _show(t, 0)


def _show(t: Term, prec: int) -> str:
    # prec 0: anything; 1: function position; 2: argument position
    match t:
        case Var(x) | MVar(x):
            return x
        case Const():
            return _const(t)
        case Hole():
            return "-"
        case App(f, a):
            s = f"{_show(f, 1)} {_show(a, 2)}"
            return f"({s})" if prec == 2 else s
    match t:
        case Lam(x, ann, body):
            s = f"\\{x}:{show_type(ann)}. {_show(body, 0)}"
        case BoxIn(bs, args, body):
            b = ", ".join(f"{x}:{show_type(ty)}" for x, ty in bs)
            a = ", ".join(_show(n, 0) for n in args)
            s = f"box [{b}] <- [{a}] in {_show(body, 0)}"
        case Let(x, n, body):
            s = f"let {x} = {_show(n, 0)} in {_show(body, 0)}"
        case LetBox(a, ann, n, body):
            head = a if ann is None else f"{a}:{show_type(ann)}"
            s = f"let box {head} = {_show(n, 0)} in {_show(body, 0)}"
        case BoxUp(body):
            s = f"boxup {_show(body, 0)}"
        case _:
            raise TypeError(f"not a term: {t!r}")
    return f"({s})" if prec > 0 else s
