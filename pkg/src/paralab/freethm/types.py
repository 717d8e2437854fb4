"""Single-variable System F types: AST, parser and printer."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import InputError


class ParseError(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnsupportedFeature(InputError):
    code = "unsupported-feature"


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TUnit:
    pass


@dataclass(frozen=True)
class TBool:
    pass


@dataclass(frozen=True)
class TNat:
    pass


@dataclass(frozen=True)
class TList:
    elem: "TypeExpr"


@dataclass(frozen=True)
class TProd:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class TSum:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class TArrow:
    dom: "TypeExpr"
    cod: "TypeExpr"


@dataclass(frozen=True)
class TForall:
    var: str
    body: "TypeExpr"


@dataclass(frozen=True)
class Mark:
    """A variable occurrence marked ``I`` (negative) or ``J`` (positive)."""

    side: str


TypeExpr = Union[TVar, TUnit, TBool, TNat, TList, TProd, TSum, TArrow, TForall, Mark]

_BASE = {"Unit": TUnit(), "Bool": TBool(), "Nat": TNat()}
_TOKEN = re.compile(r"\s*(?:(->|→)|(∀|forall\b)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


def _tokens(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1):
            out.append(("->", start))
        elif m.group(2):
            out.append(("forall", start))
        elif m.group(3):
            out.append((m.group(3), start))
        elif m.group(4):
            ch = m.group(4)
            if ch not in "().*+×":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append(("*" if ch == "×" else ch, start))
        pos = m.end()
    out.append(("<eof>", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.bound: str | None = None
        self.seen: set = set()

    def peek(self):
        return self.toks[self.i][0]

    def pos(self):
        return self.toks[self.i][1]

    def take(self, want=None):
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            raise ParseError(f"expected {want!r} but found {tok!r}", pos)
        self.i += 1
        return tok

    def top(self):
        if self.peek() == "forall":
            self.take()
            pos = self.pos()
            var = self.take()
            if not _is_ident(var):
                raise ParseError(f"expected a type variable, found {var!r}", pos)
            self.take(".")
            if self.peek() == "forall":
                raise UnsupportedFeature("more than one type variable (nested forall)")
            self.bound = var
            t = TForall(var, self.arrow())
        else:
            t = self.arrow()
        if self.peek() != "<eof>":
            raise ParseError(f"unexpected {self.peek()!r}", self.pos())
        if len(self.seen) > 1:
            raise UnsupportedFeature(f"more than one type variable: {', '.join(sorted(self.seen))}")
        return t

    def arrow(self):
        left = self.sum()
        if self.peek() == "->":
            self.take()
            return TArrow(left, self.arrow())
        return left

    def sum(self):
        t = self.prod()
        while self.peek() == "+":
            self.take()
            t = TSum(t, self.prod())
        return t

    def prod(self):
        t = self.app()
        while self.peek() == "*":
            self.take()
            t = TProd(t, self.app())
        return t

    def app(self):
        if self.peek() == "List":
            self.take()
            return TList(self.app())
        return self.atom()

    def atom(self):
        tok, pos = self.toks[self.i]
        if tok == "(":
            self.take()
            t = self.arrow()
            self.take(")")
            return t
        if tok == "forall":
            raise UnsupportedFeature("forall is only allowed at the outermost position")
        if tok in _BASE:
            self.take()
            return _BASE[tok]
        if _is_ident(tok):
            self.take()
            self.seen.add(tok)
            return TVar(tok)
        raise ParseError(f"unexpected {tok!r}", pos)


def _is_ident(tok: str) -> bool:
    return bool(re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok)) and tok not in ("forall", "List") and tok not in _BASE


def parse_type(text: str) -> TypeExpr:
    return _Parser(text).top()


def show_type(t: TypeExpr, prec: int = 0) -> str:
    """Print with minimal parentheses; ``parse_type(show_type(t)) == t``."""
    if isinstance(t, TForall):
        s = f"forall {t.var}. {show_type(t.body, 0)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, TArrow):
        s = f"{show_type(t.dom, 2)} -> {show_type(t.cod, 1)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, TSum):
        s = f"{show_type(t.left, 2)} + {show_type(t.right, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(t, TProd):
        s = f"{show_type(t.left, 3)} * {show_type(t.right, 4)}"
        return f"({s})" if prec > 3 else s
    if isinstance(t, TList):
        return f"List {show_type(t.elem, 4)}"
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, Mark):
        return t.side
    if isinstance(t, TUnit):
        return "Unit"
    if isinstance(t, TBool):
        return "Bool"
    if isinstance(t, TNat):
        return "Nat"
    raise InputError(f"not a type: {t!r}")


def type_vars(t: TypeExpr) -> set:
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, (TList,)):
        return type_vars(t.elem)
    if isinstance(t, (TProd, TSum)):
        return type_vars(t.left) | type_vars(t.right)
    if isinstance(t, TArrow):
        return type_vars(t.dom) | type_vars(t.cod)
    if isinstance(t, TForall):
        return type_vars(t.body)
    return set()
