"""A small call-by-value functional language for candidate implementations.

Syntax::

    fun x y -> t        \\x y. t
    let x = t in t      letrec f x y = t in t
    if t then t else t
    case t of nil -> t | cons h r -> t
    case t of inl a -> t | inr b -> t
    case t of zero -> t | succ n -> t
    case t of (a, b) -> t
    (t, t)   [t, t]   true false unit nil zero
    builtins: cons succ inl inr fst snd
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from ..errors import InputError, ResourceError
from ..values import Fn, Inj, Lst, label
from .types import ParseError


class EvalError(InputError):
    pass


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Lit:
    value: Any


@dataclass(frozen=True)
class Lam:
    params: tuple
    body: Any


@dataclass(frozen=True)
class App:
    fn: Any
    arg: Any


@dataclass(frozen=True)
class Let:
    name: str
    value: Any
    body: Any


@dataclass(frozen=True)
class LetRec:
    name: str
    params: tuple
    value: Any
    body: Any


@dataclass(frozen=True)
class If:
    cond: Any
    then: Any
    orelse: Any


@dataclass(frozen=True)
class Tuple_:
    items: tuple


@dataclass(frozen=True)
class ListLit:
    items: tuple


@dataclass(frozen=True)
class Case:
    scrutinee: Any
    alts: tuple  # (pattern, body); pattern = (tag, names)


KEYWORDS = {"fun", "let", "letrec", "in", "if", "then", "else", "case", "of", "true", "false", "unit", "nil", "zero"}
_TOK = re.compile(r"\s*(?:(--[^\n]*)|(->|[()\[\],|=\\.λ])|([A-Za-z_][A-Za-z0-9_']*)|(\d+)|(\S))")


def _lex(src: str):
    out = []
    pos = 0
    while True:
        m = _TOK.match(src, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            continue
        if m.group(5):
            raise ParseError(f"unexpected character {m.group(5)!r}", m.start(5))
        idx = m.lastindex
        out.append((m.group(idx), m.start(idx), idx))
    out.append(("<eof>", len(src), 0))
    return out


class _P:
    def __init__(self, src):
        self.t = _lex(src)
        self.i = 0

    def peek(self):
        return self.t[self.i][0]

    def take(self, want=None):
        tok, pos, _ = self.t[self.i]
        if want is not None and tok != want:
            raise ParseError(f"expected {want!r} but found {tok!r}", pos)
        self.i += 1
        return tok

    def ident(self):
        tok, pos, kind = self.t[self.i]
        if kind != 3 or tok in KEYWORDS:
            raise ParseError(f"expected a name, found {tok!r}", pos)
        self.i += 1
        return tok

    def names_until(self, stop):
        out = []
        while self.peek() != stop:
            out.append(self.ident())
        return tuple(out)

    def term(self):
        tok = self.peek()
        if tok == "fun":
            self.take()
            ps = self.names_until("->")
            self.take("->")
            return Lam(ps, self.term())
        if tok in ("\\", "λ"):
            self.take()
            ps = self.names_until(".")
            self.take(".")
            return Lam(ps, self.term())
        if tok == "let":
            self.take()
            n = self.ident()
            self.take("=")
            v = self.term()
            self.take("in")
            return Let(n, v, self.term())
        if tok == "letrec":
            self.take()
            n = self.ident()
            ps = self.names_until("=")
            self.take("=")
            v = self.term()
            self.take("in")
            return LetRec(n, ps, v, self.term())
        if tok == "if":
            self.take()
            c = self.term()
            self.take("then")
            a = self.term()
            self.take("else")
            return If(c, a, self.term())
        if tok == "case":
            self.take()
            s = self.term()
            self.take("of")
            alts = [self.alt()]
            while self.peek() == "|":
                self.take()
                alts.append(self.alt())
            return Case(s, tuple(alts))
        return self.app()

    def alt(self):
        tok, pos, _ = self.t[self.i]
        if tok in ("nil", "zero", "true", "false", "unit"):
            self.take()
            pat = (tok, ())
        elif tok == "cons":
            self.take()
            pat = ("cons", (self.ident(), self.ident()))
        elif tok in ("inl", "inr", "succ"):
            self.take()
            pat = (tok, (self.ident(),))
        elif tok == "(":
            self.take()
            a = self.ident()
            self.take(",")
            b = self.ident()
            self.take(")")
            pat = ("pair", (a, b))
        else:
            raise ParseError(f"bad case pattern {tok!r}", pos)
        self.take("->")
        return pat, self.term()

    def app(self):
        f = self.atom()
        while self.peek() not in ("<eof>", ")", "]", ",", "|", "in", "then", "else", "of", "->", "="):
            f = App(f, self.atom())
        return f

    def atom(self):
        tok, pos, kind = self.t[self.i]
        if tok == "(":
            self.take()
            if self.peek() == ")":
                self.take()
                return Lit("unit")
            items = [self.term()]
            while self.peek() == ",":
                self.take()
                items.append(self.term())
            self.take(")")
            return items[0] if len(items) == 1 else Tuple_(tuple(items))
        if tok == "[":
            self.take()
            items = []
            if self.peek() != "]":
                items.append(self.term())
                while self.peek() == ",":
                    self.take()
                    items.append(self.term())
            self.take("]")
            return ListLit(tuple(items))
        if tok in ("true", "false", "unit"):
            self.take()
            return Lit(tok)
        if tok == "nil":
            self.take()
            return Lit(Lst(()))
        if tok == "zero":
            self.take()
            return Lit(0)
        if kind == 4:
            self.take()
            return Lit(int(tok))
        if tok in ("fun", "\\", "λ", "let", "letrec", "if", "case"):
            return self.term()
        return Var(self.ident())


def parse_term(src: str):
    p = _P(src)
    t = p.term()
    if p.peek() != "<eof>":
        tok, pos, _ = p.t[p.i]
        raise ParseError(f"unexpected {tok!r}", pos)
    return t


# -- evaluation ----------------------------------------------------------------


class Closure:
    __slots__ = ("params", "body", "env")

    def __init__(self, params, body, env):
        self.params, self.body, self.env = params, body, env

    def __repr__(self):
        return f"<closure {' '.join(self.params)}>"


class Builtin:
    __slots__ = ("name", "arity", "fn", "args")

    def __init__(self, name, arity, fn, args=()):
        self.name, self.arity, self.fn, self.args = name, arity, fn, args

    def __repr__(self):
        return f"<builtin {self.name}>"


def _cons(x, xs):
    if not isinstance(xs, Lst):
        raise EvalError(f"cons onto a non-list {label(xs)}")
    return Lst((x,) + xs.items)


def _succ(n):
    if not isinstance(n, int):
        raise EvalError(f"succ of a non-number {n!r}")
    return n + 1


def _proj(k):
    def f(p):
        if not isinstance(p, tuple) or len(p) != 2:
            raise EvalError("projection from a non-pair")
        return p[k]
    return f


BUILTINS = {
    "cons": Builtin("cons", 2, _cons),
    "succ": Builtin("succ", 1, _succ),
    "inl": Builtin("inl", 1, lambda x: Inj(0, x)),
    "inr": Builtin("inr", 1, lambda x: Inj(1, x)),
    "fst": Builtin("fst", 1, _proj(0)),
    "snd": Builtin("snd", 1, _proj(1)),
}


class Machine:
    """Evaluator with a shared step budget."""

    def __init__(self, step_budget: int = 100_000):
        self.budget = step_budget
        self.steps = 0

    def tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise ResourceError(f"evaluation exceeded the step budget of {self.budget}")

    def eval(self, t, env: dict):
        self.tick()
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            if t.name in BUILTINS:
                return BUILTINS[t.name]
            raise EvalError(f"unbound name {t.name}")
        if isinstance(t, Lit):
            return t.value
        if isinstance(t, Lam):
            return Closure(t.params, t.body, env)
        if isinstance(t, App):
            return self.apply(self.eval(t.fn, env), self.eval(t.arg, env))
        if isinstance(t, Let):
            return self.eval(t.body, {**env, t.name: self.eval(t.value, env)})
        if isinstance(t, LetRec):
            inner = dict(env)
            inner[t.name] = Closure(t.params, t.value, inner) if t.params else None
            if not t.params:
                inner[t.name] = self.eval(t.value, inner)
            return self.eval(t.body, {**env, t.name: inner[t.name]})
        if isinstance(t, If):
            c = self.eval(t.cond, env)
            if c not in ("true", "false"):
                raise EvalError(f"if on a non-boolean {label(c)}")
            return self.eval(t.then if c == "true" else t.orelse, env)
        if isinstance(t, Tuple_):
            vals = tuple(self.eval(x, env) for x in t.items)
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = (v, out)
            return out
        if isinstance(t, ListLit):
            return Lst(tuple(self.eval(x, env) for x in t.items))
        if isinstance(t, Case):
            return self.case(self.eval(t.scrutinee, env), t.alts, env)
        raise EvalError(f"not a term: {t!r}")

    def case(self, v, alts, env):
        for (tag, names), body in alts:
            bind = None
            if tag == "nil" and isinstance(v, Lst) and not v.items:
                bind = ()
            elif tag == "cons" and isinstance(v, Lst) and v.items:
                bind = (v.items[0], Lst(v.items[1:]))
            elif tag in ("inl", "inr") and isinstance(v, Inj) and v.side == (tag == "inr"):
                bind = (v.value,)
            elif tag == "zero" and v == 0 and isinstance(v, int):
                bind = ()
            elif tag == "succ" and isinstance(v, int) and not isinstance(v, bool) and v > 0:
                bind = (v - 1,)
            elif tag == "pair" and isinstance(v, tuple) and len(v) == 2:
                bind = v
            elif tag in ("true", "false", "unit") and v == tag:
                bind = ()
            if bind is not None:
                return self.eval(body, {**env, **dict(zip(names, bind))})
        raise EvalError(f"no case alternative matches {label(v)}")

    def apply(self, f, x):
        self.tick()
        if isinstance(f, Closure):
            env = {**f.env, f.params[0]: x}
            if len(f.params) > 1:
                return Closure(f.params[1:], f.body, env)
            return self.eval(f.body, env)
        if isinstance(f, Builtin):
            args = f.args + (x,)
            if len(args) < f.arity:
                return Builtin(f.name, f.arity, f.fn, args)
            return f.fn(*args)
        if isinstance(f, Fn):
            try:
                return f(x)
            except KeyError:
                raise EvalError(f"argument {label(x)} outside the table's domain") from None
        if callable(f):
            return f(x)
        raise EvalError(f"application of a non-function {label(f)}")


def eval_term(term, args=(), env: dict | None = None, step_budget: int = 100_000):
    """Evaluate a closed term and apply it to ``args`` in order."""
    if isinstance(term, str):
        term = parse_term(term)
    m = Machine(step_budget)
    v = m.eval(term, dict(env or {}))
    for a in args:
        v = m.apply(v, a)
    return v
