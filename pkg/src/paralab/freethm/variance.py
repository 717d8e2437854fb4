"""Variance marking, symbolic map terms, and their finite interpretation."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Union

from ..errors import InputError, ResourceError
from ..values import Fn, Inj, Lst, all_functions, canon, count_functions
from .types import (
    Mark,
    TArrow,
    TBool,
    TForall,
    TList,
    TNat,
    TProd,
    TSum,
    TUnit,
    TVar,
    TypeExpr,
    show_type,
)

BOOL = ("false", "true")
UNIT = ("unit",)


@dataclass(frozen=True)
class SemDifunctor:
    """A type with every occurrence of the variable marked by polarity."""

    body: TypeExpr

    def __str__(self) -> str:
        return show_type(self.body)

    @property
    def covariant(self) -> bool:
        return "I" not in marks(self.body)

    @property
    def contravariant(self) -> bool:
        return "J" not in marks(self.body)


def marks(t) -> set:
    if isinstance(t, Mark):
        return {t.side}
    if isinstance(t, TList):
        return marks(t.elem)
    if isinstance(t, (TProd, TSum)):
        return marks(t.left) | marks(t.right)
    if isinstance(t, TArrow):
        return marks(t.dom) | marks(t.cod)
    return set()


def split_variance(t: TypeExpr, var: str | None = None) -> SemDifunctor:
    if isinstance(t, TForall):
        var = t.var if var is None else var
        t = t.body

    def go(t, positive: bool):
        if isinstance(t, TVar):
            if var is not None and t.name != var:
                raise InputError(f"type variable {t.name} is not bound")
            return Mark("J" if positive else "I")
        if isinstance(t, TList):
            return TList(go(t.elem, positive))
        if isinstance(t, TProd):
            return TProd(go(t.left, positive), go(t.right, positive))
        if isinstance(t, TSum):
            return TSum(go(t.left, positive), go(t.right, positive))
        if isinstance(t, TArrow):
            return TArrow(go(t.dom, not positive), go(t.cod, positive))
        return t

    return SemDifunctor(go(t, True))


# -- map terms -----------------------------------------------------------------


@dataclass(frozen=True)
class MId:
    pass


@dataclass(frozen=True)
class MI2:
    pass


@dataclass(frozen=True)
class MList:
    elem: "MapTerm"


@dataclass(frozen=True)
class MProd:
    left: "MapTerm"
    right: "MapTerm"


@dataclass(frozen=True)
class MSum:
    left: "MapTerm"
    right: "MapTerm"


@dataclass(frozen=True)
class MArrow:
    """``f -> post . f . pre``; ``dom`` is the marked domain type."""

    pre: "MapTerm"
    post: "MapTerm"
    dom: TypeExpr


MapTerm = Union[MId, MI2, MList, MProd, MSum, MArrow]


def is_identity(m) -> bool:
    if isinstance(m, MId):
        return True
    if isinstance(m, MI2):
        return False
    if isinstance(m, MList):
        return is_identity(m.elem)
    if isinstance(m, (MProd, MSum)):
        return is_identity(m.left) and is_identity(m.right)
    if isinstance(m, MArrow):
        return is_identity(m.pre) and is_identity(m.post)
    raise InputError(f"not a map term: {m!r}")


def derive_maps(s: SemDifunctor):
    """``(map+ i2, map- i2)`` as map terms following the shape of the type."""

    def build(t, co: bool, mode: str):
        if isinstance(t, Mark):
            moving = "J" if mode == "+" else "I"
            return MI2() if t.side == moving else MId()
        if isinstance(t, TList):
            return MList(build(t.elem, co, mode))
        if isinstance(t, TProd):
            return MProd(build(t.left, co, mode), build(t.right, co, mode))
        if isinstance(t, TSum):
            return MSum(build(t.left, co, mode), build(t.right, co, mode))
        if isinstance(t, TArrow):
            return MArrow(build(t.dom, not co, mode), build(t.cod, co, mode), t.dom)
        return MId()

    return build(s.body, True, "+"), build(s.body, True, "-")


# -- finite interpretation ------------------------------------------------------


@dataclass(frozen=True)
class Env:
    I: tuple
    J: tuple
    list_bound: int = 3
    nat_bound: int = 3
    budget: int = 200_000


def type_values(t, env: Env) -> tuple:
    """All values of a marked type with ``I``, ``J`` read from ``env``."""
    if isinstance(t, Mark):
        return env.I if t.side == "I" else env.J
    if isinstance(t, TUnit):
        return UNIT
    if isinstance(t, TBool):
        return BOOL
    if isinstance(t, TNat):
        return tuple(range(env.nat_bound))
    if isinstance(t, TList):
        xs = type_values(t.elem, env)
        if sum(len(xs) ** k for k in range(env.list_bound + 1)) > env.budget:
            raise ResourceError("list values over budget")
        return tuple(Lst(p) for k in range(env.list_bound + 1) for p in itertools.product(xs, repeat=k))
    if isinstance(t, TProd):
        return tuple(itertools.product(type_values(t.left, env), type_values(t.right, env)))
    if isinstance(t, TSum):
        return tuple([Inj(0, x) for x in type_values(t.left, env)] + [Inj(1, y) for y in type_values(t.right, env)])
    if isinstance(t, TArrow):
        dom, cod = type_values(t.dom, env), type_values(t.cod, env)
        if count_functions(len(dom), len(cod)) > env.budget:
            raise ResourceError(f"function space {show_type(t)} over budget")
        return tuple(all_functions(canon(dom), canon(cod)))
    if isinstance(t, TVar):
        raise InputError("unmarked type variable; run split_variance first")
    raise InputError(f"not a type: {t!r}")


@lru_cache(maxsize=4096)
def cached_values(t, env: Env) -> tuple:
    return type_values(t, env)


def compile_map(m, i2: Fn, src: Env, tgt: Env) -> Callable:
    """``apply_map`` specialised to fixed ``i2`` and environments."""
    if is_identity(m):
        return lambda v: v
    if isinstance(m, MI2):
        table = i2.as_dict()
        return table.__getitem__
    if isinstance(m, MList):
        f = compile_map(m.elem, i2, src, tgt)
        return lambda v: Lst(tuple(map(f, v.items)))
    if isinstance(m, MProd):
        f, g = compile_map(m.left, i2, src, tgt), compile_map(m.right, i2, src, tgt)
        return lambda v: (f(v[0]), g(v[1]))
    if isinstance(m, MSum):
        fs = (compile_map(m.left, i2, src, tgt), compile_map(m.right, i2, src, tgt))
        return lambda v: Inj(v.side, fs[v.side](v.value))
    if isinstance(m, MArrow):
        pre, post = compile_map(m.pre, i2, tgt, src), compile_map(m.post, i2, src, tgt)
        dom = cached_values(m.dom, tgt)
        return lambda v: Fn({y: post(v(pre(y))) for y in dom})
    raise InputError(f"not a map term: {m!r}")


def apply_map(m, v, i2: Fn, src: Env, tgt: Env):
    """Apply a map term taking values at ``src`` to values at ``tgt``."""
    if isinstance(m, MId):
        return v
    if isinstance(m, MI2):
        return i2(v)
    if isinstance(m, MList):
        return Lst(tuple(apply_map(m.elem, x, i2, src, tgt) for x in v.items))
    if isinstance(m, MProd):
        return (apply_map(m.left, v[0], i2, src, tgt), apply_map(m.right, v[1], i2, src, tgt))
    if isinstance(m, MSum):
        return Inj(v.side, apply_map(m.left if v.side == 0 else m.right, v.value, i2, src, tgt))
    if isinstance(m, MArrow):
        return Fn({
            y: apply_map(m.post, v(apply_map(m.pre, y, i2, tgt, src)), i2, src, tgt)
            for y in type_values(m.dom, tgt)
        })
    raise InputError(f"not a map term: {m!r}")


def plus_envs(A, B, **kw):
    """``map+ i2 : T(A, A) -> T(A, B)``."""
    return Env(A, A, **kw), Env(A, B, **kw)


def minus_envs(A, B, **kw):
    """``map- i2 : T(B, B) -> T(A, B)``."""
    return Env(B, B, **kw), Env(A, B, **kw)


# -- rendering -----------------------------------------------------------------


def _paren(s: str) -> str:
    if " " not in s and "∘" not in s:
        return s
    depth = 0
    if s[0] in "([":
        for k, ch in enumerate(s):
            depth += ch in "(["
            depth -= ch in ")]"
            if depth == 0:
                if k == len(s) - 1:
                    return s
                break
    return f"({s})"


def fn_text(m) -> str | None:
    """A point-free rendering for simple maps, ``None`` for the identity."""
    if is_identity(m):
        return None
    if isinstance(m, MI2):
        return "i2"
    if isinstance(m, MList):
        inner = fn_text(m.elem)
        return None if inner is None else f"map {_paren(inner)}"
    if isinstance(m, MProd):
        a, b = fn_text(m.left) or "id", fn_text(m.right) or "id"
        return f"{a} × {b}"
    return None


def _simple(m) -> bool:
    return is_identity(m) or isinstance(m, MI2) or (isinstance(m, MList) and _simple(m.elem)) or (
        isinstance(m, MProd) and _simple(m.left) and _simple(m.right)
    )


class Names:
    """Fresh variable names chosen by type."""

    def __init__(self, taken=()):
        self.taken = set(taken) | {"f", "i2", "map", "id", "fst", "snd"}

    def fresh(self, base: str) -> str:
        pool = {"x": ["x", "y", "z", "w"], "xs": ["xs", "ys", "zs"], "h": ["h", "k", "g"]}.get(base, [base])
        for n in pool + [f"{base}{k}" for k in range(1, 100)]:
            if n not in self.taken:
                self.taken.add(n)
                return n
        raise ResourceError("ran out of variable names")

    def pattern(self, t):
        """A name, or a tuple of names for products."""
        if isinstance(t, TProd):
            return (self.pattern(t.left), self.pattern(t.right))
        return self.fresh(base_name(t))


def base_name(t) -> str:
    if isinstance(t, Mark):
        return "x"
    if isinstance(t, TList):
        return "xs" if isinstance(t.elem, Mark) else "ls"
    if isinstance(t, TArrow):
        return "h"
    if isinstance(t, TBool):
        return "b"
    if isinstance(t, TNat):
        return "n"
    if isinstance(t, TUnit):
        return "u"
    if isinstance(t, TSum):
        return "s"
    return "p"


def pattern_text(p) -> str:
    if isinstance(p, tuple):
        return "(" + ", ".join(pattern_text(q) for q in p) + ")"
    return p


def pattern_names(p) -> list:
    if isinstance(p, tuple):
        return [n for q in p for n in pattern_names(q)]
    return [p]


def render_map(m, arg, names: Names | None = None) -> str:
    """Beta-normal text for ``m`` applied to ``arg`` (a name, pattern or term)."""
    names = names or Names()
    if is_identity(m):
        return pattern_text(arg)
    if isinstance(m, MI2):
        return f"i2 {_paren(pattern_text(arg))}"
    if isinstance(m, MList):
        inner = fn_text(m.elem)
        if inner is None:
            v = names.fresh("x")
            inner = f"(λ{v}. {render_map(m.elem, v, names)})"
        return f"map {_paren(inner)} {_paren(pattern_text(arg))}"
    if isinstance(m, MProd):
        if isinstance(arg, tuple):
            return f"({render_map(m.left, arg[0], names)}, {render_map(m.right, arg[1], names)})"
        a = _paren(pattern_text(arg))
        return f"({render_map(m.left, f'fst {a}', names)}, {render_map(m.right, f'snd {a}', names)})"
    if isinstance(m, MSum):
        l, r = names.fresh("l"), names.fresh("r")
        return (f"case {pattern_text(arg)} of inl {l} -> inl {_paren(render_map(m.left, l, names))}"
                f" | inr {r} -> inr {_paren(render_map(m.right, r, names))}")
    if isinstance(m, MArrow):
        f = pattern_text(arg)
        if _simple(m.pre) and _simple(m.post):
            parts = [fn_text(m.post), f, fn_text(m.pre)]
            return "∘".join(f"({x})" if " " in x else x for x in parts if x is not None)
        p = names.pattern(m.dom)
        inner = render_map(m.pre, p, names)
        body = render_map(m.post, f"{_paren(f)} {_paren(inner)}", names)
        return f"λ{pattern_text(p)}. {body}"
    raise InputError(f"not a map term: {m!r}")
