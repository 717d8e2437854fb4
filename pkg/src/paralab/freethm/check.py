"""Brute-force checking of candidate implementations against their free theorem."""
from __future__ import annotations

import functools
import inspect
from dataclasses import dataclass, field
from typing import Callable, Mapping

from ..errors import InputError
from ..values import Fn, Inj, Lst, all_functions, from_json, label
from .interp import Builtin, EvalError, Machine, parse_term
from .theorem import TheoremParts, theorem_parts
from .types import Mark, TArrow, TBool, TList, TNat, TProd, TSum, TUnit
from .variance import Env, apply_map, compile_map, minus_envs, plus_envs, type_values


def carrier(n: int) -> tuple:
    return tuple(str(k) for k in range(n))


class TermCandidate:
    def __init__(self, source):
        self.source = source if isinstance(source, str) else None
        self.term = parse_term(source) if isinstance(source, str) else source

    def run(self, A: tuple, args: tuple, machine: Machine):
        v = machine.eval(self.term, {})
        for a in args:
            v = machine.apply(v, a)
        return v


class TableCandidate:
    """Explicit tables per instantiation size: ``{size: Fn(d0 -> result)}``."""

    def __init__(self, tables: Mapping):
        self.tables = {int(k): v for k, v in tables.items()}

    @classmethod
    def from_json(cls, j) -> "TableCandidate":
        try:
            return cls({int(k): (v if isinstance(v, Fn) else from_json(v)) for k, v in j["table"].items()})
        except (KeyError, ValueError, TypeError) as e:
            raise InputError(f"malformed table candidate: {e}") from None

    def run(self, A: tuple, args: tuple, machine: Machine):
        table = self.tables.get(len(A))
        if table is None:
            raise InputError(f"table candidate has no entry for instantiation size {len(A)}")
        if not args:
            return table
        v = machine.apply(table, args[0])
        for a in args[1:]:
            v = machine.apply(v, a)
        return v


class PyCandidate:
    """A Python callable ``fn(carrier, *args)``; handy for planted counterexamples.

    Arguments beyond those supplied by the checker are taken one at a time,
    so ``fn(A, lt, xs)`` works for ``(a * a -> Bool) -> List a -> List a``.
    """

    def __init__(self, fn: Callable, name: str = "python"):
        self.fn = fn
        self.name = name
        self.arity = len(inspect.signature(fn).parameters) - 1

    def run(self, A: tuple, args: tuple, machine: Machine):
        rest = self.arity - len(args)
        if rest > 0:
            return Builtin(self.name, rest, functools.partial(self.fn, A, *args))
        return self.fn(A, *args)


def load_candidate(j):
    if isinstance(j, str):
        return TermCandidate(j)
    if isinstance(j, Mapping) and "table" in j:
        return TableCandidate.from_json(j)
    if isinstance(j, Mapping) and "term" in j:
        return TermCandidate(j["term"])
    raise InputError("candidate must be term text, {\"term\": ...} or {\"table\": ...}")


def reify(v, t, env: Env, machine: Machine):
    """Turn an interpreter value into a canonical value of the marked type ``t``."""
    if isinstance(t, Mark):
        allowed = env.I if t.side == "I" else env.J
        if v not in allowed:
            raise EvalError(f"ill-typed result {label(v)} for the type variable")
        return v
    if isinstance(t, TArrow):
        return Fn({x: reify(machine.apply(v, x), t.cod, env, machine) for x in type_values(t.dom, env)})
    if isinstance(t, TProd):
        if not isinstance(v, tuple) or len(v) != 2:
            raise EvalError(f"expected a pair, got {label(v)}")
        return (reify(v[0], t.left, env, machine), reify(v[1], t.right, env, machine))
    if isinstance(t, TSum):
        if not isinstance(v, Inj):
            raise EvalError(f"expected an injection, got {label(v)}")
        return Inj(v.side, reify(v.value, t.left if v.side == 0 else t.right, env, machine))
    if isinstance(t, TList):
        if not isinstance(v, Lst):
            raise EvalError(f"expected a list, got {label(v)}")
        return Lst(tuple(reify(x, t.elem, env, machine) for x in v.items))
    if isinstance(t, TBool) and v not in ("true", "false"):
        raise EvalError(f"expected a boolean, got {label(v)}")
    if isinstance(t, TUnit) and v != "unit":
        raise EvalError(f"expected unit, got {label(v)}")
    if isinstance(t, TNat) and (not isinstance(v, int) or isinstance(v, bool)):
        raise EvalError(f"expected a number, got {label(v)}")
    return v


@dataclass
class CandidateVerdict:
    ok: bool
    witness: dict | None
    checked: int
    instantiations: list
    list_bound: int
    nat_bound: int
    extra: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness,
            "checked": self.checked,
            "instantiations": self.instantiations,
            "list_bound": self.list_bound,
            "nat_bound": self.nat_bound,
        }


class _Runner:
    """Memoized ``f_X d`` evaluation, one fresh step budget per application."""

    def __init__(self, parts: TheoremParts, candidate, list_bound, nat_bound, step_budget):
        self.parts, self.candidate = parts, candidate
        self.kw = dict(list_bound=list_bound, nat_bound=nat_bound)
        self.step_budget = step_budget
        self.memo: dict = {}

    def result(self, X: tuple, d):
        key = (X, d)
        if key not in self.memo:
            m = Machine(self.step_budget)
            args = () if self.parts.wrapped else (d,)
            v = self.candidate.run(X, args, m)
            self.memo[key] = reify(v, self.parts.t2.body, Env(X, X, **self.kw), m)
        return self.memo[key]


def _pairs(sizes):
    return [(a, b) for a in sizes for b in sizes]


def check_candidate(t, candidate, sizes=(2, 3), list_bound: int = 3, nat_bound: int = 3,
                    step_budget: int = 100_000) -> CandidateVerdict:
    """Search every chevron ``(i2, d0, d1)`` for a violation of the free theorem.

    Pairs ``(d0, d1)`` satisfying the hypothesis are found by indexing ``d0`` by
    its ``map+`` image, so the search is linear in each diagonal per ``i2``.
    """
    parts = theorem_parts(t)
    if isinstance(candidate, (str, Mapping)):
        candidate = load_candidate(candidate)
    run = _Runner(parts, candidate, list_bound, nat_bound, step_budget)
    kw = run.kw
    t1 = parts.t1.body
    checked = 0
    insts = []
    for na, nb in _pairs(sizes):
        A, B = carrier(na), carrier(nb)
        insts.append([na, nb])
        D0 = type_values(t1, Env(A, A, **kw))
        D1 = type_values(t1, Env(B, B, **kw))
        ps, pt = plus_envs(A, B, **kw)
        ms, mt = minus_envs(A, B, **kw)
        for i2 in all_functions(A, B):
            p1, m1 = compile_map(parts.plus1, i2, ps, pt), compile_map(parts.minus1, i2, ms, mt)
            p2, m2 = compile_map(parts.plus2, i2, ps, pt), compile_map(parts.minus2, i2, ms, mt)
            index: dict = {}
            for d0 in D0:
                index.setdefault(p1(d0), []).append(d0)
            for d1 in D1:
                for d0 in index.get(m1(d1), ()):
                    checked += 1
                    lhs = p2(run.result(A, d0))
                    rhs = m2(run.result(B, d1))
                    if lhs != rhs:
                        w = {"A": na, "B": nb, "i2": label(i2), "d0": label(d0), "d1": label(d1),
                             "lhs": label(lhs), "rhs": label(rhs)}
                        return CandidateVerdict(False, w, checked, insts, list_bound, nat_bound)
    return CandidateVerdict(True, None, checked, insts, list_bound, nat_bound)


def evaluate_instance(t, candidate, sizes=(2,), list_bound: int = 2, nat_bound: int = 2,
                      form: str = "raw", step_budget: int = 100_000) -> tuple:
    """Evaluate the theorem by plain nested loops; returns ``(holds, instances)``.

    ``form="normalized"`` substitutes ``d1 := map+ i2 d0`` when the argument
    type is covariant, exactly as the normalized statement does.
    """
    parts = theorem_parts(t)
    if isinstance(candidate, (str, Mapping)):
        candidate = load_candidate(candidate)
    run = _Runner(parts, candidate, list_bound, nat_bound, step_budget)
    kw = run.kw
    t1 = parts.t1.body
    substitute = form == "normalized" and parts.t1.covariant
    n = 0
    for na, nb in _pairs(sizes):
        A, B = carrier(na), carrier(nb)
        D0 = type_values(t1, Env(A, A, **kw))
        D1 = type_values(t1, Env(B, B, **kw))
        ps, pt = plus_envs(A, B, **kw)
        ms, mt = minus_envs(A, B, **kw)
        for i2 in all_functions(A, B):
            for d0 in D0:
                cands = [apply_map(parts.plus1, d0, i2, ps, pt)] if substitute else D1
                for d1 in cands:
                    if not substitute and apply_map(parts.plus1, d0, i2, ps, pt) != apply_map(parts.minus1, d1, i2, ms, mt):
                        continue
                    n += 1
                    lhs = apply_map(parts.plus2, run.result(A, d0), i2, ps, pt)
                    rhs = apply_map(parts.minus2, run.result(B, d1), i2, ms, mt)
                    if lhs != rhs:
                        return False, n
    return True, n


INSERTION_SORT = """
letrec insert lt x ys =
  case ys of
    nil -> cons x nil
  | cons y rest -> if lt (x, y) then cons x ys else cons y (insert lt x rest)
in
letrec sort lt xs =
  case xs of
    nil -> nil
  | cons y rest -> insert lt y (sort lt rest)
in sort
"""

APPEND = """
letrec append xs ys =
  case xs of
    nil -> ys
  | cons h rest -> cons h (append rest ys)
in append
"""

IDENTITY = "fun x -> x"
