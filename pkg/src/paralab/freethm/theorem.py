"""Free theorems as instances of the paranaturality condition."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InputError
from .types import TArrow, TForall, TUnit, TypeExpr, parse_type, show_type
from .variance import (
    Names,
    SemDifunctor,
    _paren,
    derive_maps,
    pattern_names,
    pattern_text,
    render_map,
    split_variance,
)


@dataclass
class TheoremParts:
    """Everything needed to state or evaluate the instance for ``forall a. T1 -> T2``."""

    type: TypeExpr
    var: str
    t1: SemDifunctor
    t2: SemDifunctor
    plus1: object
    minus1: object
    plus2: object
    minus2: object
    wrapped: bool  # body was not an arrow and got a Unit argument


@dataclass
class FreeTheorem:
    type: str
    raw: str
    normalized: str
    quantifiers: dict
    hypothesis: dict = field(default_factory=dict)
    conclusion: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "raw": self.raw,
            "normalized": self.normalized,
            "quantifiers": self.quantifiers,
            "hypothesis": self.hypothesis,
            "conclusion": self.conclusion,
        }

    def text(self) -> str:
        return f"{self.type}\n  raw:        {self.raw}\n  normalized: {self.normalized}"


def theorem_parts(t) -> TheoremParts:
    if isinstance(t, str):
        t = parse_type(t)
    if not isinstance(t, TForall):
        raise InputError("a free theorem needs a type of the form forall a. T")
    body = t.body
    wrapped = not isinstance(body, TArrow)
    if wrapped:
        body = TArrow(TUnit(), body)
    t1 = split_variance(body.dom, t.var)
    t2 = split_variance(body.cod, t.var)
    p1, m1 = derive_maps(t1)
    p2, m2 = derive_maps(t2)
    return TheoremParts(t, t.var, t1, t2, p1, m1, p2, m2, wrapped)


def _patterns(t, names: Names) -> list:
    """One fresh pattern per arrow of the spine of ``t``."""
    pats = []
    while isinstance(t, TArrow):
        pats.append(names.pattern(t.dom))
        t = t.cod
    return pats


def _eta(m, pats, head: str, names: Names) -> str:
    """Apply ``m`` to ``head`` and saturate the arrow spine with ``pats``."""
    for p in pats:
        head = f"{head} {_paren(render_map(m.pre, p, names))}"
        m = m.post
    return render_map(m, head, names)


def emit_free_theorem(t) -> FreeTheorem:
    parts = theorem_parts(t)
    ty = show_type(parts.type)
    t1, t2 = parts.t1.body, parts.t2.body
    names = Names()
    base = names.pattern(t1) if not parts.wrapped else "u"
    if parts.wrapped:
        names.taken.add("u")
    covariant = parts.t1.covariant

    # raw: the instance exactly as the condition reads
    raw_names = Names({"d0", "d1"})
    h_raw = f"{render_map(parts.plus1, 'd0', raw_names)} = {render_map(parts.minus1, 'd1', raw_names)}"
    c_raw = (f"{render_map(parts.plus2, 'f_A d0', raw_names)} = "
             f"{render_map(parts.minus2, 'f_B d1', raw_names)}")
    raw = (f"for all A, B, i2 : A -> B, d0 : [{show_type(t1)}](A,A), d1 : [{show_type(t1)}](B,B): "
           f"if {h_raw} then {c_raw}")

    quant = {"sets": ["A", "B"], "function": "i2 : A -> B"}
    if covariant:
        d0 = pattern_text(base)
        d1 = render_map(parts.plus1, base, names)
        quant["elements"] = {d0: f"[{show_type(t1)}](A,A)"}
        hyp = None
    else:
        stem = pattern_text(base)
        d0, d1 = f"{stem}_A", f"{stem}_B"
        quant["elements"] = {d0: f"[{show_type(t1)}](A,A)", d1: f"[{show_type(t1)}](B,B)"}
        pats_h = _patterns(t1, names)
        lhs = _eta(parts.plus1, pats_h, d0, names)
        rhs = _eta(parts.minus1, pats_h, d1, names)
        # a purely contravariant hypothesis reads best solved for d0
        eq = f"{rhs} = {lhs}" if parts.t1.contravariant else f"{lhs} = {rhs}"
        bound = [n for p in pats_h for n in pattern_names(p)]
        hyp = eq + (f" for all {', '.join(bound)}" if bound else "")
    pats_c = _patterns(t2, names)
    lhs = _eta(parts.plus2, pats_c, f"f_A {_paren(d0)}", names)
    rhs = _eta(parts.minus2, pats_c, f"f_B {_paren(d1)}", names)
    concl = f"{lhs} = {rhs}"
    normalized = concl if hyp is None else f"if {hyp} then {concl}"
    return FreeTheorem(
        type=ty,
        raw=raw,
        normalized=normalized,
        quantifiers=quant,
        hypothesis={"substituted": covariant, "text": hyp},
        conclusion={"text": concl},
    )
