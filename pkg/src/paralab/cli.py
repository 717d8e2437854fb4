"""Batch command-line front end.

Exit codes: 0 verified, 1 violation found, 2 invalid input, 3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import signal
import sys
import time
from contextlib import contextmanager
from pathlib import Path

from . import __version__
from . import difun as D
from .bundle import BundleError, load_bundle
from .diyoneda import probe_diyoneda, probe_exponential
from .errors import InputError, ParalabError, PreconditionError, ResourceError
from .fincat import build_fixture, finset_fragment
from .fixpoint import (
    adamek_initial,
    check_bisimulation,
    list_queue,
    batched_queue,
    partition_refinement,
    probe_uustalu,
    queue_functor,
    queue_relation,
    stream_coalgebras,
    stream_functor,
    structural_coend,
    structural_end,
    disjoint_union,
)
from .paranat import check_paranatural, enumerate_paranaturals
from .poly import poly_from_json
from .values import label

REPORT_SCHEMA = "paralab-report/1"
OK, VIOLATION, INVALID, RESOURCE = 0, 1, 2, 3


def _ints(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{what} is not valid JSON: {e.msg}") from None


SHORT_EXPRS = {"Hom": {"op": "Hom"}, "Var": {"op": "Var"}}
SHORT_POLY = {"Id": {"op": "Id"}}


def parse_expr(text: str):
    if text in SHORT_EXPRS:
        return D.expr_from_json(SHORT_EXPRS[text])
    return D.expr_from_json(_json_arg(text, "difunctor expression"))


def parse_poly(text: str):
    if text in SHORT_POLY:
        return poly_from_json(SHORT_POLY[text])
    return poly_from_json(_json_arg(text, "polynomial functor"))


@contextmanager
def _deadline(seconds):
    if not seconds or not hasattr(signal, "SIGALRM"):
        yield
        return

    def fire(signum, frame):
        raise ResourceError(f"wall-clock limit of {seconds}s exceeded")

    old = signal.signal(signal.SIGALRM, fire)
    signal.alarm(int(seconds))
    try:
        yield
    finally:
        signal.alarm(0)
        signal.signal(signal.SIGALRM, old)


def _bundle(args):
    path = getattr(args, "bundle", None) or getattr(args, "bundle_pos", None)
    if not path:
        raise InputError("this command needs --bundle")
    return load_bundle(path)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(label(k)) if not isinstance(k, str) else k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)) and not isinstance(v, str):
        return [_jsonable(x) for x in v]
    if v is None or isinstance(v, (bool, int, float, str)):
        return v
    return label(v)


# -- commands ------------------------------------------------------------------


def cmd_validate(args):
    b = _bundle(args)
    return OK, "ok", {"bundle": Path(b.path).name, "objects": b.summary()}


def cmd_enumerate(args):
    b = _bundle(args)
    src = b.get("difunctors", args.source)
    tgt = b.get("difunctors", args.target)
    fams = enumerate_paranaturals(src, tgt, limit=args.limit)
    res = {
        "source": args.source,
        "target": args.target,
        "count": len(fams),
        "truncated": fams.truncated,
        "families": [f.to_json()["components"] for f in fams],
    }
    if fams.truncated:
        return RESOURCE, "truncated", res
    return OK, "ok", res


def cmd_check(args):
    b = _bundle(args)
    phi = b.get("transformations", args.phi)
    rep = check_paranatural(phi.source, phi.target, phi, formulation=args.formulation)
    res = {"transformation": args.phi, **rep.to_json(), "formulation": rep.formulation}
    return (OK if rep.ok else VIOLATION), rep.verdict, res


def cmd_free_theorem(args):
    from .freethm import check_candidate, emit_free_theorem, load_candidate

    th = emit_free_theorem(args.type)
    res = {"theorem": th.to_json()}
    if not args.check:
        return OK, "ok", res
    text = Path(args.check).read_text() if Path(args.check).exists() else None
    if text is None:
        raise InputError(f"cannot read candidate file {args.check}")
    stripped = text.strip()
    cand = load_candidate(json.loads(stripped)) if stripped.startswith("{") else load_candidate(text)
    sizes = tuple(_ints(args.sizes)) if args.sizes else (2, 3)
    v = check_candidate(args.type, cand, sizes=sizes, list_bound=args.list_bound,
                        nat_bound=args.list_bound, step_budget=args.step_budget)
    res["check"] = v.to_json()
    return (OK if v.ok else VIOLATION), v.verdict, res


def _fragment(args, default):
    return finset_fragment(_ints(args.fragment) if args.fragment else default)


def cmd_end(args):
    C = _fragment(args, [2])
    res = structural_end(parse_expr(args.gamma), parse_expr(args.theta), C, limit=args.limit)
    out = res.to_json()
    if res.truncated:
        return RESOURCE, "truncated", out
    return OK, "ok", out


def cmd_coend(args):
    C = _fragment(args, [1, 2])
    res = structural_coend(parse_expr(args.gamma), C, limit=args.limit)
    return OK, "ok", res.to_json()


def cmd_bisim(args):
    b = _bundle(args)
    lname, rname, pairs = b.get("relations", args.relation)
    L, R = b.coalgebras[lname], b.coalgebras[rname]
    if L.functor != R.functor:
        raise InputError("the two coalgebras are for different functors")
    e = D.CoalgOf(L.functor)
    v = check_bisimulation(e, pairs, (L.carrier, L.structure), (R.carrier, R.structure))
    res = {"relation": args.relation, "left": lname, "right": rname, "pairs": len(pairs), **v.to_json()}
    return (OK if v.ok else VIOLATION), res["verdict"], res


def _difunctor_arg(args, name_attr="difunctor"):
    name = getattr(args, name_attr)
    if args.bundle:
        return _bundle(args).get("difunctors", name)
    base = build_fixture(args.fixture, *([json.loads(args.params)] if args.params else []))
    d = D.eval_difunctor_expr(parse_expr(name or "Hom"), base)
    return d


def cmd_probe(args):
    what = args.what
    if what == "diyoneda":
        p = probe_diyoneda(_difunctor_arg(args), limit=args.limit)
        return OK, p.verdict, p.to_json()
    if what == "exponential":
        b = _bundle(args)
        theta, delta, gamma = (b.get("difunctors", n) for n in (args.theta, args.delta, args.gamma))
        r = probe_exponential(theta, delta, gamma, limit=args.limit)
        return OK, r["verdict"], r
    if what == "uustalu":
        T = parse_poly(args.functor)
        F = parse_poly(args.other)
        C = _fragment(args, [1, 2])
        r = probe_uustalu(T, F, C, bound=args.bound if args.bound is not None else 10, limit=args.limit)
        return OK, r["verdict"], r
    if what == "universe":
        from .tymodel import probe_universe

        bound = args.bound if args.bound is not None else 1
        if args.bundle:
            b = _bundle(args)
            if args.context:
                gamma = b.get("difunctors", args.context)
            elif len(b.difunctors) == 1:
                gamma = next(iter(b.difunctors.values()))
            else:
                raise InputError("bundle has several difunctors; choose one with --context")
        else:
            gamma = D.eval_difunctor_expr(D.Const(("*",)), build_fixture("terminal"))
        r = probe_universe(gamma, bound, budget=args.limit)
        verdict = "roundtrip" if r["roundtrip_ty_to_tm"]["identity"] and r["roundtrip_tm_to_ty"]["identity"] else "partial"
        return OK, verdict, r
    raise InputError(f"unknown probe {what!r}")


# -- demos ---------------------------------------------------------------------

SORT_TYPE = "forall a. (a * a -> Bool) -> List a -> List a"


def demo_sorting(args):
    from .freethm import PyCandidate, check_candidate, emit_free_theorem
    from .freethm.check import INSERTION_SORT

    th = emit_free_theorem(SORT_TYPE)
    sizes = tuple(_ints(args.sizes)) if args.sizes else (2, 3)
    good = check_candidate(SORT_TYPE, INSERTION_SORT, sizes=sizes, list_bound=args.list_bound,
                           step_budget=args.step_budget)

    def by_label(A, lt, xs):
        return type(xs)(tuple(sorted(xs.items)))

    bad = check_candidate(SORT_TYPE, PyCandidate(by_label, "sort-by-carrier-order"), sizes=sizes,
                          list_bound=args.list_bound, step_budget=args.step_budget)
    res = {
        "type": SORT_TYPE,
        "normalized": th.normalized,
        "insertion_sort": good.to_json(),
        "sort_by_carrier_order": bad.to_json(),
    }
    ok = good.ok and not bad.ok
    return (OK if ok else VIOLATION), "ok" if ok else "unexpected", res


WILD = D.Prod(D.Arrow(D.Prod(D.Var(), D.Var()), D.Var()), D.Prod(D.Var(), D.Arrow(D.Var(), D.Var())))


def _is_group(carrier, g) -> bool:
    mul, (e, inv) = g
    for a in carrier:
        if mul((e, a)) != a or mul((a, e)) != a or mul((a, inv(a))) != e or mul((inv(a), a)) != e:
            return False
        for b in carrier:
            for c in carrier:
                if mul((mul((a, b)), c)) != mul((a, mul((b, c)))):
                    return False
    return True


def demo_wildgroups(args):
    from .tymodel import check_tm, struct_of, weaken

    C = _fragment(args, [1, 2])
    W = D.eval_difunctor_expr(WILD, C)
    W.name = "WildGroup"
    S = struct_of(W)
    groups = {label(I): sum(_is_group(C.elements(I), g) for g in W.values[(I, I)]) for I in C.objects}
    carrier = weaken(W, D.eval_difunctor_expr(D.Var(), C))
    units = {I: {g: g[1][0] for g in W.values[(I, I)]} for I in C.objects}
    rep = check_tm(W, carrier, units)
    res = {
        "fragment": [label(o) for o in C.objects],
        "structures": len(S.objects),
        "homomorphisms": len(S.morphisms),
        "groups_per_carrier": groups,
        "unit_term": rep.to_json(),
    }
    return (OK if rep.ok else VIOLATION), rep.verdict, res


def demo_streams(args):
    T = stream_functor()
    co = stream_coalgebras()
    structs = [(n, X, c) for n, (X, c) in sorted(co.items())]
    classes = structural_coend(D.CoalgOf(T), structures=structs, limit=args.limit)
    X, c = disjoint_union(structs, T)
    blocks = partition_refinement(T, X, c)
    (P, p), (Q, q) = co["P"], co["Q"]
    v = check_bisimulation(D.CoalgOf(T), {("p", "q0"), ("p", "q1")}, (P, p), (Q, q))
    agree = sorted(map(sorted, (map(label, cl) for cl in classes.classes))) == sorted(
        map(sorted, (map(label, b) for b in blocks)))
    res = {
        "coend": classes.to_json(),
        "partition_refinement": [[label(x) for x in b] for b in blocks],
        "agree": agree,
        "bisimulation_p_q": v.to_json(),
    }
    ok = agree and v.ok and len(classes.classes) == 2
    return (OK if ok else VIOLATION), "ok" if ok else "unexpected", res


def demo_queues(args):
    cap = args.bound if args.bound is not None else 3
    T = queue_functor()
    L, lc = list_queue(cap)
    B, bc = batched_queue(cap)
    rel = queue_relation(L, B)
    v = check_bisimulation(D.CoalgOf(T), rel, (L, lc), (B, bc))
    X, c = disjoint_union([("list", L, lc), ("batched", B, bc)], T)
    blocks = partition_refinement(T, X, c)
    merged = all(any(("list", l) in blk and ("batched", b) in blk for blk in map(set, blocks)) for l, b in rel)
    res = {
        "capacity": cap,
        "list_states": len(L),
        "batched_states": len(B),
        "relation_pairs": len(rel),
        "bisimulation": v.to_json(),
        "classes": len(blocks),
        "related_states_merged": merged,
    }
    ok = v.ok and merged
    return (OK if ok else VIOLATION), "ok" if ok else "unexpected", res


def demo_nat(args):
    from .poly import PConst, PId, PSum

    bound = args.bound if args.bound is not None else 10
    mu = adamek_initial(PSum(PConst(("*",)), PId()), bound)
    return OK, "ok", {"functor": "1 + X", "bound": bound, **mu.to_json()}


def demo_curried_nat(args):
    C = _fragment(args, [2])
    res = structural_end(D.Hom(), D.Hom(), C, limit=args.limit)
    out = res.to_json()
    out["power_families"] = sorted(t for f in res.families for t in f.tags)
    return (RESOURCE if res.truncated else OK), "ok", out


DEMOS = {
    "sorting": demo_sorting,
    "wildgroups": demo_wildgroups,
    "streams": demo_streams,
    "queues": demo_queues,
    "nat": demo_nat,
    "curried-nat": demo_curried_nat,
}


def cmd_demo(args):
    return DEMOS[args.name](args)


# -- plumbing ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--bundle", help="experiment bundle (JSON)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--limit", type=int, default=100_000, help="enumeration limit")
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--fragment", help="carrier sizes, e.g. 1,2")
    p.add_argument("--sizes", help="instantiation sizes, e.g. 2,3")
    p.add_argument("--list-bound", type=int, default=3)
    p.add_argument("--step-budget", type=int, default=100_000)
    p.add_argument("--timeout-seconds", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="paralab", description="Paranatural transformations over finite categories.")
    parser.add_argument("--version", action="version", version=f"paralab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load and validate a bundle")
    p.add_argument("bundle_pos", nargs="?", metavar="BUNDLE")
    _common(p)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("enumerate", help="enumerate paranaturals between two bundle difunctors")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    _common(p)
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("check-transformation", help="check a bundle transformation")
    p.add_argument("--phi", required=True)
    p.add_argument("--formulation", choices=("elementwise", "pullback"), default="elementwise")
    _common(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("free-theorem", help="derive (and optionally test) a free theorem")
    p.add_argument("type")
    p.add_argument("--check", metavar="CANDIDATE_FILE")
    _common(p)
    p.set_defaults(run=cmd_free_theorem)

    p = sub.add_parser("end", help="structural end over a finite-set fragment")
    p.add_argument("--gamma", default="Hom")
    p.add_argument("--theta", default="Hom")
    _common(p)
    p.set_defaults(run=cmd_end)

    p = sub.add_parser("coend", help="structural coend classes over a fragment")
    p.add_argument("--gamma", required=True)
    _common(p)
    p.set_defaults(run=cmd_coend)

    p = sub.add_parser("bisim", help="check a bundle relation is a bisimulation")
    p.add_argument("--relation", required=True)
    _common(p)
    p.set_defaults(run=cmd_bisim)

    p = sub.add_parser("probe", help="bijection probes")
    p.add_argument("what", choices=("diyoneda", "exponential", "uustalu", "universe"))
    p.add_argument("--difunctor", help="bundle difunctor name, or an expression with --fixture")
    p.add_argument("--fixture", default="terminal")
    p.add_argument("--params", help="fixture parameter as JSON")
    p.add_argument("--theta")
    p.add_argument("--delta")
    p.add_argument("--gamma")
    p.add_argument("--functor", default="Id", help="polynomial functor T (JSON or Id)")
    p.add_argument("--other", default="Id", help="polynomial functor F (JSON or Id)")
    p.add_argument("--context", help="bundle difunctor used as the context")
    _common(p)
    p.set_defaults(run=cmd_probe)

    p = sub.add_parser("demo", help="worked examples")
    p.add_argument("name", choices=sorted(DEMOS))
    _common(p)
    p.set_defaults(run=cmd_demo)
    return parser


def _text(report: dict) -> str:
    lines = [f"{report['command'][0]}: {report['verdict']}"]
    for k, v in report.get("result", {}).items():
        if not isinstance(v, str):
            v = json.dumps(v, sort_keys=True, ensure_ascii=False)
            if len(v) > 400:
                v = v[:400] + " ..."
        lines.append(f"  {k}: {v}")
    if report.get("error"):
        lines.append(f"  error: {report['error']}")
    return "\n".join(lines)


def run_command(argv=None) -> tuple:
    """Parse ``argv`` and run; returns ``(exit code, report dict)``."""
    code, report, _ = _execute(argv)
    return code, report


def _execute(argv):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else INVALID
        return (OK if code == 0 else INVALID), None, None
    start = time.perf_counter()
    report = {"schema": REPORT_SCHEMA, "tool": "paralab", "version": __version__, "command": argv}
    try:
        with _deadline(args.timeout_seconds):
            code, verdict, result = args.run(args)
        report["verdict"] = verdict
        report["result"] = _jsonable(result)
    except BundleError as e:
        code = INVALID
        report.update(verdict="invalid-input", error=str(e), pointer=e.pointer)
        if e.witness is not None:
            report["witness"] = _jsonable(e.witness)
    except (InputError, PreconditionError) as e:
        code = INVALID
        report.update(verdict="invalid-input", error=str(e))
    except ResourceError as e:
        code = RESOURCE
        report.update(verdict="resource-limit", error=str(e))
    except ParalabError as e:
        code = INVALID
        report.update(verdict="invalid-input", error=str(e))
    report["exit_code"] = code
    report["timing"] = {"wall_seconds": round(time.perf_counter() - start, 4)}
    return code, report, args


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    code, report, args = _execute(argv)
    if report is None:
        return code
    if args.out:
        Path(args.out).write_text(dumps(report))
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        print(_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
