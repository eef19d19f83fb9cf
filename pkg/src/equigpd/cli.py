"""Command-line front end.

Exit codes: 0 verdict true or construction done, 1 verdict false (the report
carries a witness), 2 bad input or exhausted budget.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from typing import Optional

from . import io
from .budget import DEFAULT_BUDGET, BudgetExceeded, use_budget
from .core import (
    EquivariantFunctor,
    InvalidStructure,
    InvolutiveGroupoid,
    validate,
    validate_functor,
)
from .homotopy import are_right_homotopic, is_rhe, rhe_witness, weak_components
from .modelstructure import (
    ConstructionDefect,
    decompose_acyclic_cofibration,
    equivalence_defect,
    factorize,
    is_acyclic_cofibration,
    is_discrete_fibration,
    is_fibration,
    lifting_failure,
    path_object,
    pushout_cell,
)
from .ttfc import NotAFibration, dependent_product, pullback
from .universe import (
    NotSmall,
    audit_universe,
    classify,
    funext_demo,
    realize_subuniverse,
    univalence_check,
)


class UsageError(ValueError):
    pass


def parse_seeds(text: str) -> list[list[str]]:
    """``"{0,1}"``, ``"{0},{a}"`` or ``"{}"``; a JSON list of lists also works."""
    text = text.strip()
    if text.startswith("["):
        try:
            seeds = json.loads(text)
        except json.JSONDecodeError as e:
            raise UsageError(f"bad seeds: {e.msg}") from None
        if not all(isinstance(s, list) for s in seeds):
            raise UsageError("seeds must be a list of lists")
        return [[str(a) for a in s] for s in seeds]
    if text in ("∅", "{∅}"):
        return [[]]
    sets = re.findall(r"\{([^{}]*)\}", text)
    if not sets or re.sub(r"\{[^{}]*\}", "", text).strip(" ,") != "":
        raise UsageError(f"bad seeds {text!r}; expected e.g. '{{0,1}}' or '{{0}},{{a}}'")
    return [[a.strip() for a in s.split(",") if a.strip()] for s in sets]


# ----------------------------------------------------------------------
# input helpers
# ----------------------------------------------------------------------
def _load(path: Optional[str], flag: str):
    if path is None:
        raise UsageError(f"{flag} is required")
    return io.load(path)


def _groupoid(args, flag="--input") -> InvolutiveGroupoid:
    G = _load(args.input if flag == "--input" else args.input2, flag)
    if not isinstance(G, InvolutiveGroupoid):
        raise UsageError(f"{flag} must be a groupoid document")
    rep = validate(G)
    if not rep.ok:
        raise InvalidStructure(rep, "groupoid")
    return G


def _functor(args, flag="--input") -> EquivariantFunctor:
    F = _load(args.input if flag == "--input" else args.input2, flag)
    if not isinstance(F, EquivariantFunctor):
        raise UsageError(f"{flag} must be a functor document")
    for side, G in (("domain", F.dom), ("codomain", F.cod)):
        rep = validate(G)
        if not rep.ok:
            raise InvalidStructure(rep, side)
    rep = validate_functor(F)
    if not rep.ok:
        raise InvalidStructure(rep, "functor")
    return F


def _w(x):
    """Witnesses as JSON-friendly values."""
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    if isinstance(x, (list, tuple)):
        return [_w(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _w(v) for k, v in x.items()}
    return str(x)


# ----------------------------------------------------------------------
# commands; each returns a report document
# ----------------------------------------------------------------------
def cmd_validate(args):
    doc = _load(args.input, "--input")
    if isinstance(doc, EquivariantFunctor):
        reps = [("domain", validate(doc.dom)), ("codomain", validate(doc.cod))]
        if all(r.ok for _, r in reps):
            reps.append(("functor", validate_functor(doc)))
    elif isinstance(doc, InvolutiveGroupoid):
        reps = [("groupoid", validate(doc))]
    else:
        raise UsageError("validate expects a groupoid or functor document")
    violations = [f"{what}: {v}" for what, r in reps for v in r.violations]
    return io.report_doc("validate", not violations, violations=violations)


def cmd_check(args):
    f = _functor(args)
    kind = args.what
    if kind == "fibration":
        ok, _ = is_fibration(f)
        return io.report_doc("check fibration", ok, witness=_w(lifting_failure(f)))
    if kind == "discrete":
        ok, _ = is_discrete_fibration(f)
        witness = None
        if not ok:
            witness = _w(lifting_failure(f)) or "some base arrow has several lifts"
        return io.report_doc("check discrete", ok, witness=witness)
    if kind == "acyclic-cofibration":
        c = is_acyclic_cofibration(f)
        return io.report_doc(
            "check acyclic-cofibration", c.verdict,
            injective_on_objects=c.injective_on_objects, equivalence=c.equivalence,
            fixed_point_bijection=c.fixed_point_bijection, witness=_w(c.witness),
        )
    if kind == "equivalence":
        d = equivalence_defect(f)
        return io.report_doc("check equivalence", d is None, witness=_w(d))
    ok, diag = is_rhe(f)
    return io.report_doc("check rhe", ok, clause=diag.clause, witness=_w(diag.witness))


def cmd_construct(args):
    what = args.what
    if what == "pullback":
        of, along = _functor(args), _functor(args, "--input2")
        sq = pullback(of, along)
        return io.report_doc("construct pullback", True, proj1=io.functor_to_doc(sq.proj1),
                             proj2=io.functor_to_doc(sq.proj2), commutes=sq.commutes())
    if what == "pi":
        g, f = _functor(args), _functor(args, "--input2")
        P = dependent_product(g, f)
        return io.report_doc("construct pi", True, pi=io.functor_to_doc(P.pi),
                             fixed_sections=[po.s_obj for po in P.fixed_sections()])
    if what == "path-object":
        P = path_object(_groupoid(args))
        return io.report_doc("construct path-object", True, w=io.functor_to_doc(P.w),
                             proj=io.functor_to_doc(P.proj))
    if what == "factorize":
        fac = factorize(_functor(args))
        return io.report_doc("construct factorize", True, j=io.functor_to_doc(fac.j), q=io.functor_to_doc(fac.q))
    if what == "pushout-cell":
        step = pushout_cell(_functor(args))
        return io.report_doc("construct pushout-cell", True, inclusion=io.functor_to_doc(step.inclusion),
                             new_objects=list(step.new_objects))
    f = _functor(args)
    cert = is_acyclic_cofibration(f)
    if not cert.verdict:
        return io.report_doc("construct decompose", False, witness=_w(cert.witness))
    cells = decompose_acyclic_cofibration(f)
    return io.report_doc("construct decompose", True,
                         cells=[{"orbit": list(c.orbit), "anchor": c.anchor, "psi": c.psi} for c in cells])


def cmd_homotopy(args):
    what = args.what
    if what == "components":
        comps = weak_components(_groupoid(args))
        return io.report_doc("homotopy components", True, count=len(comps),
                             components=[list(c.objects) for c in comps])
    if what == "homotopic":
        f, g = _functor(args), _functor(args, "--input2")
        H = are_right_homotopic(f, g)
        return io.report_doc("homotopy homotopic", H is not None,
                             homotopy=None if H is None else io.functor_to_doc(H.H))
    f = _functor(args)
    ok, diag = is_rhe(f)
    if not ok:
        return io.report_doc("homotopy witness", False, clause=diag.clause, witness=_w(diag.witness))
    w = rhe_witness(f)
    return io.report_doc("homotopy witness", True, inverse=io.functor_to_doc(w.inverse),
                         homotopy_left=io.functor_to_doc(w.homotopy_left.H),
                         homotopy_right=io.functor_to_doc(w.homotopy_right.H))


def _seeds(args, default=None):
    if args.seeds is None:
        if default is None:
            raise UsageError("--seeds is required")
        return parse_seeds(default)
    return parse_seeds(args.seeds)


def _univalence_report(command, sub):
    v = univalence_check(sub)
    fields = dict(elements=len(sub.U.objects), clause=v.diagnosis.clause,
                  unit_is_equivalence=v.unit_is_equivalence, proj_is_fibration=v.proj_is_fibration,
                  witness=v.witness)
    if v.triple is not None:
        x, y, m = v.triple
        fields["triple"] = {"src": x.name, "dst": y.name, "iso": m.name}
    return io.report_doc(command, v.verdict, **fields)


def cmd_universe(args):
    what = args.what
    if what == "realize":
        sub = realize_subuniverse(_seeds(args))
        return io.report_doc("universe realize", True, U=io.groupoid_to_doc(sub.U),
                             p=io.functor_to_doc(sub.p))
    if what == "classify":
        f = _functor(args)
        c = classify(f)
        return io.report_doc("universe classify", c.validate(f), g=io.functor_to_doc(c.g),
                             chi=io.functor_to_doc(c.chi))
    if what == "audit":
        samples = [_functor(args)] + ([_functor(args, "--input2")] if args.input2 else [])
        rep = audit_universe(None, samples)
        return io.report_doc("universe audit", rep.ok, checks=[
            {"name": c.name, "ok": c.ok, "witness": c.witness} for c in rep.checks])
    return _univalence_report("universe univalence", realize_subuniverse(_seeds(args)))


def cmd_demo(args):
    if args.what == "funext":
        r = funext_demo()
        return io.report_doc(
            "demo funext", r.pi_is_rhe,
            g_is_fibration=r.g_is_fibration, f_is_fibration=r.f_is_fibration, f_is_rhe=r.f_is_rhe,
            pi_objects=r.pi_objects, pi_morphisms=r.pi_morphisms, fixed_sections=r.fixed_sections,
            pi_is_rhe=r.pi_is_rhe, clause=r.diagnosis.clause, witness=_w(r.diagnosis.witness),
        )
    return _univalence_report("demo univalence", realize_subuniverse(_seeds(args, "{0,1}")))


COMMANDS = {
    "validate": (cmd_validate, None),
    "check": (cmd_check, ["fibration", "discrete", "acyclic-cofibration", "equivalence", "rhe"]),
    "construct": (cmd_construct, ["pullback", "pi", "path-object", "factorize", "pushout-cell", "decompose"]),
    "homotopy": (cmd_homotopy, ["components", "homotopic", "witness"]),
    "universe": (cmd_universe, ["realize", "classify", "audit", "univalence"]),
    "demo": (cmd_demo, ["funext", "univalence"]),
}


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="groupoid or functor JSON document")
    common.add_argument("--input2", help="second document, where the command takes two")
    common.add_argument("--seeds", help="seed sets for the universe, e.g. '{0,1}' or '{0},{a}'")
    common.add_argument("--budget", type=float, help="multiplier for every size cap (default 1, or EQUIGPD_BUDGET)")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out", help="also write the JSON report to this file")
    ap = argparse.ArgumentParser(prog="equigpd", description="Finite involutive groupoids: checks, constructions, demos.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, choices) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common])
        if choices:
            p.add_argument("what", choices=choices)
    return ap


def render_text(doc: dict) -> str:
    lines = [f"{doc['command']}: {'true' if doc['verdict'] else 'false'}"]
    for k, v in sorted(doc.items()):
        if k in ("command", "verdict", "version", "kind"):
            continue
        if isinstance(v, dict) and v.get("kind") in ("groupoid", "functor"):
            if v["kind"] == "functor":
                v = f"functor with {len(v['dom']['objects'])} -> {len(v['cod']['objects'])} objects"
            else:
                v = f"groupoid with {len(v['objects'])} objects, {len(v['morphisms'])} morphisms"
        elif not isinstance(v, str):
            v = json.dumps(v, sort_keys=True, ensure_ascii=False)
        lines.append(f"  {k}: {v}")
    return "\n".join(lines) + "\n"


def _budget_factor(args) -> float:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("EQUIGPD_BUDGET")
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"EQUIGPD_BUDGET must be a number, got {env!r}") from None
    return 1.0


def run(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse exits 0 for --help and 2 for usage errors
        return int(e.code or 0)
    try:
        factor = _budget_factor(args)
        if factor <= 0:
            raise UsageError("--budget must be positive")
        fn, _ = COMMANDS[args.command]
        with use_budget(DEFAULT_BUDGET.scaled(factor)):
            doc = fn(args)
    except BudgetExceeded as e:
        print(f"error: {e} (raise it with --budget)", file=stderr)
        return 2
    except (io.ParseError, InvalidStructure, UsageError, NotAFibration, NotSmall) as e:
        print(f"error: {e}", file=stderr)
        return 2
    except ConstructionDefect as e:
        print(f"internal error: {e}", file=stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=stderr)
        return 2
    text = io.serialize_report(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    stdout.write(text if args.format == "json" else render_text(doc))
    return 0 if doc["verdict"] else 1


def main() -> None:
    raise SystemExit(run())
