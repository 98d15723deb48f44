"""
Command line interface `forge`.

Exit status: 0 when the requested check passes (or the command simply
reports), 1 when a check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import bprop
from .endalg import AlgebraError, StructureMaps, algebra_from_json, check_algebra, check_invariant_form
from .exactla import format_fraction, to_fraction
from .freecons.element import FreeError
from .pasting import (GraphError, canonicalize, enumerate_cyclic_trees, enumerate_directed_graphs,
                      enumerate_may_trees, enumerate_rooted_trees, enumerate_stable_graphs, to_dot)
from .pasting.subst import check_hereditary
from .present import (BUILTIN_PRESENTATIONS, Presentation, PresentationError, builtin_presentation,
                      presentation_from_json, quadratic_dual)
from .sigmod import SigmaError, extend_by_sign
from .termlang import TermError

PASS, FAIL, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path}: invalid JSON ({e.msg} at line {e.lineno}, column {e.colno})") from None


def load_presentation(source: str, truncation: int | None = None) -> Presentation:
    """A JSON file, or the name of a builtin presentation."""
    if not os.path.exists(source) and source in BUILTIN_PRESENTATIONS:
        return builtin_presentation(source, truncation)
    data = _load_json(source)
    if truncation is not None:
        data = dict(data, truncation=truncation)
    return presentation_from_json(data)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _write_dot(path: str | None, graphs) -> None:
    if not path:
        return
    chunks = [to_dot(g, f"scheme{i}") for i, g in enumerate(graphs)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(chunks))


def _census(graphs) -> list[dict]:
    rows = []
    for g in graphs:
        cf = canonicalize(g)
        rows.append({"class": cf.hex, "aut": cf.aut_order, "vertices": g.n_vertices, "edges": len(g.edges())})
    return rows


def _census_text(title: str, rows: list[dict]) -> str:
    lines = [f"{title}: {len(rows)} classes"]
    lines += [f"class {r['class']} aut {r['aut']} vertices {r['vertices']} edges {r['edges']}" for r in rows]
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------------

def cmd_trees(args) -> int:
    if args.kind == "rooted":
        graphs = enumerate_rooted_trees(args.n, args.min_arity, max_vertices=args.max_vertices)
    elif args.kind == "cyclic":
        graphs = enumerate_cyclic_trees(args.n, args.min_arity + 1, args.max_vertices)
    else:
        graphs = [m.tree for m in enumerate_may_trees(args.n, args.min_arity)]
    rows = _census(graphs)
    _write_dot(args.dot, graphs)
    _emit(args, {"kind": args.kind, "n": args.n, "min_arity": args.min_arity, "count": len(rows), "classes": rows},
          _census_text(f"{args.kind} trees n={args.n}", rows))
    return PASS


def cmd_graphs(args) -> int:
    if args.flavor == "modular":
        graphs = enumerate_stable_graphs(args.genus, args.legs)
        title = f"stable graphs g={args.genus} n={args.legs}"
        meta = {"genus": args.genus, "legs": args.legs}
    else:
        graphs = [g for g in enumerate_directed_graphs(args.outputs, args.inputs, args.max_vertices, args.flavor)
                  if g.n_vertices >= 1]
        title = f"{args.flavor} graphs ({args.outputs},{args.inputs}) <= {args.max_vertices} vertices"
        meta = {"outputs": args.outputs, "inputs": args.inputs, "max_vertices": args.max_vertices}
    rows = _census(graphs)
    _write_dot(args.dot, graphs)
    _emit(args, {"flavor": args.flavor, **meta, "count": len(rows), "classes": rows}, _census_text(title, rows))
    return PASS


def _profile(P: Presentation, args):
    if args.profile:
        try:
            parts = tuple(int(x) for x in args.profile.split(","))
        except ValueError:
            raise UsageError(f"bad profile {args.profile!r}; expected e.g. 2,3") from None
        return parts[0] if len(parts) == 1 else parts
    if args.arity is None:
        raise UsageError("give --arity or --profile")
    if not P.is_tree:
        raise UsageError(f"{P.flavor} presentations need --profile m,n")
    return args.arity


def cmd_dim(args) -> int:
    P = load_presentation(args.presentation, args.truncation)
    prof = _profile(P, args)
    qc = P.quotient_component(prof)
    _emit(args, {"presentation": P.name, "profile": list(prof) if isinstance(prof, tuple) else prof,
                 "free_dim": qc.free_dim, "ideal_dim": qc.ideal_dim, "dim": qc.dimension},
          str(qc.dimension))
    return PASS


def cmd_dual(args) -> int:
    P = load_presentation(args.presentation, args.truncation)
    D = quadratic_dual(P, args.truncation or max(P.truncation, args.upto))
    rows = []
    ok = True
    Q = load_presentation(args.check_against, args.truncation) if args.check_against else None
    for n in range(1, args.upto + 1):
        row = {"arity": n, "dual": D.quotient_dim(n)}
        if Q is not None:
            row["expected"] = Q.quotient_dim(n)
            row["match"] = row["dual"] == row["expected"]
            ok = ok and row["match"]
        rows.append(row)
    lines = [f"arity {r['arity']}: {r['dual']}" + (f" vs {r['expected']}" if Q else "") for r in rows]
    lines += [f"relation: {t}" for t in (D.relation_texts or [])]
    if Q is not None:
        lines.append("MATCH" if ok else "MISMATCH")
    _emit(args, {"presentation": P.name, "dual_relations": D.relation_texts, "dims": rows,
                 "result": None if Q is None else ("MATCH" if ok else "MISMATCH")}, "\n".join(lines))
    return PASS if ok else FAIL


def cmd_check_algebra(args) -> int:
    P = load_presentation(args.presentation, args.truncation)
    data = _load_json(args.algebra)
    s = algebra_from_json(data, P.generators)
    report = check_algebra(P, s)
    failures = list(report.failures)
    form_checked = False
    if s.V.form is not None and not args.ignore_form:
        E = P.generators
        try:
            Eplus = E if E.flavor == "sigma_plus" else extend_by_sign(E)
        except SigmaError:
            Eplus = None
        if Eplus is not None:
            form_checked = True
            failures += check_invariant_form(StructureMaps(Eplus, s.V, data["maps"])).failures
    ok = not failures
    lines = ["PASS" if ok else "FAIL"]
    for f in failures:
        lines.append("  " + ", ".join(f"{k}={v}" for k, v in f.items()))
    _emit(args, {"presentation": P.name, "result": "PASS" if ok else "FAIL", "form_checked": form_checked,
                 "failures": failures}, "\n".join(lines))
    return PASS if ok else FAIL


def cmd_normalize(args) -> int:
    try:
        t = format_fraction(to_fraction(args.t))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad value for --t: {args.t!r}") from None
    w = bprop.word_from_text(args.term)
    nf = bprop.normalize(w, t)
    forms = []
    for mono, c in sorted(nf.terms.items(), key=lambda kv: str(bprop.ee_form(kv[0]))):
        e = bprop.ee_form(mono)
        forms.append({"coefficient": format_fraction(c), "a": list(e.a), "b": list(e.b),
                      "sigma": list(e.sigma.images), "N": e.N, "text": str(e)})
    _emit(args, {"t": t, "profile": list(w.profile), "normal_form": forms, "text": bprop.format_word(nf)},
          bprop.format_word(nf))
    return PASS


def cmd_hereditary(args) -> int:
    ok, ce = check_hereditary(args.family, args.bound)
    payload = {"family": args.family, "bound": args.bound, "result": "HEREDITARY" if ok else "NOT HEREDITARY"}
    text = payload["result"]
    if ce is not None:
        payload["reason"] = ce["reason"]
        text += f"\n  {ce['reason']}"
        graphs = [g for g in (ce.get("outer"), ce.get("result"), ce.get("graph")) if g is not None]
        _write_dot(args.dot, graphs)
    _emit(args, payload, text)
    return PASS if ok else FAIL


# -- parser ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="forge", description="Exact computations with operads, PROPs and their relatives.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, dot=False):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if dot:
            sp.add_argument("--dot", metavar="FILE", help="write the graphs in DOT format")

    sp = sub.add_parser("trees", help="census of trees")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--min-arity", type=int, default=2)
    sp.add_argument("--kind", choices=["rooted", "cyclic", "may"], default="rooted")
    sp.add_argument("--max-vertices", type=int)
    common(sp, dot=True)
    sp.set_defaults(func=cmd_trees)

    sp = sub.add_parser("graphs", help="census of graphs")
    sp.add_argument("--flavor", choices=["modular", "prop", "properad", "dioperad", "half"], required=True)
    sp.add_argument("--genus", type=int, default=0)
    sp.add_argument("--legs", type=int, default=3)
    sp.add_argument("--outputs", type=int, default=1)
    sp.add_argument("--inputs", type=int, default=1)
    sp.add_argument("--max-vertices", type=int, default=2)
    common(sp, dot=True)
    sp.set_defaults(func=cmd_graphs)

    sp = sub.add_parser("dim", help="dimension of a quotient component")
    sp.add_argument("--presentation", required=True, help="JSON file or builtin name")
    sp.add_argument("--arity", type=int)
    sp.add_argument("--profile", help="comma separated, e.g. 2,2")
    sp.add_argument("--truncation", type=int)
    common(sp)
    sp.set_defaults(func=cmd_dim)

    sp = sub.add_parser("dual", help="quadratic dual and its dimensions")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--check-against")
    sp.add_argument("--upto", type=int, default=4)
    sp.add_argument("--truncation", type=int)
    common(sp)
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("check-algebra", help="verify an algebra over a presentation")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--truncation", type=int)
    sp.add_argument("--ignore-form", action="store_true", help="skip the invariant form check")
    common(sp)
    sp.set_defaults(func=cmd_check_algebra)

    sp = sub.add_parser("normalize", help="normal form in the bialgebra PROP")
    sp.add_argument("--t", default="1")
    sp.add_argument("term")
    common(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("hereditary", help="closure of a graph family under substitution")
    sp.add_argument("--family", required=True, choices=["prop", "properad", "dioperad", "half",
                                                        "all", "connected", "connected_simply_connected"])
    sp.add_argument("--bound", type=int, default=3)
    common(sp, dot=True)
    sp.set_defaults(func=cmd_hereditary)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, TermError, PresentationError, AlgebraError, SigmaError, GraphError,
            FreeError, bprop.BPropError) as e:
        sys.stderr.write(f"forge {args.command}: {e}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
