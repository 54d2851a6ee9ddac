"""Command-line interface.

Exit codes: 0 when every check holds, 1 when a check fails (the witness is
printed on stdout), 2 for usage and input errors (message on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .abstract_logic import AbstractLogic, classify_logic, theory_report
from .core_order import (
    ExprSet,
    FiniteLattice,
    FinitePoset,
    HeytingAlgebra,
    heyting_implication,
    is_distributive,
    set_name,
    upset_lattice,
)
from .documents import (
    DocumentError,
    element_names,
    parse_document,
    serialize,
    to_document,
)
from .duality import (
    DualSpace,
    dual_space,
    heyting_to_logic,
    lattice_to_logic,
    logic_to_heyting,
    logic_to_lattice,
    roundtrip_lattice,
    roundtrip_logic,
    space_to_lattice,
)
from .enumeration import EnumBudget, enumerate_distributive_lattices, enumerate_posets
from .errors import StructureError
from .morphisms import (
    CheckResult,
    StructureMap,
    check_downset_preimage,
    correspondence_check,
    dualize_map,
    is_esakia_morphism,
    is_heyting_hom,
    is_lattice_hom,
)

TARGETS = ("lattice", "logic", "heyting", "priestley", "spectral", "esakia")


class UsageError(Exception):
    pass


# -- formatting ------------------------------------------------------------------------

def _fmt_value(value, structure) -> str:
    names = element_names(structure)
    if isinstance(value, ExprSet):
        return set_name(value.mask, names)
    if isinstance(value, int):
        return names[value]
    if isinstance(value, tuple):
        return "(" + ", ".join(_fmt_value(v, structure) for v in value) + ")"
    return str(value)


def format_witness(witness, f: StructureMap) -> str:
    """``P′={1}, P={a,1}`` style, or ``meet(a, b)`` when all items share an
    operation label."""
    side = {"source": f.source, "target": f.target}
    items = [(label, _fmt_value(v, side[s])) for label, v, s in witness.items]
    labels = {label for label, _ in items}
    if len(items) > 1 and len(labels) == 1:
        return f"{items[0][0]}({', '.join(v for _, v in items)})"
    if len(items) == 1 and items[0][0] in ("bot", "top"):
        return f"{items[0][0]} ↦ not {items[0][0]}"
    return ", ".join(f"{label}={v}" for label, v in items)


def _line(out, label, res, f=None, witness=None):
    if res:
        out.append(f"{label}: ok")
        return True
    w = witness if witness is not None else getattr(res, "witness", None)
    out.append(f"{label}: FAIL" + (f" at {format_witness(w, f)}" if w is not None and f else ""))
    return False


def _fmt_exc(exc: StructureError, structure=None, names=None) -> str:
    """Error message, with index witnesses spelled by element names."""
    idx = getattr(exc, "pair", None) or getattr(exc, "triple", None)
    if idx is not None and (structure is not None or names is not None):
        try:
            names = names if names is not None else element_names(structure)
            return f"{type(exc).__name__} at ({', '.join(names[i] for i in idx)})"
        except (DocumentError, IndexError, TypeError):
            pass
    sets = getattr(exc, "witness", None)
    if isinstance(sets, tuple) and sets and all(isinstance(t, ExprSet) for t in sets) \
            and names is not None:
        return f"{type(exc).__name__} at {' ∩ '.join(set_name(t.mask, names) for t in sets)}"
    return f"{type(exc).__name__}: {exc}"


class _Output(list):
    """Collected stdout lines plus the document being processed."""
    doc = None
    names = None


# -- loading ------------------------------------------------------------------------

def load(path, out=None):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        doc = parse_document(text, p.parent)
    except DocumentError:
        raise
    except StructureError:
        # keep the declared names so index witnesses can be spelled out
        if out is not None:
            data = json.loads(text)
            out.names = data.get("elements") or data.get("expressions")
        raise
    if out is not None:
        out.doc = doc
    return doc


def _as_order(value) -> FinitePoset:
    if isinstance(value, FinitePoset):
        return value
    if isinstance(value, FiniteLattice):
        return value.poset
    if isinstance(value, HeytingAlgebra):
        return value.lattice.poset
    if isinstance(value, DualSpace):
        return value.order
    if isinstance(value, AbstractLogic):
        return logic_to_lattice(value).lattice.poset
    raise UsageError(f"cannot draw a {type(value).__name__}")


# -- subcommands ----------------------------------------------------------------------

def cmd_validate(args, out):
    doc = load(args.file, out)
    v = doc.value
    if doc.kind == "poset":
        out.append(f"poset: {v.size} points, {len(v.covers)} covers")
    elif doc.kind in ("lattice", "heyting"):
        lat = v.lattice if isinstance(v, HeytingAlgebra) else v
        out.append(f"{doc.kind}: {lat.size} elements")
        out.append(f"bounded: {str(lat.bounded).lower()}")
        out.append(f"distributive: {str(is_distributive(lat)).lower()}")
        if doc.kind == "lattice":
            try:
                heyting_implication(lat)
                out.append("heyting: true")
            except StructureError as exc:
                out.append(f"heyting: false ({_fmt_exc(exc, v)})")
    elif doc.kind == "logic":
        cls = classify_logic(v)
        rep = theory_report(v)
        names = element_names(v)
        out.append(f"logic: {v.expr_count} expressions, {len(v.theories)} theories")
        for flag in ("distributive", "bounded", "intuitionistic", "classical"):
            out.append(f"{flag}: {str(getattr(cls, flag)).lower()}")
        for label in ("prime", "totally_prime", "maximal", "complete"):
            sets = getattr(rep, label)
            out.append(f"{label}: [{', '.join(set_name(t.mask, names) for t in sets)}]")
    elif doc.kind == "space":
        out.append(f"space ({v.flavor}): {v.size} points, {len(v.opens)} open up-sets")
    else:
        out.append(f"map: {len(v.mapping)} elements, total")
    return 0


def _dualize(value, to):
    if to == "logic":
        if isinstance(value, HeytingAlgebra):
            return heyting_to_logic(value)
        if isinstance(value, FiniteLattice):
            return lattice_to_logic(value)
        if isinstance(value, DualSpace):
            return _dualize(space_to_lattice(value), to)
    elif to == "lattice":
        if isinstance(value, AbstractLogic):
            return logic_to_lattice(value).lattice
        if isinstance(value, HeytingAlgebra):
            return value.lattice
        if isinstance(value, DualSpace):
            lat = space_to_lattice(value)
            return lat.lattice if isinstance(lat, HeytingAlgebra) else lat
        if isinstance(value, FinitePoset):
            return upset_lattice(value)
    elif to == "heyting":
        if isinstance(value, AbstractLogic):
            return logic_to_heyting(value)[1]
        if isinstance(value, FiniteLattice):
            return heyting_implication(value)
        if isinstance(value, DualSpace):
            return heyting_implication(upset_lattice(value.order))
        if isinstance(value, FinitePoset):
            return heyting_implication(upset_lattice(value))
    else:
        if isinstance(value, AbstractLogic):
            value = logic_to_heyting(value)[1] if to == "esakia" else logic_to_lattice(value).lattice
        if isinstance(value, (FiniteLattice, HeytingAlgebra)):
            return dual_space(value, to)
    raise UsageError(f"cannot dualize a {type(value).__name__} to {to}")


def cmd_dualize(args, out):
    doc = load(args.file, out)
    if doc.kind == "map":
        raise UsageError("dualize takes a structure document; use check-map for maps")
    result = _dualize(doc.value, args.to)
    out.append(serialize(to_document(result, name=doc.name)).rstrip("\n"))
    return 0


def cmd_roundtrip(args, out):
    doc = load(args.file, out)
    v = doc.value
    if isinstance(v, AbstractLogic):
        rt = roundtrip_logic(v)
        names, rnames = element_names(v), element_names(rt.rebuilt)
        for e, c in enumerate(rt.class_map):
            out.append(f"{names[e]} ↦ {rnames[c]}")
        for t, u in rt.theory_map:
            out.append(f"{set_name(t.mask, names)} ↦ {set_name(u.mask, rnames)}")
        out.append(f"exact: {str(rt.exact).lower()}")
        return 0
    if isinstance(v, FinitePoset):
        v = upset_lattice(v)
    if isinstance(v, DualSpace):
        v = space_to_lattice(v)
    if not isinstance(v, (FiniteLattice, HeytingAlgebra)):
        raise UsageError(f"cannot round-trip a {doc.kind} document")
    rt = roundtrip_lattice(v)
    names = element_names(v)
    for a, s in enumerate(rt.space.basic_opens):
        pts = [rt.space.point_name(k) for k in s]
        out.append(f"{names[a]} ↦ {{{', '.join(pts)}}}")
    out.append("isomorphism: ok")
    return 0


def _monotone(f: StructureMap) -> CheckResult:
    res = is_esakia_morphism(f)
    if not res and res.witness.check == "monotone":
        return res
    return CheckResult(True)


def cmd_check_map(args, out):
    doc = load(args.mapfile, out)
    if doc.kind != "map":
        raise UsageError(f"{args.mapfile} is a {doc.kind} document, not a map")
    f = doc.value
    ok = True
    if all(isinstance(s, (DualSpace, FinitePoset)) for s in (f.source, f.target)):
        ok &= _line(out, "esakia_morphism", is_esakia_morphism(f), f)
        ok &= _line(out, "downset_preimage", check_downset_preimage(f), f)
        return 0 if ok else 1
    logics = isinstance(f.source, AbstractLogic)
    corr = correspondence_check(f)
    stab = corr.stability
    logic_side = f if logics else None
    heyting = corr.heyting_hom is not None
    w = stab.witnesses
    ok &= _line(out, "logic_application", stab.is_logic_application, logic_side or f,
                w.get("logic_application"))
    ok &= _line(out, "stable", stab.is_stable, f, w.get("stable"))
    if heyting or logics:
        ok &= _line(out, "strongly_stable", stab.is_strongly_stable, f, w.get("strongly_stable"))
    if stab.is_normal:
        out.append("normal: yes")
    else:
        out.append(f"normal: no ({format_witness(w['normal'], f)})")
    if not corr.well_defined:
        out.append("well_defined: FAIL (map does not respect equivalence of expressions)")
        return 1
    lmap = corr.lattice_map
    lat_res = is_lattice_hom(lmap)
    ok &= _line(out, "lattice_hom", lat_res, lmap)
    heyt_res = None
    if heyting:
        heyt_res = is_heyting_hom(lmap)
        ok &= _line(out, "heyting_hom", heyt_res, lmap)
    if corr.consistent:
        out.append("correspondence: consistent")
    else:
        bad = [k for k, v in corr.directions.items() if not v]
        out.append(f"correspondence: FAIL ({'; '.join(bad)})")
        ok = False
    if lat_res:
        flavor = "esakia" if heyt_res else "priestley"
        d = dualize_map(lmap, flavor)
        out.append(f"dual map ({flavor}):")
        for k, v in enumerate(d.mapping):
            out.append(f"  {d.source.point_name(k)} ↦ {d.target.point_name(v)}")
        ok &= _line(out, "dual_monotone", _monotone(d), d)
        if heyting:
            ok &= _line(out, "esakia_morphism", is_esakia_morphism(d), d)
    return 0 if ok else 1


def cmd_enumerate(args, out):
    budget = EnumBudget(max_points=args.max_points)
    if args.posets is not None:
        items = enumerate_posets(args.posets, budget)
        prefix = f"poset{args.posets}"
    else:
        items = enumerate_distributive_lattices(args.lattices, budget)
        prefix = "lattice"
    for k, s in enumerate(items):
        out.append(serialize(to_document(s, name=f"{prefix}_{k}"), compact=True))
    return 0


def _dot_id(s: str) -> str:
    return json.dumps(s, ensure_ascii=False)


def cmd_render(args, out):
    doc = load(args.file, out)
    if doc.kind == "map":
        raise UsageError("render takes a structure document")
    order = _as_order(doc.value)
    names = [order.name(i) for i in range(order.size)]
    if not args.dot:
        for a, b in order.covers:
            out.append(f"{names[a]} < {names[b]}")
        return 0
    out.append(f"digraph {_dot_id(doc.name or doc.kind)} {{")
    out.append("  rankdir=BT;")
    out.append("  node [shape=plaintext];")
    for x in names:
        out.append(f"  {_dot_id(x)};")
    for a, b in order.covers:
        out.append(f"  {_dot_id(names[a])} -> {_dot_id(names[b])};")
    out.append("}")
    return 0


# -- entry points ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="abslogic", description="Finite abstract logics, lattices and their duals.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("validate", help="validate and classify a structure")
    s.add_argument("file")
    s.set_defaults(run=cmd_validate)
    s = sub.add_parser("dualize", help="apply a duality functor and print the result")
    s.add_argument("file")
    s.add_argument("--to", required=True, choices=TARGETS)
    s.set_defaults(run=cmd_dualize)
    s = sub.add_parser("roundtrip", help="round-trip a logic or lattice through its dual")
    s.add_argument("file")
    s.set_defaults(run=cmd_roundtrip)
    s = sub.add_parser("check-map", help="stability, homomorphism and dual-map checks")
    s.add_argument("mapfile")
    s.set_defaults(run=cmd_check_map)
    s = sub.add_parser("enumerate", help="list structures as JSON lines")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--posets", type=int, metavar="N", help="posets with exactly N points")
    g.add_argument("--lattices", type=int, metavar="N", help="distributive lattices with at most N elements")
    s.add_argument("--max-points", type=int, default=5, help="point budget (default 5)")
    s.set_defaults(run=cmd_enumerate)
    s = sub.add_parser("render", help="draw the Hasse diagram")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true", help="emit Graphviz DOT")
    s.set_defaults(run=cmd_render)
    return p


def run_command(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    out = _Output()
    try:
        args = build_parser().parse_args(argv)
        code = args.run(args, out)
    except (UsageError, DocumentError) as exc:
        for line in out:
            print(line, file=stdout)
        print(f"error: {exc}", file=stderr)
        return 2
    except StructureError as exc:
        value = out.doc.value if out.doc is not None and out.doc.kind != "map" else None
        out.append(f"FAIL: {_fmt_exc(exc, value, out.names)}")
        code = 1
    for line in out:
        print(line, file=stdout)
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
