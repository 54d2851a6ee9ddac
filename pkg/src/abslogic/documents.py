"""JSON structure documents: parsing, building and canonical serialization.

Each document is a JSON object with a ``kind`` tag, optional ``name`` and
``comment``, and a kind-specific body that refers to elements by name.
Indices follow declaration order.  See ``docs/schema.md`` for the full
schema.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .abstract_logic import AbstractLogic, validate_logic
from .core_order import (
    ExprSet,
    FiniteLattice,
    FinitePoset,
    HeytingAlgebra,
    heyting_implication,
    lattice_from_order,
    set_name,
    validate_poset,
)
from .duality import DualSpace, FLAVORS
from .errors import StructureError
from .morphisms import StructureMap

KINDS = ("poset", "lattice", "heyting", "logic", "map", "space")


class DocumentError(StructureError):
    """Bad input document (as opposed to a structure failing a check)."""


class DocumentSyntaxError(DocumentError):
    def __init__(self, msg, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(msg + where)
        self.line = line
        self.column = column


class UnknownKind(DocumentError):
    def __init__(self, kind):
        super().__init__(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        self.kind = kind


class DuplicateName(DocumentError):
    def __init__(self, name):
        super().__init__(f"name {name!r} declared twice")
        self.name = name


class DanglingReference(DocumentError):
    def __init__(self, name, where):
        super().__init__(f"{where} refers to undeclared name {name!r}")
        self.name = name


@dataclass
class StructureDocument:
    kind: str
    body: dict
    value: Any = field(repr=False, default=None)
    name: Optional[str] = None
    comment: Optional[str] = None


# -- parsing ---------------------------------------------------------------------------

def _names(body, key):
    names = body.get(key)
    if not isinstance(names, list) or not all(isinstance(x, str) for x in names):
        raise DocumentSyntaxError(f"{key!r} must be a list of strings")
    seen = set()
    for x in names:
        if x in seen:
            raise DuplicateName(x)
        seen.add(x)
    return names


def _lookup(index, name, where):
    if not isinstance(name, str):
        raise DocumentSyntaxError(f"{where}: expected a name, got {name!r}")
    if name not in index:
        raise DanglingReference(name, where)
    return index[name]


def _pairs(body, key, index):
    pairs = body.get(key, [])
    if not isinstance(pairs, list):
        raise DocumentSyntaxError(f"{key!r} must be a list of pairs")
    out = []
    for p in pairs:
        if not isinstance(p, list) or len(p) != 2:
            raise DocumentSyntaxError(f"{key!r} entries must be [lower, upper] pairs")
        out.append((_lookup(index, p[0], key), _lookup(index, p[1], key)))
    return out


def _table(raw, index, n, key):
    if not isinstance(raw, list) or len(raw) != n:
        raise DocumentSyntaxError(f"{key!r} must have one row per expression")
    rows = []
    for row in raw:
        if not isinstance(row, list) or len(row) != n:
            raise DocumentSyntaxError(f"{key!r} rows must have one entry per expression")
        rows.append(tuple(_lookup(index, x, key) for x in row))
    return tuple(rows)


def _parse_order(body):
    names = _names(body, "elements")
    index = {x: i for i, x in enumerate(names)}
    return validate_poset(len(names), _pairs(body, "covers", index), names)


def _parse_logic(body):
    names = _names(body, "expressions")
    index = {x: i for i, x in enumerate(names)}
    n = len(names)
    raw = body.get("theories")
    if not isinstance(raw, list):
        raise DocumentSyntaxError("'theories' must be a list of name lists")
    theories = []
    for t in raw:
        if not isinstance(t, list):
            raise DocumentSyntaxError("each theory must be a list of names")
        theories.append(ExprSet.of(n, (_lookup(index, x, "theories") for x in t)))
    conn = body.get("connectives", {})
    if not isinstance(conn, dict):
        raise DocumentSyntaxError("'connectives' must be an object")
    unknown = set(conn) - {"join", "meet", "impl", "neg", "bot", "top"}
    if unknown:
        raise DocumentSyntaxError(f"unknown connectives {sorted(unknown)}")
    kw = {}
    for key in ("join", "meet", "impl"):
        if key in conn:
            kw[key] = _table(conn[key], index, n, key)
    if "neg" in conn:
        if not isinstance(conn["neg"], list) or len(conn["neg"]) != n:
            raise DocumentSyntaxError("'neg' must list one image per expression")
        kw["neg"] = tuple(_lookup(index, x, "neg") for x in conn["neg"])
    for key in ("bot", "top"):
        if key in conn:
            kw[key] = _lookup(index, conn[key], key)
    return validate_logic(n, theories, names=names, **kw)


def _parse_space(body):
    flavor = body.get("flavor", "priestley")
    if flavor not in FLAVORS:
        raise DocumentSyntaxError(f"unknown flavor {flavor!r}")
    carrier = _names(body, "carrier")
    cindex = {x: i for i, x in enumerate(carrier)}
    raw = body.get("points")
    if not isinstance(raw, list):
        raise DocumentSyntaxError("'points' must be a list of name lists")
    points = []
    for p in raw:
        if not isinstance(p, list):
            raise DocumentSyntaxError("each point must be a list of carrier names")
        points.append(ExprSet.of(len(carrier), (_lookup(cindex, x, "points") for x in p)))
    pnames = [set_name(p.mask, carrier) for p in points]
    if len(set(pnames)) != len(pnames):
        raise DuplicateName(next(x for x in pnames if pnames.count(x) > 1))
    pindex = {x: i for i, x in enumerate(pnames)}
    k = len(points)
    up = tuple(sum(1 << j for j in range(k) if points[i].issubset(points[j])) for i in range(k))
    order = FinitePoset(k, up, tuple(pnames))
    opens_raw = body.get("basic_opens")
    if not isinstance(opens_raw, dict):
        raise DocumentSyntaxError("'basic_opens' must map carrier names to point lists")
    opens = []
    for x in carrier:
        if x not in opens_raw:
            raise DocumentSyntaxError(f"'basic_opens' lacks an entry for {x!r}")
        s = ExprSet.of(k, (_lookup(pindex, y, "basic_opens") for y in opens_raw[x]))
        # redundant with points, so it must agree: the points containing x
        if s.mask != sum(1 << i for i in range(k) if cindex[x] in points[i]):
            raise DocumentSyntaxError(f"'basic_opens' entry for {x!r} is not the set of "
                                      f"points containing it")
        opens.append(s)
    for x in opens_raw:
        _lookup(cindex, x, "basic_opens")
    return DualSpace(tuple(points), order, tuple(opens), flavor, tuple(carrier))


def element_names(value):
    if isinstance(value, AbstractLogic):
        return [value.name(i) for i in range(value.expr_count)]
    if isinstance(value, (FinitePoset, FiniteLattice, HeytingAlgebra)):
        return [value.name(i) for i in range(value.size)]
    if isinstance(value, DualSpace):
        return [value.point_name(i) for i in range(value.size)]
    raise DocumentSyntaxError("map ends must be structures")


def _parse_map(body, base_dir):
    ends = []
    for key in ("source", "target"):
        ref = body.get(key)
        if isinstance(ref, str):
            path = Path(base_dir or ".") / ref
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise DocumentError(f"cannot read {key} document {ref!r}: {exc}") from exc
            sub = parse_document(text, path.parent)
        elif isinstance(ref, dict):
            sub = _parse_value(ref, base_dir)
        else:
            raise DocumentSyntaxError(f"{key!r} must be a document or a file path")
        if sub.kind == "map":
            raise DocumentSyntaxError(f"{key!r} cannot itself be a map")
        ends.append(sub)
    src, tgt = ends
    snames, tnames = element_names(src.value), element_names(tgt.value)
    tindex = {x: i for i, x in enumerate(tnames)}
    raw = body.get("mapping")
    if not isinstance(raw, dict):
        raise DocumentSyntaxError("'mapping' must map source names to target names")
    sindex = set(snames)
    for x in raw:
        if x not in sindex:
            raise DanglingReference(x, "mapping")
    missing = [x for x in snames if x not in raw]
    if missing:
        raise DocumentSyntaxError(f"mapping is not total; no image for {missing[0]!r}")
    mapping = tuple(_lookup(tindex, raw[x], "mapping") for x in snames)
    return StructureMap(src.value, tgt.value, mapping), src, tgt


def _parse_value(data, base_dir=None) -> StructureDocument:
    if not isinstance(data, dict):
        raise DocumentSyntaxError("a document must be a JSON object")
    kind = data.get("kind")
    if kind is None:
        raise DocumentSyntaxError("document has no 'kind'")
    if kind not in KINDS:
        raise UnknownKind(kind)
    name, comment = data.get("name"), data.get("comment")
    body = {k: v for k, v in data.items() if k not in ("kind", "name", "comment")}
    if kind == "poset":
        value = _parse_order(body)
    elif kind == "lattice":
        value = lattice_from_order(_parse_order(body))
    elif kind == "heyting":
        value = heyting_implication(lattice_from_order(_parse_order(body)))
    elif kind == "logic":
        value = _parse_logic(body)
    elif kind == "space":
        value = _parse_space(body)
    else:
        value, src, tgt = _parse_map(body, base_dir)
        body = dict(body)
        doc = StructureDocument(kind, body, value, name, comment)
        doc.source_doc, doc.target_doc = src, tgt
        return doc
    return StructureDocument(kind, body, value, name, comment)


def parse_document(text: str, base_dir=None) -> StructureDocument:
    """Parse and validate one document.  Map documents may reference their
    ends by path, resolved against ``base_dir``."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return _parse_value(data, base_dir)


# -- building ------------------------------------------------------------------------

def _order_body(poset: FinitePoset):
    names = [poset.name(i) for i in range(poset.size)]
    return {"elements": names,
            "covers": [[names[a], names[b]] for a, b in poset.covers]}


def _logic_body(logic: AbstractLogic):
    names = [logic.name(i) for i in range(logic.expr_count)]
    body = {"expressions": names,
            "theories": [[names[i] for i in t] for t in logic.theories]}
    conn = {}
    for key in ("join", "meet", "impl"):
        table = getattr(logic, key)
        if table is not None:
            conn[key] = [[names[v] for v in row] for row in table]
    if logic.neg is not None:
        conn["neg"] = [names[v] for v in logic.neg]
    for key in ("bot", "top"):
        v = getattr(logic, key)
        if v is not None:
            conn[key] = names[v]
    if conn:
        body["connectives"] = conn
    return body


def _space_body(space: DualSpace):
    carrier = list(space.carrier_names or [str(i) for i in range(space.points[0].universe_size
                                                                 if space.points else 0)])
    pnames = [space.point_name(i) for i in range(space.size)]
    return {"flavor": space.flavor,
            "carrier": carrier,
            "points": [[carrier[i] for i in p] for p in space.points],
            "basic_opens": {carrier[a]: [pnames[k] for k in s]
                            for a, s in enumerate(space.basic_opens)}}


def to_document(value, name: Optional[str] = None, comment: Optional[str] = None) -> StructureDocument:
    """Document for a core structure (maps embed both ends inline)."""
    if isinstance(value, FinitePoset):
        kind, body = "poset", _order_body(value)
    elif isinstance(value, FiniteLattice):
        kind, body = "lattice", _order_body(value.poset)
    elif isinstance(value, HeytingAlgebra):
        kind, body = "heyting", _order_body(value.lattice.poset)
    elif isinstance(value, AbstractLogic):
        kind, body = "logic", _logic_body(value)
    elif isinstance(value, DualSpace):
        kind, body = "space", _space_body(value)
    elif isinstance(value, StructureMap):
        src, tgt = to_document(value.source), to_document(value.target)
        snames, tnames = element_names(value.source), element_names(value.target)
        kind = "map"
        body = {"source": _as_object(src), "target": _as_object(tgt),
                "mapping": {snames[i]: tnames[v] for i, v in enumerate(value.mapping)}}
    else:
        raise StructureError(f"cannot serialize {type(value).__name__}")
    return StructureDocument(kind, body, value, name, comment)


# -- serialization -------------------------------------------------------------------------

_BODY_ORDER = {
    "poset": ("elements", "covers"),
    "lattice": ("elements", "covers"),
    "heyting": ("elements", "covers"),
    "logic": ("expressions", "theories", "connectives"),
    "space": ("flavor", "carrier", "points", "basic_opens"),
    "map": ("source", "target", "mapping"),
}


def _canonical_body(doc: StructureDocument) -> dict:
    if doc.kind == "map":
        # keep file references as written; regenerate the mapping
        body = to_document(doc.value).body
        for key in ("source", "target"):
            if isinstance(doc.body.get(key), str):
                body[key] = doc.body[key]
        return body
    return to_document(doc.value).body


def _as_object(doc: StructureDocument) -> dict:
    out = {"kind": doc.kind}
    if doc.name is not None:
        out["name"] = doc.name
    if doc.comment is not None:
        out["comment"] = doc.comment
    body = _canonical_body(doc) if doc.value is not None else doc.body
    for key in _BODY_ORDER[doc.kind]:
        if key in body:
            out[key] = body[key]
    return out


def serialize(doc: StructureDocument, compact: bool = False) -> str:
    """Canonical text: one top-level key per line, values on a single line.
    ``compact`` gives a single-line form (used for JSON-lines output)."""
    obj = _as_object(doc)
    if compact:
        return json.dumps(obj, ensure_ascii=False)
    lines = [f"  {json.dumps(k)}: {json.dumps(v, ensure_ascii=False)}" for k, v in obj.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"
