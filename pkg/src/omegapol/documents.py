"""JSON documents for every structure the command line reads or writes.

A document is ``{"kind": ..., "version": "1", "payload": {...}}``.  The
layout is fixed by ``schema.json`` (shipped with the package) and checked
with ``jsonschema`` before anything is built; fields the schema does not
know are rejected.  ``to_document(from_document(d))`` is the canonical form
of ``d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from typing import Any, Mapping, Sequence

import jsonschema

from . import freecat as fc
from .freecat import Comp, Gen, Id, Term, describe, to_term
from .globset import GlobularMap, GlobularSet, LazyGlobularMap
from .polygraph import Polygraph, PolyMorphism
from .strictcat import OmegaFunctor, TableCategory

__all__ = [
    "VERSION", "KINDS", "DocumentError", "TermDocument", "FunctorFork", "schema", "check",
    "from_document", "to_document", "roundtrip", "loads", "dumps", "load_path", "term_from_expr", "term_to_expr",
]

VERSION = "1"
KINDS = ("globset", "category", "functor", "globmap", "polygraph", "polymorphism", "term", "fork")


class DocumentError(ValueError):
    """Malformed input: bad JSON, schema violations or dangling names."""


@dataclass(frozen=True)
class TermDocument:
    polygraph: Polygraph
    term: Term
    other: Term | None = None


@dataclass(frozen=True)
class FunctorFork:
    """``f, g: source ⇉ target``, ``k: target -> quotient``, sections ``a`` of k and ``b`` of f."""

    f: OmegaFunctor
    g: OmegaFunctor
    k: OmegaFunctor
    a: OmegaFunctor
    b: OmegaFunctor
    name: str = ""

    @property
    def source(self) -> TableCategory:
        return self.f.dom

    @property
    def target(self) -> TableCategory:
        return self.f.cod

    @property
    def quotient(self) -> TableCategory:
        return self.k.cod

    def functors(self) -> dict[str, OmegaFunctor]:
        return {"f": self.f, "g": self.g, "k": self.k, "a": self.a, "b": self.b}

    def split_fork(self):
        from .monadicity import fork_of_functors
        return fork_of_functors(self.f, self.g, self.k, self.a, self.b, self.name)


@lru_cache(maxsize=None)
def schema() -> dict:
    text = resources.files("omegapol").joinpath("schema.json").read_text(encoding="utf-8")
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator() -> jsonschema.Draft202012Validator:
    return jsonschema.Draft202012Validator(schema())


def check(doc: Any) -> None:
    """Raise DocumentError unless ``doc`` matches the schema."""
    errors = sorted(_validator().iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        first = errors[0]
        where = "/".join(map(str, first.absolute_path)) or "<root>"
        raise DocumentError(f"schema violation at {where}: {first.message}")


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not JSON: {exc}") from None
    check(doc)
    return doc


def dumps(doc: Mapping, indent: int | None = None) -> str:
    seps = (",", ":") if indent is None else (",", ": ")
    return json.dumps(doc, ensure_ascii=False, indent=indent, separators=seps)


def load_path(path: str) -> tuple[str, object]:
    """Read, check and build a document file; returns ``(kind, value)``."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    doc = loads(text)
    return doc["kind"], from_document(doc)


# Terms

def term_from_expr(e: Sequence) -> Term:
    tag = e[0]
    if tag == "gen":
        return Gen(e[1])
    if tag == "id":
        return Id(term_from_expr(e[1]))
    return Comp(e[1], term_from_expr(e[2]), term_from_expr(e[3]))


def term_to_expr(t: Term) -> list:
    """Like ``freecat.term_expr`` but with every generator flattened to its description."""
    if isinstance(t, Gen):
        return ["gen", describe(t.name)]
    if isinstance(t, Id):
        return ["id", term_to_expr(t.term)]
    return ["comp", t.k, term_to_expr(t.lhs), term_to_expr(t.rhs)]


# Building values from payloads

def _unique(names: Sequence[str], what: str) -> None:
    seen = set()
    for x in names:
        if x in seen:
            raise DocumentError(f"{what} {x!r} is declared twice")
        seen.add(x)


def _pairs(rows: Sequence[Sequence[str]], what: str) -> dict:
    out = {}
    for x, y in rows:
        if x in out:
            raise DocumentError(f"{what}: {x!r} is mapped twice")
        out[x] = y
    return out


def _dims(p: Mapping) -> tuple[list[str], list[dict]]:
    dims = p["dims"]
    objects = list(dims[0])
    _unique(objects, "0-cell")
    layers = []
    for n, layer in enumerate(dims[1:], start=1):
        _unique([row[0] for row in layer], f"{n}-cell")
        layers.append({c: (s, t) for c, s, t in layer})
    return objects, layers


def _globset(p: Mapping) -> GlobularSet:
    objects, layers = _dims(p)
    return GlobularSet.build(objects, *layers)


def _category(p: Mapping) -> TableCategory:
    objects, layers = _dims(p)
    if len(p["identities"]) != len(layers):
        raise DocumentError(f"category {p['name']!r}: expected identities for {len(layers)} dimension(s), "
                            f"got {len(p['identities'])}")
    ids = [_pairs(rows, f"identities[{n}]") for n, rows in enumerate(p["identities"])]
    rows = [tuple(r) for r in p["compositions"]]
    keys = set()
    for k, n, x, y, _ in rows:
        if (k, n, x, y) in keys:
            raise DocumentError(f"composite {x} *{k} {y} in dimension {n} is given twice")
        keys.add((k, n, x, y))
    return TableCategory.build(p["name"], objects, layers, ids, rows)


def _is_category(p: Mapping) -> bool:
    return "identities" in p


def _tables(rows: Sequence, dims: int, what: str) -> list[dict]:
    if len(rows) != dims:
        raise DocumentError(f"{what}: expected maps for {dims} dimension(s), got {len(rows)}")
    return [_pairs(layer, f"{what} dimension {n}") for n, layer in enumerate(rows)]


def _functor(p: Mapping, C: TableCategory, D: TableCategory, what: str) -> OmegaFunctor:
    return OmegaFunctor.from_tables(C, D, _tables(p, C.max_dim + 1, what), what)


def _polygraph(p: Mapping) -> Polygraph:
    gens = p["generators"]
    objects = list(gens[0])
    _unique(objects, "0-generator")
    layers = []
    for n, layer in enumerate(gens[1:], start=1):
        _unique([row[0] for row in layer], f"{n}-generator")
        layers.append({g: (term_from_expr(s), term_from_expr(t)) for g, s, t in layer})
    try:
        P = Polygraph.build(objects, *layers, name=p["name"])
    except (fc.TypingError, KeyError, ValueError) as exc:
        raise DocumentError(f"polygraph {p['name']!r}: {exc}") from None
    if "provenance" in p:
        P = replace(P, provenance=dict(p["provenance"]))
    return P


def from_document(doc: Mapping) -> object:
    """Build the value a checked document describes."""
    kind, p = doc["kind"], doc["payload"]
    try:
        if kind == "globset":
            return _globset(p)
        if kind == "category":
            return _category(p)
        if kind == "functor":
            return _functor(p["maps"], _category(p["source"]), _category(p["target"]), p.get("name", "F"))
        if kind == "globmap":
            name = p.get("name", "alpha")
            if _is_category(p["source"]) != _is_category(p["target"]):
                raise DocumentError("globmap endpoints must both be globular sets or both categories")
            if _is_category(p["source"]):
                C, D = _category(p["source"]), _category(p["target"])
                tables = _tables(p["maps"], C.max_dim + 1, name)
                return LazyGlobularMap(C, D, lambda n, c: tables[n][c], name)
            X, Y = _globset(p["source"]), _globset(p["target"])
            return GlobularMap(X, Y, tuple(_tables(p["maps"], X.max_dim + 1, name)))
        if kind == "polygraph":
            return _polygraph(p)
        if kind == "polymorphism":
            P, Q = _polygraph(p["source"]), _polygraph(p["target"])
            return PolyMorphism.from_tables(P, Q, _tables(p["maps"], P.max_dim + 1, p.get("name", "u")),
                                            p.get("name", ""))
        if kind == "term":
            other = term_from_expr(p["other"]) if "other" in p else None
            return TermDocument(_polygraph(p["polygraph"]), term_from_expr(p["term"]), other)
        if kind == "fork":
            C, D, Q = (_category(p[w]) for w in ("source", "target", "quotient"))
            ends = {"f": (C, D), "g": (C, D), "k": (D, Q), "a": (Q, D), "b": (D, C)}
            fs = {w: _functor(p[w], *ends[w], w) for w in ends}
            return FunctorFork(name=p.get("name", ""), **fs)
    except DocumentError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(f"{kind} document: {exc}") from None
    raise DocumentError(f"unknown kind {kind!r}")


# Payloads from values

def _envelope(kind: str, payload: dict) -> dict:
    return {"kind": kind, "version": VERSION, "payload": payload}


def _dims_payload(cells: Sequence[Sequence[str]], src: Sequence[Mapping], tgt: Sequence[Mapping]) -> list:
    out: list = [list(cells[0])]
    for n in range(1, len(cells)):
        out.append([[c, src[n][c], tgt[n][c]] for c in cells[n]])
    return out


def globset_payload(X: GlobularSet) -> dict:
    return {"dims": _dims_payload(X.cells, X.src, X.tgt)}


def category_payload(C: TableCategory) -> dict:
    ids = [[[x, C.ids[n][x]] for x in C.cells[n] if x in C.ids[n]] for n in range(C.max_dim)]
    rows = [[k, n, x, y, z] for (k, n), table in sorted(C.comps.items()) for (x, y), z in table.items()]
    return {"name": C.name, "dims": _dims_payload(C.cells, C.srcs, C.tgts), "identities": ids,
            "compositions": rows}


def _map_rows(cells: Sequence[Sequence], fn) -> list:
    return [[[describe(c), describe(fn(n, c))] for c in layer] for n, layer in enumerate(cells)]


def polygraph_payload(P, max_dim: int | None = None, budget: int | None = None) -> dict:
    """Generators (listed up to ``budget`` for a lazy polygraph) with their attachments."""
    top = P.max_dim if max_dim is None else min(max_dim, P.max_dim)
    gens: list = [[describe(g) for g in P.generators(0, budget)]]
    for n in range(1, top + 1):
        layer = []
        for g in P.generators(n, budget):
            s, t = P.attach(g)
            layer.append([describe(g), term_to_expr(to_term(s)), term_to_expr(to_term(t))])
        gens.append(layer)
    out = {"name": getattr(P, "name", ""), "generators": gens}
    prov = getattr(P, "provenance", None)
    if prov:
        out["provenance"] = dict(prov)
    return out


def to_document(value: object, **kw) -> dict:
    """The canonical document for a value built by ``from_document`` (or an equivalent one)."""
    if isinstance(value, GlobularSet):
        return _envelope("globset", globset_payload(value))
    if isinstance(value, TableCategory):
        return _envelope("category", category_payload(value))
    if isinstance(value, OmegaFunctor):
        C, D = value.dom, value.cod
        return _envelope("functor", {"name": value.name, "source": category_payload(C),
                                     "target": category_payload(D), "maps": _map_rows(C.cells, value)})
    if isinstance(value, GlobularMap):
        return _envelope("globmap", {"source": globset_payload(value.dom), "target": globset_payload(value.cod),
                                     "maps": _map_rows(value.dom.cells, value)})
    if isinstance(value, LazyGlobularMap):
        C, D = value.dom, value.cod
        if not (isinstance(C, TableCategory) and isinstance(D, TableCategory)):
            raise TypeError("only maps between finite categories serialize")
        return _envelope("globmap", {"name": value.name, "source": category_payload(C),
                                     "target": category_payload(D), "maps": _map_rows(C.cells, value)})
    if isinstance(value, Polygraph):
        return _envelope("polygraph", polygraph_payload(value))
    if isinstance(value, PolyMorphism):
        P, Q = value.dom, value.cod
        cells = [P.generators(n) for n in range(P.max_dim + 1)]
        return _envelope("polymorphism", {"name": value.name, "source": polygraph_payload(P),
                                          "target": polygraph_payload(Q), "maps": _map_rows(cells, value)})
    if isinstance(value, TermDocument):
        p = {"polygraph": polygraph_payload(value.polygraph), "term": term_to_expr(value.term)}
        if value.other is not None:
            p["other"] = term_to_expr(value.other)
        return _envelope("term", p)
    if isinstance(value, FunctorFork):
        p: dict = {"name": value.name}
        for w in ("source", "target", "quotient"):
            p[w] = category_payload(getattr(value, w))
        for w, F in value.functors().items():
            p[w] = _map_rows(F.dom.cells, F)
        return _envelope("fork", p)
    raise TypeError(f"no document kind for {type(value).__name__}")


def roundtrip(doc: Mapping) -> dict:
    return to_document(from_document(doc))
