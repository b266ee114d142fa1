"""Finite and lazy polygraphs, their morphisms, and the two functors linking
them to globular sets: the inclusion of globular sets and the globular core.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Protocol, Sequence, runtime_checkable

from . import freecat as fc
from .freecat import NF0, NF1, NormalCell, UndeclaredGenerator, describe, okey
from .globset import GlobularError, GlobularMap, GlobularSet
from .report import Report
from .strictcat import CompositionError

Generator = Hashable


@runtime_checkable
class LazyPolygraph(Protocol):
    """What the free-category machinery needs from a polygraph."""

    max_dim: int
    finite: bool

    def gen_dim(self, g: Generator) -> int: ...

    def attach(self, g: Generator) -> tuple[NormalCell, NormalCell]: ...

    def generators(self, n: int, budget: int | None = None) -> list: ...

    def contains(self, n: int, g: Generator) -> bool: ...


@dataclass(frozen=True)
class Polygraph:
    """Finitely many generators per dimension with attaching cells.

    ``attachments[g] = (src, tgt)`` holds normal cells of the free category on
    the generators of lower dimension.
    """

    max_dim: int
    gens: tuple[tuple[Generator, ...], ...]
    attachments: Mapping[Generator, tuple[NormalCell, NormalCell]] = field(compare=False)
    name: str = field(default="", compare=False)
    provenance: Mapping | None = field(default=None, compare=False)
    finite = True

    def __post_init__(self):
        dims: dict[Generator, int] = {}
        ambiguous = set()
        for n, layer in enumerate(self.gens):
            for g in layer:
                if g in dims:
                    ambiguous.add(g)
                dims[g] = n
        object.__setattr__(self, "_dims", dims)
        object.__setattr__(self, "_ambiguous", frozenset(ambiguous))

    def __eq__(self, other):
        if not isinstance(other, Polygraph):
            return NotImplemented
        return (self.max_dim == other.max_dim
                and [set(a) for a in self.gens] == [set(b) for b in other.gens]
                and dict(self.attachments) == dict(other.attachments))

    __hash__ = object.__hash__

    def gen_dim(self, g: Generator) -> int:
        try:
            n = self._dims[g]
        except (KeyError, TypeError):
            raise UndeclaredGenerator(f"undeclared generator {describe(g)}") from None
        if g in self._ambiguous:
            raise fc.TypingError(f"generator name {describe(g)} is used in several dimensions")
        return n

    def attach(self, g: Generator) -> tuple[NormalCell, NormalCell]:
        try:
            return self.attachments[g]
        except KeyError:
            raise UndeclaredGenerator(f"no attachment for {describe(g)}") from None

    def generators(self, n: int, budget: int | None = None) -> list:
        return list(self.gens[n]) if 0 <= n <= self.max_dim else []

    def contains(self, n: int, g: Generator) -> bool:
        return 0 <= n <= self.max_dim and g in self.gens[n]

    def count(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.gens)

    @classmethod
    def build(cls, objects: Sequence[Generator], *layers: Mapping[Generator, tuple],
              name: str = "", max_dim: int | None = None) -> Polygraph:
        """Build dimension by dimension.

        Each layer maps generator names to ``(src, tgt)`` given as terms,
        normal cells, generator names (for single generators) or sequences of
        1-generator names (for paths).
        """
        top = len(layers) if max_dim is None else max_dim
        layers = tuple(layers) + ({},) * (top - len(layers))
        gens: list[tuple] = [tuple(objects)]
        attachments: dict = {}
        for n, layer in enumerate(layers, start=1):
            partial = cls(n - 1, tuple(gens), attachments)
            for g, (s, t) in layer.items():
                attachments[g] = (_as_cell(partial, s, n - 1), _as_cell(partial, t, n - 1))
            gens.append(tuple(layer))
        return cls(top, tuple(gens), dict(attachments), name)

    def truncate(self, n: int) -> Polygraph:
        keep = self.gens[: n + 1]
        att = {g: self.attachments[g] for layer in keep[1:] for g in layer}
        return Polygraph(n, keep, att, self.name)


def _as_cell(P, spec, n: int) -> NormalCell:
    if fc._is_cell(spec):
        return spec
    if isinstance(spec, (fc.Gen, fc.Id, fc.Comp)):
        return fc.normalize(P, spec)
    if n == 0:
        return NF0(spec)
    if n == 1 and isinstance(spec, (list, tuple)):
        if not spec:
            raise GlobularError("an empty path needs an anchor: pass NF1(anchor, ())")
        return NF1(fc.obj_src(P, spec[0]), tuple(spec))
    return fc.iota(P, spec)


def validate_polygraph(P, budget: int | None = None) -> Report:
    """Attachment validity and parallelism for every (budgeted) generator."""
    rep = Report("polygraph")
    for n in range(1, P.max_dim + 1):
        for g in P.generators(n, budget):
            try:
                s, t = P.attach(g)
            except KeyError:
                rep.add("undeclared", describe(g), dim=n, detail="no attachment", malformed=True)
                continue
            bad = False
            for side, c in (("src", s), ("tgt", t)):
                try:
                    ok = fc.cell_dim(c) == n - 1 and fc.check_cell(P, c)
                except (KeyError, fc.TypingError, CompositionError, TypeError):
                    ok = False
                if not ok:
                    rep.add("undeclared", describe(g), str(c), dim=n, detail=f"{side} is not a valid "
                            f"{n - 1}-cell over lower generators", malformed=True)
                    bad = True
            if bad or n < 2:
                rep.checked += 1
                continue
            rep.checked += 1
            if fc.source(P, s) != fc.source(P, t) or fc.target(P, s) != fc.target(P, t):
                rep.add("parallelism", describe(g), dim=n,
                        detail=f"src {s} and tgt {t} are not parallel")
    return rep


# Morphisms

@dataclass(frozen=True)
class PolyMorphism:
    """Generator-to-generator map ``u(n, g)`` between (lazy) polygraphs."""

    dom: object
    cod: object
    fn: Callable[[int, Generator], Generator] = field(compare=False)
    name: str = field(default="", compare=False)
    tables: tuple[Mapping, ...] | None = field(default=None, compare=False)

    def __call__(self, n: int, g: Generator) -> Generator:
        return self.fn(n, g)

    @classmethod
    def from_tables(cls, dom, cod, maps: Sequence[Mapping], name: str = "") -> PolyMorphism:
        frozen = tuple(dict(m) for m in maps)

        def fn(n, g):
            try:
                return frozen[n][g]
            except KeyError:
                raise UndeclaredGenerator(f"{describe(g)} not mapped") from None

        return cls(dom, cod, fn, name, frozen)

    @classmethod
    def identity(cls, P) -> PolyMorphism:
        return cls(P, P, lambda n, g: g, "id")

    def table(self, n: int, budget: int | None = None) -> dict:
        return {g: self(n, g) for g in self.dom.generators(n, budget)}

    def on_cell(self, c: NormalCell) -> NormalCell:
        return fc.apply_free_morphism(self, c)


def memoized(u: PolyMorphism) -> PolyMorphism:
    memo: dict = {}
    inner = u.fn

    def fn(n, g):
        key = (n, g)
        try:
            return memo[key]
        except KeyError:
            v = memo[key] = inner(n, g)
            return v

    return PolyMorphism(u.dom, u.cod, fn, u.name, u.tables)


def compose_polymorphisms(u: PolyMorphism, v: PolyMorphism) -> PolyMorphism:
    """Diagrammatic composite: first ``u`` then ``v``."""
    name = f"{v.name}∘{u.name}" if u.name and v.name else ""
    return PolyMorphism(u.dom, v.cod, lambda n, g: v(n, u(n, g)), name)


def validate_polymorphism(u: PolyMorphism, budget: int | None = None) -> Report:
    rep = Report("polymorphism")
    P, Q = u.dom, u.cod
    for n in range(P.max_dim + 1):
        for g in P.generators(n, budget):
            try:
                ug = u(n, g)
            except KeyError:
                rep.add("undeclared", describe(g), dim=n, detail="generator not mapped", malformed=True)
                continue
            if not Q.contains(n, ug):
                rep.add("undeclared", describe(g), describe(ug), dim=n, detail="image not a generator",
                        malformed=True)
                continue
            if n == 0:
                continue
            rep.checked += 1
            s, t = P.attach(g)
            try:
                expected = (fc.apply_free_morphism(u, s), fc.apply_free_morphism(u, t))
            except (KeyError, CompositionError) as exc:
                rep.add("attach", describe(g), dim=n, detail=f"boundary does not map: {exc}")
                continue
            if Q.attach(ug) != expected:
                rep.add("attach", describe(g), describe(ug), dim=n,
                        detail="attachment of the image differs from the image of the attachment")
    return rep


def morphisms_agree(u: PolyMorphism, v: PolyMorphism, budget: int | None = None,
                    dims: Iterable[int] | None = None) -> Report:
    rep = Report("agree")
    P = u.dom
    for n in (range(P.max_dim + 1) if dims is None else dims):
        for g in P.generators(n, budget):
            rep.checked += 1
            if u(n, g) != v(n, g):
                rep.add("differ", describe(g), dim=n)
    return rep


# Globular sets <-> polygraphs

def glob_to_poly(X: GlobularSet) -> Polygraph:
    """The polygraph whose n-generators are the n-cells of ``X``."""
    gens: list[tuple] = [tuple(X.cells[0])]
    attachments: dict = {}
    for n in range(1, X.max_dim + 1):
        lower = Polygraph(n - 1, tuple(gens), attachments)
        for c in X.cells[n]:
            attachments[c] = (fc.iota(lower, X.src[n][c]), fc.iota(lower, X.tgt[n][c]))
        gens.append(tuple(X.cells[n]))
    return Polygraph(X.max_dim, tuple(gens), attachments, "glob")


@dataclass(frozen=True)
class Core:
    """Hereditarily globular generators of a polygraph, by dimension."""

    polygraph: object
    gens: tuple[tuple[Generator, ...], ...]
    src: tuple[Mapping, ...]
    tgt: tuple[Mapping, ...]

    def globset(self) -> GlobularSet:
        return GlobularSet(
            len(self.gens) - 1,
            tuple(tuple(describe(g) for g in layer) for layer in self.gens),
            tuple({describe(g): describe(s) for g, s in m.items()} for m in self.src),
            tuple({describe(g): describe(t) for g, t in m.items()} for m in self.tgt),
        )

    def members(self, n: int) -> frozenset:
        return frozenset(self.gens[n])

    def by_id(self, n: int) -> dict[str, Generator]:
        return {describe(g): g for g in self.gens[n]}


def core_generators(P, budget: int | None = None) -> Core:
    gens = [tuple(P.generators(0, budget))]
    srcs: list[dict] = [{}]
    tgts: list[dict] = [{}]
    for n in range(1, P.max_dim + 1):
        lower = set(gens[-1])
        layer, s_map, t_map = [], {}, {}
        for g in P.generators(n, budget):
            s, t = P.attach(g)
            gs, gt = fc.single_generator(s), fc.single_generator(t)
            if gs is None or gt is None or gs not in lower or gt not in lower:
                continue
            layer.append(g)
            s_map[g], t_map[g] = gs, gt
        gens.append(tuple(layer))
        srcs.append(s_map)
        tgts.append(t_map)
    return Core(P, tuple(gens), tuple(srcs), tuple(tgts))


def poly_core(P, budget: int | None = None) -> GlobularSet:
    """The globular core G(P): generators whose boundaries are core generators."""
    return core_generators(P, budget).globset()


def core_of_morphism(u: PolyMorphism, budget: int | None = None) -> GlobularMap:
    """G on morphisms: restriction of ``u`` to core generators."""
    dom_core = core_generators(u.dom, budget)
    cod_core = core_generators(u.cod, budget)
    maps = []
    for n, layer in enumerate(dom_core.gens):
        members = cod_core.members(n)
        m = {}
        for g in layer:
            ug = u(n, g)
            if ug not in members:
                raise AssertionError(f"image of core generator {describe(g)} is not in the core")
            m[describe(g)] = describe(ug)
        maps.append(m)
    return GlobularMap(dom_core.globset(), cod_core.globset(), tuple(maps))


def core_inclusion(P, budget: int | None = None) -> PolyMorphism:
    """The counit of the inclusion/core adjunction: Ǧ G(P) -> P."""
    core = core_generators(P, budget)
    X = core.globset()
    GX = glob_to_poly(X)
    lookup = [core.by_id(n) for n in range(len(core.gens))]
    return PolyMorphism(GX, P, lambda n, g: lookup[n][g], "core-inclusion")


def sort_generators(gs: Iterable[Generator]) -> list:
    return sorted(gs, key=okey)
