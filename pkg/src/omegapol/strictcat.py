"""Strict n-truncated omega-categories.

Cells are addressed by ``(n, x)``: the dimension travels with the cell so that
identifiers only need to be unique within one dimension.  ``comp(k, n, x, y)``
composes two n-cells along their k-dimensional boundary in diagrammatic
order, defined when ``tgt_k(x) == src_k(y)``.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Protocol, Sequence, runtime_checkable

from .globset import GlobularSet
from .report import Report

Cell = Hashable


class CompositionError(ValueError):
    """Raised when two cells are not composable."""


@runtime_checkable
class StrictCategory(Protocol):
    max_dim: int

    def enumerate_cells(self, n: int, budget: int | None = None) -> list: ...

    def has_cell(self, n: int, x: Cell) -> bool: ...

    def src(self, n: int, x: Cell) -> Cell: ...

    def tgt(self, n: int, x: Cell) -> Cell: ...

    def identity(self, n: int, x: Cell) -> Cell: ...

    def comp(self, k: int, n: int, x: Cell, y: Cell) -> Cell: ...


# Helpers valid for any StrictCategory.

def src_k(C: StrictCategory, k: int, n: int, x: Cell) -> Cell:
    while n > k:
        x = C.src(n, x)
        n -= 1
    return x


def tgt_k(C: StrictCategory, k: int, n: int, x: Cell) -> Cell:
    while n > k:
        x = C.tgt(n, x)
        n -= 1
    return x


def id_up(C: StrictCategory, k: int, n: int, x: Cell) -> Cell:
    """Iterated identity lifting a k-cell to dimension n."""
    while k < n:
        x = C.identity(k, x)
        k += 1
    return x


def composable(C: StrictCategory, k: int, n: int, x: Cell, y: Cell) -> bool:
    return tgt_k(C, k, n, x) == src_k(C, k, n, y)


def is_finite(C: object) -> bool:
    return bool(getattr(C, "finite", False))


@dataclass(frozen=True)
class TableCategory:
    """A finite strict category given by explicit operation tables.

    ``ids[n]`` maps n-cells to (n+1)-cells for ``n < max_dim``;
    ``comps[(k, n)]`` maps composable pairs of n-cells to their composite.
    """

    max_dim: int
    cells: tuple[tuple[str, ...], ...]
    srcs: tuple[Mapping[str, str], ...]
    tgts: tuple[Mapping[str, str], ...]
    ids: tuple[Mapping[str, str], ...]
    comps: Mapping[tuple[int, int], Mapping[tuple[str, str], str]]
    name: str = field(default="", compare=False)
    finite = True

    def enumerate_cells(self, n: int, budget: int | None = None) -> list[str]:
        return list(self.cells[n]) if 0 <= n <= self.max_dim else []

    def has_cell(self, n: int, x: Cell) -> bool:
        if not 0 <= n <= self.max_dim:
            return False
        idx = self.__dict__.get("_cellsets")
        if idx is None:
            idx = tuple(frozenset(cs) for cs in self.cells)
            object.__setattr__(self, "_cellsets", idx)
        return x in idx[n]

    def src(self, n: int, x: Cell) -> str:
        return self.srcs[n][x]

    def tgt(self, n: int, x: Cell) -> str:
        return self.tgts[n][x]

    def identity(self, n: int, x: Cell) -> str:
        if n >= self.max_dim:
            raise CompositionError(f"no identities above max_dim {self.max_dim}")
        return self.ids[n][x]

    def comp(self, k: int, n: int, x: Cell, y: Cell) -> str:
        try:
            return self.comps[(k, n)][(x, y)]
        except KeyError:
            raise CompositionError(f"{x} and {y} are not {k}-composable {n}-cells") from None

    @classmethod
    def build(cls, name: str, objects: Sequence[str], cells: Sequence[Mapping[str, tuple[str, str]]],
              ids: Sequence[Mapping[str, str]], comps: Iterable[tuple[int, int, str, str, str]]) -> TableCategory:
        """Assemble from per-dimension boundary dicts and ``(k, n, x, y, xy)`` rows."""
        max_dim = len(cells)
        table: dict[tuple[int, int], dict[tuple[str, str], str]] = defaultdict(dict)
        for k, n, x, y, z in comps:
            table[(k, n)][(x, y)] = z
        return cls(
            max_dim,
            (tuple(objects),) + tuple(tuple(layer) for layer in cells),
            ({},) + tuple({c: b[0] for c, b in layer.items()} for layer in cells),
            ({},) + tuple({c: b[1] for c, b in layer.items()} for layer in cells),
            tuple(dict(m) for m in ids),
            {key: dict(v) for key, v in sorted(table.items())},
            name,
        )

    def with_edit(self, table: str, key, value) -> TableCategory:
        """Copy with one table entry changed; the basis of mutation tests.

        ``table`` is ``"src"``/``"tgt"``/``"id"`` with ``key = (n, cell)`` or
        ``"comp"`` with ``key = (k, n, x, y)``.
        """
        if table in ("src", "tgt", "id"):
            n, c = key
            layers = [dict(m) for m in {"src": self.srcs, "tgt": self.tgts, "id": self.ids}[table]]
            layers[n][c] = value
            new = tuple(layers)
            return TableCategory(self.max_dim, self.cells,
                                 new if table == "src" else self.srcs,
                                 new if table == "tgt" else self.tgts,
                                 new if table == "id" else self.ids,
                                 self.comps, self.name + "*")
        if table == "comp":
            k, n, x, y = key
            comps = {kn: dict(v) for kn, v in self.comps.items()}
            comps.setdefault((k, n), {})
            if value is None:
                comps[(k, n)].pop((x, y), None)
            else:
                comps[(k, n)][(x, y)] = value
            return TableCategory(self.max_dim, self.cells, self.srcs, self.tgts, self.ids, comps,
                                 self.name + "*")
        raise ValueError(f"unknown table {table!r}")


def tabulate(C: StrictCategory, name: str = "") -> TableCategory:
    """Freeze a finite category (any implementation) into tables."""
    cells = [tuple(C.enumerate_cells(n)) for n in range(C.max_dim + 1)]
    srcs = [{}] + [{x: C.src(n, x) for x in cells[n]} for n in range(1, C.max_dim + 1)]
    tgts = [{}] + [{x: C.tgt(n, x) for x in cells[n]} for n in range(1, C.max_dim + 1)]
    ids = [{x: C.identity(n, x) for x in cells[n]} for n in range(C.max_dim)]
    comps: dict[tuple[int, int], dict] = {}
    for n in range(1, C.max_dim + 1):
        for k in range(n):
            comps[(k, n)] = {(x, y): C.comp(k, n, x, y) for x, y in composable_pairs(C, k, n, cells[n])}
    return TableCategory(C.max_dim, tuple(cells), tuple(srcs), tuple(tgts), tuple(ids), comps, name)


def composable_pairs(C: StrictCategory, k: int, n: int, xs: Sequence[Cell],
                     max_size: int | None = None) -> list[tuple[Cell, Cell]]:
    """All (x, y) in ``xs`` with ``tgt_k(x) == src_k(y)``, via a boundary index.

    With ``max_size`` (and a category exposing ``cell_size``) only pairs whose
    sizes sum to at most ``max_size`` are returned.
    """
    size = getattr(C, "cell_size", None) if max_size is not None else None
    by_src: dict[Cell, list[Cell]] = defaultdict(list)
    for y in xs:
        by_src[src_k(C, k, n, y)].append(y)
    if size is None:
        return [(x, y) for x in xs for y in by_src.get(tgt_k(C, k, n, x), ())]
    sized = {key: sorted(((size(y), y) for y in ys), key=lambda p: p[0]) for key, ys in by_src.items()}
    out = []
    for x in xs:
        room = max_size - size(x)
        for sy, y in sized.get(tgt_k(C, k, n, x), ()):
            if sy > room:
                break
            out.append((x, y))
    return out


def forget(C: StrictCategory, budget: int | None = None) -> GlobularSet:
    """Underlying globular set: same cells and boundaries, structure dropped."""
    cells = [list(C.enumerate_cells(n, budget)) for n in range(C.max_dim + 1)]
    ident = [[str(c) for c in layer] for layer in cells]
    return GlobularSet(
        C.max_dim,
        tuple(tuple(layer) for layer in ident),
        ({},) + tuple({str(x): str(C.src(n, x)) for x in cells[n]} for n in range(1, C.max_dim + 1)),
        ({},) + tuple({str(x): str(C.tgt(n, x)) for x in cells[n]} for n in range(1, C.max_dim + 1)),
    )


# Axiom validation

AXIOMS = ("globular", "id-boundary", "comp-boundary", "unit-left", "unit-right",
          "associativity", "interchange", "id-functoriality")


def validate_category(C: StrictCategory, budget: int | None = None) -> Report:
    """Check every strict omega-category axiom on all (budgeted) cells.

    Table malformations (undeclared identifiers, composites on pairs that do
    not compose, missing composites) are reported as malformed and stop the
    axiom pass, since axiom instances would be meaningless.
    """
    rep = Report("category")
    if isinstance(C, TableCategory):
        _check_tables(C, rep)
        if rep.malformed:
            return rep
    cells = [list(C.enumerate_cells(n, budget)) for n in range(C.max_dim + 1)]
    present = [set(layer) for layer in cells]

    def within(n: int, x: Cell) -> bool:
        return budget is None or x in present[n]

    for n in range(2, C.max_dim + 1):
        for x in cells[n]:
            s, t = C.src(n, x), C.tgt(n, x)
            rep.checked += 1
            if C.src(n - 1, s) != C.src(n - 1, t) or C.tgt(n - 1, s) != C.tgt(n - 1, t):
                rep.add("globular", x, dim=n, detail=f"src={s} tgt={t} not parallel")
    for n in range(C.max_dim):
        for x in cells[n]:
            i = C.identity(n, x)
            rep.checked += 1
            if C.src(n + 1, i) != x or C.tgt(n + 1, i) != x:
                rep.add("id-boundary", x, i, dim=n + 1)
    for n in range(1, C.max_dim + 1):
        for k in range(n):
            pairs = composable_pairs(C, k, n, cells[n])
            comp = {}
            for x, y in pairs:
                comp[(x, y)] = xy = C.comp(k, n, x, y)
                rep.checked += 1
                _check_comp_boundary(C, rep, k, n, x, y, xy)
            # units
            for x in cells[n]:
                left = id_up(C, k, n, src_k(C, k, n, x))
                right = id_up(C, k, n, tgt_k(C, k, n, x))
                rep.checked += 2
                if _comp(C, k, n, left, x) != x:
                    rep.add("unit-left", left, x, dim=n, detail=f"k={k}")
                if _comp(C, k, n, x, right) != x:
                    rep.add("unit-right", x, right, dim=n, detail=f"k={k}")
            # associativity
            after: dict[Cell, list[Cell]] = defaultdict(list)
            for x, y in pairs:
                after[x].append(y)
            for x, y in pairs:
                xy = comp[(x, y)]
                for z in after.get(y, ()):
                    yz = comp[(y, z)]
                    if not (within(n, xy) and within(n, yz)):
                        continue
                    rep.checked += 1
                    lhs, rhs = _comp(C, k, n, xy, z), _comp(C, k, n, x, yz)
                    if lhs is None or lhs != rhs:
                        rep.add("associativity", x, y, z, dim=n, detail=f"k={k}")
            # identity functoriality: id(x ∘k y) = id(x) ∘k id(y)
            if n < C.max_dim:
                for x, y in pairs:
                    rep.checked += 1
                    lhs = C.identity(n, comp[(x, y)])
                    rhs = _comp(C, k, n + 1, C.identity(n, x), C.identity(n, y))
                    if lhs != rhs:
                        rep.add("id-functoriality", x, y, dim=n, detail=f"k={k}")
        # interchange for k < j < n
        for j in range(1, n):
            jpairs = composable_pairs(C, j, n, cells[n])
            for k in range(j):
                _check_interchange(C, rep, k, j, n, jpairs, within)
    return rep


def _comp(C, k: int, n: int, x, y):
    """``comp`` returning None where an axiom instance is not even defined."""
    try:
        return C.comp(k, n, x, y)
    except CompositionError:
        return None


def _check_comp_boundary(C, rep: Report, k: int, n: int, x, y, xy) -> None:
    if k == n - 1:
        exp_s, exp_t = C.src(n, x), C.tgt(n, y)
    else:
        try:
            exp_s = C.comp(k, n - 1, C.src(n, x), C.src(n, y))
            exp_t = C.comp(k, n - 1, C.tgt(n, x), C.tgt(n, y))
        except CompositionError:
            rep.add("comp-boundary", x, y, dim=n, detail=f"k={k}: boundaries not composable")
            return
    if C.src(n, xy) != exp_s or C.tgt(n, xy) != exp_t:
        rep.add("comp-boundary", x, y, xy, dim=n, detail=f"k={k}")


def _check_interchange(C, rep: Report, k: int, j: int, n: int, jpairs, within) -> None:
    by_left: dict[Cell, list[tuple[Cell, Cell]]] = defaultdict(list)
    for z, w in jpairs:
        by_left[src_k(C, k, n, z)].append((z, w))
    for x, y in jpairs:
        for z, w in by_left.get(tgt_k(C, k, n, x), ()):
            if not composable(C, k, n, y, w):
                continue
            rep.checked += 1
            xy, zw = C.comp(j, n, x, y), C.comp(j, n, z, w)
            xz, yw = _comp(C, k, n, x, z), C.comp(k, n, y, w)
            if xz is None:
                rep.add("interchange", x, y, z, w, dim=n, detail=f"k={k} j={j}: x and z not composable")
                continue
            if not all(within(n, c) for c in (xy, zw, xz, yw)):
                continue
            lhs = _comp(C, k, n, xy, zw)
            if lhs is None or lhs != _comp(C, j, n, xz, yw):
                rep.add("interchange", x, y, z, w, dim=n, detail=f"k={k} j={j}")


def _check_tables(C: TableCategory, rep: Report) -> None:
    if len(C.cells) != C.max_dim + 1:
        rep.add("shape", detail="one cell list per dimension required", malformed=True)
        return
    for n, layer in enumerate(C.cells):
        if len(set(layer)) != len(layer):
            rep.add("distinct-ids", dim=n, malformed=True)
    for n in range(1, C.max_dim + 1):
        lower = set(C.cells[n - 1])
        for x in C.cells[n]:
            for name, tab in (("src", C.srcs[n]), ("tgt", C.tgts[n])):
                if tab.get(x) not in lower:
                    rep.add("undeclared", x, tab.get(x), dim=n, detail=f"{name} not a {n - 1}-cell",
                            malformed=True)
    for n in range(C.max_dim):
        upper = set(C.cells[n + 1])
        for x in C.cells[n]:
            if C.ids[n].get(x) not in upper:
                rep.add("undeclared", x, C.ids[n].get(x), dim=n, detail="identity missing or undeclared",
                        malformed=True)
    if rep.malformed:
        return
    for (k, n), table in C.comps.items():
        if not (0 <= k < n <= C.max_dim):
            rep.add("undeclared", k, n, detail="composition table for impossible (k, n)", malformed=True)
            continue
        layer = set(C.cells[n])
        for (x, y), z in table.items():
            if x not in layer or y not in layer or z not in layer:
                rep.add("undeclared", x, y, z, dim=n, detail=f"k={k}", malformed=True)
            elif not composable(C, k, n, x, y):
                rep.add("non-composable", x, y, dim=n, detail=f"k={k}: composite given for a pair "
                        "whose boundaries do not match", malformed=True)
    if rep.malformed:
        return
    for n in range(1, C.max_dim + 1):
        for k in range(n):
            table = C.comps.get((k, n), {})
            for x, y in composable_pairs(C, k, n, C.cells[n]):
                if (x, y) not in table:
                    rep.add("missing-composite", x, y, dim=n, detail=f"k={k}", malformed=True)


# Functors

@dataclass(frozen=True)
class OmegaFunctor:
    """A cellwise map between strict categories meant to preserve structure.

    ``fn(n, x)`` gives the image of an n-cell.  Finite functors are usually
    built with :meth:`from_tables`; functors out of free categories come from
    :func:`omegapol.freecat.extend_functor`.
    """

    dom: object
    cod: object
    fn: Callable[[int, Cell], Cell] = field(compare=False)
    name: str = field(default="", compare=False)
    tables: tuple[Mapping, ...] | None = field(default=None, compare=False)

    def __call__(self, n: int, x: Cell) -> Cell:
        return self.fn(n, x)

    @classmethod
    def from_tables(cls, dom: StrictCategory, cod: StrictCategory, maps: Sequence[Mapping],
                    name: str = "") -> OmegaFunctor:
        frozen = tuple(dict(m) for m in maps)
        return cls(dom, cod, lambda n, x: frozen[n][x], name, frozen)

    @classmethod
    def identity(cls, C: StrictCategory) -> OmegaFunctor:
        if is_finite(C):
            return cls.from_tables(C, C, [{x: x for x in C.enumerate_cells(n)}
                                          for n in range(C.max_dim + 1)], "id")
        return cls(C, C, lambda n, x: x, "id")

    def table(self, n: int) -> dict:
        if self.tables is not None:
            return dict(self.tables[n])
        return {x: self.fn(n, x) for x in self.dom.enumerate_cells(n)}


def compose_functors(F: OmegaFunctor, G: OmegaFunctor) -> OmegaFunctor:
    """Diagrammatic composite: first ``F`` then ``G``."""
    if F.cod is not G.dom and F.cod != G.dom:
        raise ValueError("functors do not compose: codomain/domain mismatch")
    name = f"{G.name}∘{F.name}" if F.name and G.name else ""
    if F.tables is not None and G.tables is not None:
        maps = [{x: G.tables[n][y] for x, y in F.tables[n].items()} for n in range(len(F.tables))]
        return OmegaFunctor.from_tables(F.dom, G.cod, maps, name)
    return OmegaFunctor(F.dom, G.cod, lambda n, x: G.fn(n, F.fn(n, x)), name)


def validate_functor(F: OmegaFunctor, budget: int | None = None) -> Report:
    """Preservation of src, tgt, identities and every composition.

    Checked on every cell of a finite domain, or on the cells a lazy domain
    enumerates within ``budget``.
    """
    rep = Report("functor")
    C, D = F.dom, F.cod
    if C.max_dim != D.max_dim:
        rep.add("dimension-mismatch", C.max_dim, D.max_dim, malformed=True)
        return rep
    cells = [list(C.enumerate_cells(n, budget)) for n in range(C.max_dim + 1)]
    image: list[dict] = []
    for n, layer in enumerate(cells):
        img = {}
        for x in layer:
            try:
                fx = F(n, x)
            except (KeyError, CompositionError) as exc:
                rep.add("undeclared", x, dim=n, detail=f"not mapped: {exc}", malformed=True)
                continue
            if not D.has_cell(n, fx):
                rep.add("undeclared", x, fx, dim=n, detail="image not a cell of the codomain",
                        malformed=True)
            img[x] = fx
        image.append(img)
    if rep.malformed:
        return rep
    for n in range(1, C.max_dim + 1):
        for x in cells[n]:
            rep.checked += 2
            if D.src(n, image[n][x]) != F(n - 1, C.src(n, x)):
                rep.add("preserve-src", x, dim=n)
            if D.tgt(n, image[n][x]) != F(n - 1, C.tgt(n, x)):
                rep.add("preserve-tgt", x, dim=n)
    for n in range(C.max_dim):
        for x in cells[n]:
            rep.checked += 1
            if F(n + 1, C.identity(n, x)) != D.identity(n, image[n][x]):
                rep.add("preserve-id", x, dim=n)
    for n in range(1, C.max_dim + 1):
        for k in range(n):
            # over a lazy domain the budget bounds the composite, not each factor
            for x, y in composable_pairs(C, k, n, cells[n], budget if not is_finite(C) else None):
                rep.checked += 1
                try:
                    rhs = D.comp(k, n, image[n][x], image[n][y])
                except CompositionError:
                    rep.add("preserve-comp", x, y, dim=n, detail=f"k={k}: images not composable")
                    continue
                if F(n, C.comp(k, n, x, y)) != rhs:
                    rep.add("preserve-comp", x, y, dim=n, detail=f"k={k}")
    return rep


@dataclass(frozen=True)
class IsoVerdict:
    verdict: str  # "iso", "not-iso", "iso-up-to-budget" or "not-surjective-up-to-budget"
    witness: tuple = ()
    detail: str = ""

    @property
    def iso(self) -> bool:
        return self.verdict in ("iso", "iso-up-to-budget")

    def __str__(self) -> str:
        w = f" {self.witness}" if self.witness else ""
        return f"{self.verdict}{w}"


def is_iso(F: OmegaFunctor, budget: int | None = None) -> IsoVerdict:
    """Dimensionwise bijectivity; exact for finite endpoints.

    A bijective functor between strict categories has a functorial inverse, so
    bijectivity on cells is the whole test.  With a lazy endpoint a collision
    is still a definite witness, but a codomain cell missed within the budget
    might be hit by a larger one, so that verdict is qualified.
    """
    C, D = F.dom, F.cod
    if C.max_dim != D.max_dim:
        return IsoVerdict("not-iso", ("max_dim", C.max_dim, D.max_dim))
    exact = is_finite(C) and is_finite(D)
    for n in range(C.max_dim + 1):
        seen: dict[Cell, Cell] = {}
        for x in C.enumerate_cells(n, budget):
            fx = F(n, x)
            if fx in seen:
                return IsoVerdict("not-iso", (n, seen[fx], x), "two cells share an image")
            seen[fx] = x
        for y in D.enumerate_cells(n, budget):
            if y not in seen:
                if exact:
                    return IsoVerdict("not-iso", (n, y), "cell outside the image")
                return IsoVerdict("not-surjective-up-to-budget", (n, y), "cell outside the budgeted image")
    return IsoVerdict("iso" if exact else "iso-up-to-budget")


def functor_tables_equal(F: OmegaFunctor, G: OmegaFunctor, budget: int | None = None) -> bool:
    return all(F(n, x) == G(n, x)
               for n in range(F.dom.max_dim + 1) for x in F.dom.enumerate_cells(n, budget))


def all_cell_maps(C: StrictCategory, D: StrictCategory) -> Iterable[list[dict]]:
    """Every dimensionwise map from a finite C to a finite D (exhaustive search space)."""
    layers = []
    for n in range(C.max_dim + 1):
        xs, ys = C.enumerate_cells(n), D.enumerate_cells(n)
        layers.append([dict(zip(xs, choice)) for choice in itertools.product(ys, repeat=len(xs))])
    for combo in itertools.product(*layers):
        yield list(combo)
