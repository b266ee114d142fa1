"""Cells of the free strict category generated by a polygraph.

Terms are the raw syntax; normal cells are canonical representatives in
dimensions 0-2:

* ``NF0(obj)``: an object generator;
* ``NF1(anchor, path)``: a composable path of 1-generators (empty path = identity);
* ``NF2(source, whiskers)``: a vertical chain of whiskered 2-generators,
  sorted into left-greedy interchange normal form.

Dimension 3 cells are kept as raw terms (``NF3plus``) and equality on them is
refused.  Every function here takes the polygraph as an argument and only
needs ``gen_dim``, ``attach`` and ``generators`` from it, so finite and lazy
polygraphs are handled alike.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Sequence, Union

from .strictcat import CompositionError, OmegaFunctor
from .report import Report

Generator = Hashable


class TypingError(ValueError):
    """A term is ill-formed (wrong dimensions, bad composition index)."""


class UndeclaredGenerator(TypingError, KeyError):
    pass


class UndecidedDimension(TypingError):
    """Cell equality was requested in dimension 3 or above."""


def _cached_hash(cls):
    generated = cls.__hash__

    def __hash__(self):
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = generated(self)
            object.__setattr__(self, "_h", h)
            return h

    cls.__hash__ = __hash__
    return cls


def okey(x) -> tuple:
    """Total order key across every kind of generator and cell."""
    if isinstance(x, str):
        return (0, x)
    if isinstance(x, int):
        return (1, x)
    return x.order_key()


def _memo_key(self, build):
    try:
        return self.__dict__["_k"]
    except KeyError:
        k = build()
        object.__setattr__(self, "_k", k)
        return k


# Terms

@_cached_hash
@dataclass(frozen=True)
class Gen:
    name: Generator

    def __str__(self) -> str:
        return describe(self.name)


@_cached_hash
@dataclass(frozen=True)
class Id:
    term: Term

    def __str__(self) -> str:
        return f"id({self.term})"


@_cached_hash
@dataclass(frozen=True)
class Comp:
    k: int
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"({self.lhs} *{self.k} {self.rhs})"


Term = Union[Gen, Id, Comp]


def term_size(t: Term) -> int:
    """Number of generator occurrences."""
    if isinstance(t, Gen):
        return 1
    if isinstance(t, Id):
        return term_size(t.term)
    return term_size(t.lhs) + term_size(t.rhs)


# Normal cells

@_cached_hash
@dataclass(frozen=True)
class NF0:
    obj: Generator

    def order_key(self) -> tuple:
        return _memo_key(self, lambda: (2, okey(self.obj)))

    def __str__(self) -> str:
        return describe(self.obj)


@_cached_hash
@dataclass(frozen=True)
class NF1:
    anchor: Generator
    path: tuple = ()

    def order_key(self) -> tuple:
        return _memo_key(self, lambda: (3, okey(self.anchor), tuple(okey(g) for g in self.path)))

    def __str__(self) -> str:
        if not self.path:
            return f"id({describe(self.anchor)})"
        return ".".join(describe(g) for g in self.path)


@_cached_hash
@dataclass(frozen=True)
class Whisker:
    left: tuple
    gen: Generator
    right: tuple

    def order_key(self) -> tuple:
        return (tuple(okey(g) for g in self.left), okey(self.gen), tuple(okey(g) for g in self.right))


@_cached_hash
@dataclass(frozen=True)
class NF2:
    source: NF1
    whiskers: tuple = ()

    def order_key(self) -> tuple:
        return _memo_key(self, lambda: (4, self.source.order_key(),
                                        tuple(w.order_key() for w in self.whiskers)))

    def __str__(self) -> str:
        if not self.whiskers:
            return f"id({self.source})"
        parts = []
        for w in self.whiskers:
            bits = [".".join(describe(g) for g in w.left), describe(w.gen),
                    ".".join(describe(g) for g in w.right)]
            parts.append("[" + "|".join(bits) + "]")
        return " ; ".join(parts)


@dataclass(frozen=True)
class NF3plus:
    """A cell of dimension >= 3 carried as a raw term (not canonical)."""

    term: Term
    dim: int
    src: object = field(compare=False)
    tgt: object = field(compare=False)

    def order_key(self) -> tuple:
        return (5, self.dim, str(self.term))

    def __str__(self) -> str:
        return str(self.term)


NormalCell = Union[NF0, NF1, NF2, NF3plus]


def cell_dim(c: NormalCell) -> int:
    if isinstance(c, NF0):
        return 0
    if isinstance(c, NF1):
        return 1
    if isinstance(c, NF2):
        return 2
    if isinstance(c, NF3plus):
        return c.dim
    raise TypeError(f"not a normal cell: {c!r}")


def describe(g) -> str:
    """Canonical printable description of a generator or cell."""
    if isinstance(g, str):
        return g
    d = getattr(g, "describe", None)
    if d is not None:
        return d()
    return str(g)


def cell_size(c: NormalCell) -> int:
    """Generator occurrences of the canonical term; identities count their base."""
    if isinstance(c, NF0):
        return 1
    if isinstance(c, NF1):
        return len(c.path) or 1
    if isinstance(c, NF2):
        if not c.whiskers:
            return cell_size(c.source)
        return sum(len(w.left) + 1 + len(w.right) for w in c.whiskers)
    return term_size(c.term)


# Boundaries

def obj_src(P, g) -> Generator:
    """Source object of a 1-generator."""
    return P.attach(g)[0].obj


def obj_tgt(P, g) -> Generator:
    return P.attach(g)[1].obj


def path_end(P, c: NF1) -> Generator:
    return obj_tgt(P, c.path[-1]) if c.path else c.anchor


def _path_anchor(P, path: tuple, default: Generator) -> Generator:
    return obj_src(P, path[0]) if path else default


def source(P, c: NormalCell) -> NormalCell:
    if isinstance(c, NF1):
        return NF0(c.anchor)
    if isinstance(c, NF2):
        return c.source
    if isinstance(c, NF3plus):
        return c.src
    raise TypingError("0-cells have no boundary")


def target(P, c: NormalCell) -> NormalCell:
    if isinstance(c, NF1):
        return NF0(path_end(P, c))
    if isinstance(c, NF2):
        return _nf2_target(P, c)
    if isinstance(c, NF3plus):
        return c.tgt
    raise TypingError("0-cells have no boundary")


def _nf2_target(P, c: NF2) -> NF1:
    if not c.whiskers:
        return c.source
    last = c.whiskers[-1]
    tgt = P.attach(last.gen)[1]
    return NF1(c.source.anchor, last.left + tgt.path + last.right)


def src_k(P, k: int, c: NormalCell) -> NormalCell:
    while cell_dim(c) > k:
        c = source(P, c)
    return c


def tgt_k(P, k: int, c: NormalCell) -> NormalCell:
    while cell_dim(c) > k:
        c = target(P, c)
    return c


def iota(P, g: Generator) -> NormalCell:
    """The cell consisting of the single generator ``g``."""
    n = P.gen_dim(g)
    if n == 0:
        return NF0(g)
    s, t = P.attach(g)
    if n == 1:
        return NF1(s.obj, (g,))
    if n == 2:
        return NF2(s, (Whisker((), g, ()),))
    return NF3plus(Gen(g), n, s, t)


def single_generator(c: NormalCell):
    """The generator ``g`` if ``c`` is ``iota(g)``, else ``None``."""
    if isinstance(c, NF0):
        return c.obj
    if isinstance(c, NF1):
        return c.path[0] if len(c.path) == 1 else None
    if isinstance(c, NF2):
        if len(c.whiskers) == 1 and not c.whiskers[0].left and not c.whiskers[0].right:
            return c.whiskers[0].gen
        return None
    if isinstance(c, NF3plus) and isinstance(c.term, Gen):
        return c.term.name
    return None


# Construction: identities and composition on normal cells

def identity(P, c: NormalCell) -> NormalCell:
    if isinstance(c, NF0):
        return NF1(c.obj, ())
    if isinstance(c, NF1):
        return NF2(c, ())
    return NF3plus(Id(to_term(c)), cell_dim(c) + 1, c, c)


def compose(P, k: int, a: NormalCell, b: NormalCell) -> NormalCell:
    """``a *k b`` in diagrammatic order; raises CompositionError if not composable."""
    n = cell_dim(a)
    if cell_dim(b) != n:
        raise TypingError(f"composing cells of dimensions {n} and {cell_dim(b)}")
    if not 0 <= k < n:
        raise TypingError(f"cannot compose {n}-cells along dimension {k}")
    if n <= 3 and k <= 2:
        if tgt_k(P, k, a) != src_k(P, k, b):
            raise CompositionError(f"{a} and {b} are not {k}-composable")
    if n == 1:
        return NF1(a.anchor, a.path + b.path)
    if n == 2:
        if k == 1:
            return _make_nf2(P, a.source, list(_offsets(a)) + list(_offsets(b)))
        tgt_a = _nf2_target(P, a)
        shift = len(tgt_a.path)
        entries = list(_offsets(a)) + [(o + shift, g) for o, g in _offsets(b)]
        return _make_nf2(P, NF1(a.source.anchor, a.source.path + b.source.path), entries)
    if k == n - 1:
        s, t = source(P, a), target(P, b)
    else:
        s, t = compose(P, k, source(P, a), source(P, b)), compose(P, k, target(P, a), target(P, b))
    return NF3plus(Comp(k, to_term(a), to_term(b)), n, s, t)


def _offsets(c: NF2) -> Iterator[tuple[int, Generator]]:
    for w in c.whiskers:
        yield len(w.left), w.gen


def _widths(P, g) -> tuple[int, int]:
    s, t = P.attach(g)
    return len(s.path), len(t.path)


def _object_at(P, anchor, path: tuple, i: int):
    return anchor if i == 0 else obj_tgt(P, path[i - 1])


def _make_nf2(P, src: NF1, entries: Sequence[tuple[int, Generator]]) -> NF2:
    """Type-check a chain of (offset, 2-generator) steps and sort it.

    Sorting swaps an adjacent pair whenever the later step acts strictly to
    the left of what the earlier step produced; the earlier step's offset
    then shifts by the width change of the later one.

    Steps with an empty source can float to either side of a neighbouring
    wire, so with such steps that orientation cycles.  Those chains are
    canonicalised instead as the least element of their full swap orbit.
    """
    path = src.path
    steps = []
    for o, g in entries:
        s_cell, t_cell = P.attach(g)
        s = len(s_cell.path)
        if path[o:o + s] != s_cell.path or o + s > len(path) or o < 0:
            raise CompositionError(f"2-generator {describe(g)} does not apply at offset {o}")
        if not s and _object_at(P, src.anchor, path, o) != s_cell.anchor:
            raise CompositionError(f"2-generator {describe(g)} anchored at the wrong object")
        t = len(t_cell.path)
        steps.append((o, g, s, t))
        path = path[:o] + t_cell.path + path[o + s:]
    if any(st[2] == 0 for st in steps):
        steps = _orbit_min(steps)
    else:
        steps = [list(st) for st in steps]
        _bubble(steps)
    return NF2(src, _rebuild(P, src, steps))


def swap_moves(steps: Sequence[tuple]) -> Iterator[tuple]:
    """Every chain one interchange move away from ``steps``.

    A move exchanges adjacent steps whose supports do not overlap: the later
    step either lies left of the earlier step's output or right of it (both,
    when the two touch with empty widths).
    """
    for i in range(len(steps) - 1):
        l1, g1, s1, t1 = steps[i]
        l2, g2, s2, t2 = steps[i + 1]
        if l2 + s2 <= l1:
            yield steps[:i] + ((l2, g2, s2, t2), (l1 + t2 - s2, g1, s1, t1)) + steps[i + 2:]
        if l2 >= l1 + t1:
            yield steps[:i] + ((l2 - t1 + s1, g2, s2, t2), (l1, g1, s1, t1)) + steps[i + 2:]


def _orbit_min(steps: Sequence[tuple]) -> tuple:
    start = tuple(steps)
    seen = {start}
    todo = [start]
    while todo:
        cur = todo.pop()
        for nxt in swap_moves(cur):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return min(seen, key=lambda st: tuple((o, okey(g)) for o, g, _s, _t in st))


def _bubble(steps: list) -> None:
    n = len(steps)
    limit = 4 * (n * n + 1) + 16
    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        if rounds > limit:
            raise RuntimeError("interchange sorting did not terminate")
        for i in range(n - 1):
            l1, g1, s1, t1 = steps[i]
            l2, g2, s2, t2 = steps[i + 1]
            if l2 + s2 > l1:
                continue
            steps[i] = [l2, g2, s2, t2]
            steps[i + 1] = [l1 + t2 - s2, g1, s1, t1]
            changed = True


def _rebuild(P, src: NF1, steps) -> tuple:
    path = src.path
    out = []
    for o, g, s, _t in steps:
        tgt = P.attach(g)[1]
        out.append(Whisker(path[:o], g, path[o + s:]))
        path = path[:o] + tgt.path + path[o + s:]
    return tuple(out)


# Terms <-> normal cells

def normalize(P, t: Term) -> NormalCell:
    """Evaluate a term in the free category, yielding its normal cell."""
    if isinstance(t, Gen):
        try:
            return iota(P, t.name)
        except KeyError:
            raise UndeclaredGenerator(f"undeclared generator {describe(t.name)}") from None
    if isinstance(t, Id):
        return identity(P, normalize(P, t.term))
    if isinstance(t, Comp):
        return compose(P, t.k, normalize(P, t.lhs), normalize(P, t.rhs))
    raise TypeError(f"not a term: {t!r}")


def infer_type(P, t: Term) -> tuple[int, NormalCell | None, NormalCell | None]:
    c = normalize(P, t)
    n = cell_dim(c)
    if n == 0:
        return 0, None, None
    return n, source(P, c), target(P, c)


def eq_cells(P, t1: Term | NormalCell, t2: Term | NormalCell) -> bool:
    c1 = t1 if _is_cell(t1) else normalize(P, t1)
    c2 = t2 if _is_cell(t2) else normalize(P, t2)
    if cell_dim(c1) >= 3 or cell_dim(c2) >= 3:
        raise UndecidedDimension("cell equality is undecided in dimension 3 and above")
    return c1 == c2


def _is_cell(x) -> bool:
    return isinstance(x, (NF0, NF1, NF2, NF3plus))


def path_term(anchor, path: tuple) -> Term:
    if not path:
        return Id(Gen(anchor))
    t: Term = Gen(path[0])
    for g in path[1:]:
        t = Comp(0, t, Gen(g))
    return t


def to_term(c: NormalCell) -> Term:
    """Canonical term of a normal cell (whiskers as horizontal composites with identities)."""
    if isinstance(c, NF0):
        return Gen(c.obj)
    if isinstance(c, NF1):
        return path_term(c.anchor, c.path)
    if isinstance(c, NF2):
        if not c.whiskers:
            return Id(to_term(c.source))
        out = None
        for w in c.whiskers:
            t: Term = Gen(w.gen)
            if w.left:
                t = Comp(0, Id(path_term(None, w.left)), t)
            if w.right:
                t = Comp(0, t, Id(path_term(None, w.right)))
            out = t if out is None else Comp(1, out, t)
        return out
    return c.term


def gen_expr(g):
    """JSON-ready name of a generator: the string itself, or a nested structure."""
    e = getattr(g, "expr", None)
    return e() if e is not None else describe(g)


def term_expr(t: Term) -> list:
    """Nested-list form of a term: ``["gen", name]``, ``["id", T]``, ``["comp", k, T1, T2]``."""
    if isinstance(t, Gen):
        return ["gen", gen_expr(t.name)]
    if isinstance(t, Id):
        return ["id", term_expr(t.term)]
    return ["comp", t.k, term_expr(t.lhs), term_expr(t.rhs)]


def cell_expr(c: NormalCell) -> list:
    return term_expr(to_term(c))


# Enumeration

def enumerate_cells(P, n: int, budget: int) -> list[NormalCell]:
    """Distinct normal n-cells with at most ``budget`` generator occurrences.

    Ordered by size, then by the canonical order key.
    """
    if n >= 3:
        raise UndecidedDimension("enumeration is only canonical up to dimension 2")
    return list(_enumerate_cached(P, n, budget))


def _enumerate_cached(P, n: int, budget: int) -> tuple:
    cache = _cache_for(P, "_enum_cache")
    key = (n, budget)
    if key not in cache:
        cache[key] = tuple(_enumerate(P, n, budget))
    return cache[key]


def _cache_for(P, name: str) -> dict:
    cache = P.__dict__.get(name)
    if cache is None:
        cache = {}
        object.__setattr__(P, name, cache)
    return cache


def _sorted(cells: Iterable[NormalCell]) -> list[NormalCell]:
    return sorted(set(cells), key=lambda c: (cell_size(c), c.order_key()))


def _enumerate(P, n: int, budget: int) -> list[NormalCell]:
    if budget < 1:
        return []
    objects = list(P.generators(0, budget))
    if n == 0:
        return _sorted(NF0(a) for a in objects)
    paths = _paths(P, objects, budget)
    if n == 1:
        return _sorted(paths)
    if P.max_dim < 2:
        return _sorted(NF2(p, ()) for p in paths)
    found: set[NF2] = {NF2(p, ()) for p in paths}
    gens2 = list(P.generators(2, budget))
    by_end: dict = {}
    by_start: dict = {}
    for p in paths:
        if p.path and len(p.path) < budget:
            by_end.setdefault(path_end(P, p), []).append(p.path)
            by_start.setdefault(p.anchor, []).append(p.path)
    for g in gens2:
        s_cell, t_cell = P.attach(g)
        a, b = s_cell.anchor, path_end(P, s_cell)
        lefts = [()] + by_end.get(a, [])
        rights = [()] + by_start.get(b, [])
        for left in lefts:
            for right in rights:
                cost = len(left) + 1 + len(right)
                if cost > budget:
                    continue
                anchor = _path_anchor(P, left, a)
                start = left + s_cell.path + right
                steps = [(len(left), g)]
                cur = left + t_cell.path + right
                _extend_chains(P, gens2, NF1(anchor, start), steps, cur, cost, budget, found)
    return [c for c in _sorted(found) if cell_size(c) <= budget]


def _extend_chains(P, gens2, src: NF1, steps, cur: tuple, cost: int, budget: int, found: set) -> None:
    found.add(_make_nf2(P, src, steps))
    for g in gens2:
        s_cell, t_cell = P.attach(g)
        s = len(s_cell.path)
        step_cost = len(cur) - s + 1
        if cost + step_cost > budget:
            continue
        for o in range(len(cur) - s + 1):
            if cur[o:o + s] != s_cell.path:
                continue
            if not s and _object_at(P, src.anchor, cur, o) != s_cell.anchor:
                continue
            nxt = cur[:o] + t_cell.path + cur[o + s:]
            _extend_chains(P, gens2, src, steps + [(o, g)], nxt, cost + step_cost, budget, found)


def _paths(P, objects, budget: int) -> list[NF1]:
    out = [NF1(a, ()) for a in objects]
    if P.max_dim < 1:
        return out
    gens1 = list(P.generators(1, budget))
    by_src: dict = {}
    for g in gens1:
        by_src.setdefault(obj_src(P, g), []).append(g)
    frontier = [NF1(obj_src(P, g), (g,)) for g in gens1]
    length = 1
    while frontier and length <= budget:
        out.extend(frontier)
        if length == budget:
            break
        frontier = [NF1(p.anchor, p.path + (g,)) for p in frontier for g in by_src.get(path_end(P, p), ())]
        length += 1
    return out


# Evaluation into a strict category (universal property)

@dataclass(frozen=True)
class GenAssignment:
    """Images of generators in a target category, boundary-compatible."""

    target: object
    fn: Callable[[int, Generator], Hashable] = field(compare=False)

    def __call__(self, n: int, g: Generator):
        return self.fn(n, g)

    @classmethod
    def from_tables(cls, target, maps: Sequence[dict]) -> GenAssignment:
        frozen = tuple(dict(m) for m in maps)
        return cls(target, lambda n, g: frozen[n][g])


def evaluate(P, A: GenAssignment, c: NormalCell | Term):
    """Image of a normal cell (or a raw term) under the extension of ``A``."""
    D = A.target
    if not _is_cell(c):
        return _eval_term(P, A, c)[1]
    if isinstance(c, NF0):
        return A(0, c.obj)
    if isinstance(c, NF1):
        if not c.path:
            return D.identity(0, A(0, c.anchor))
        out = A(1, c.path[0])
        for g in c.path[1:]:
            out = D.comp(0, 1, out, A(1, g))
        return out
    if isinstance(c, NF2):
        if not c.whiskers:
            return D.identity(1, evaluate(P, A, c.source))
        out = None
        for w in c.whiskers:
            x = A(2, w.gen)
            if w.left:
                x = D.comp(0, 2, D.identity(1, evaluate(P, A, NF1(obj_src(P, w.left[0]), w.left))), x)
            if w.right:
                x = D.comp(0, 2, x, D.identity(1, evaluate(P, A, NF1(obj_src(P, w.right[0]), w.right))))
            out = x if out is None else D.comp(1, 2, out, x)
        return out
    return _eval_term(P, A, c.term)[1]


def _eval_term(P, A: GenAssignment, t: Term) -> tuple[int, Hashable]:
    D = A.target
    if isinstance(t, Gen):
        n = P.gen_dim(t.name)
        return n, A(n, t.name)
    if isinstance(t, Id):
        n, x = _eval_term(P, A, t.term)
        return n + 1, D.identity(n, x)
    n, x = _eval_term(P, A, t.lhs)
    m, y = _eval_term(P, A, t.rhs)
    if n != m or not 0 <= t.k < n:
        raise TypingError(f"ill-typed composite {t}")
    return n, D.comp(t.k, n, x, y)


def validate_assignment(P, A: GenAssignment, budget: int | None = None) -> Report:
    rep = Report("assignment")
    D = A.target
    for n in range(P.max_dim + 1):
        if n > D.max_dim:
            break
        for g in P.generators(n, budget):
            try:
                x = A(n, g)
            except KeyError:
                rep.add("undeclared", describe(g), dim=n, detail="generator not assigned", malformed=True)
                continue
            if not D.has_cell(n, x):
                rep.add("undeclared", describe(g), x, dim=n, detail="image not a cell", malformed=True)
                continue
            if n == 0:
                continue
            s, t = P.attach(g)
            rep.checked += 2
            try:
                es, et = evaluate(P, A, s), evaluate(P, A, t)
            except (KeyError, CompositionError) as exc:
                rep.add("boundary", describe(g), dim=n, detail=f"boundary does not evaluate: {exc}")
                continue
            if D.src(n, x) != es:
                rep.add("boundary-src", describe(g), dim=n, detail=f"src of image {D.src(n, x)} != {es}")
            if D.tgt(n, x) != et:
                rep.add("boundary-tgt", describe(g), dim=n, detail=f"tgt of image {D.tgt(n, x)} != {et}")
    return rep


def extend_functor(P, A: GenAssignment, check: bool = True, budget: int | None = None) -> OmegaFunctor:
    """The unique structure-preserving extension of ``A`` to the free category."""
    if check:
        validate_assignment(P, A, budget).raise_if_failed(CompositionError)
    memo: dict = {}

    def fn(n: int, c):
        try:
            return memo[c]
        except KeyError:
            v = memo[c] = evaluate(P, A, c)
            return v
        except TypeError:
            return evaluate(P, A, c)

    return OmegaFunctor(free_cat(P), A.target, fn, "eval")


def validate_free_functor(F: OmegaFunctor, budget: int = 3) -> Report:
    """Functoriality of a cellwise map out of a free category, in linear time.

    F is an ω-functor exactly when its values on generators form a
    boundary-compatible assignment and F agrees with the extension of that
    assignment on every cell (within ``budget``).
    """
    P = F.dom.polygraph
    A = GenAssignment(F.cod, lambda n, g: F(n, iota(P, g)))
    rep = Report("free-functor")
    sub = validate_assignment(P, A, budget)
    rep.extend(sub)
    if not sub.ok:
        return rep
    for n in range(min(P.max_dim, 2) + 1):
        for c in enumerate_cells(P, n, budget):
            rep.checked += 1
            if F(n, c) != evaluate(P, A, c):
                rep.add("extension", str(c), dim=n, detail="differs from the extension of its generator values")
    return rep


# Renaming along generator-to-generator morphisms

def apply_free_morphism(u, c: NormalCell) -> NormalCell:
    """Rename the generators of ``c`` along ``u`` and renormalize in ``u.cod``."""
    Q = u.cod
    if isinstance(c, NF0):
        return NF0(u(0, c.obj))
    if isinstance(c, NF1):
        return NF1(u(0, c.anchor), tuple(u(1, g) for g in c.path))
    if isinstance(c, NF2):
        src = apply_free_morphism(u, c.source)
        return _make_nf2(Q, src, [(len(w.left), u(2, w.gen)) for w in c.whiskers])
    return normalize(Q, rename_term(u, c.term, u.dom))


def rename_term(u, t: Term, P) -> Term:
    if isinstance(t, Gen):
        return Gen(u(P.gen_dim(t.name), t.name))
    if isinstance(t, Id):
        return Id(rename_term(u, t.term, P))
    return Comp(t.k, rename_term(u, t.lhs, P), rename_term(u, t.rhs, P))


# The free category as a StrictCategory

class FreeCategory:
    """Strict category whose n-cells are the normal cells of a polygraph."""

    finite = False

    def __init__(self, P):
        self.polygraph = P
        self.max_dim = P.max_dim
        self.name = f"F({getattr(P, 'name', '') or P!r})"

    def __repr__(self) -> str:
        return self.name

    def enumerate_cells(self, n: int, budget: int | None = None) -> list[NormalCell]:
        return enumerate_cells(self.polygraph, n, 3 if budget is None else budget)

    def has_cell(self, n: int, x) -> bool:
        if not _is_cell(x) or cell_dim(x) != n:
            return False
        try:
            return check_cell(self.polygraph, x)
        except (TypingError, CompositionError, KeyError):
            return False

    def src(self, n: int, x):
        return source(self.polygraph, x)

    def tgt(self, n: int, x):
        return target(self.polygraph, x)

    def identity(self, n: int, x):
        return identity(self.polygraph, x)

    def comp(self, k: int, n: int, x, y):
        return compose(self.polygraph, k, x, y)

    def iota(self, g) -> NormalCell:
        return iota(self.polygraph, g)

    def cell_size(self, x) -> int:
        return cell_size(x)


def check_cell(P, c: NormalCell) -> bool:
    """True iff ``c`` is a well-typed cell of the free category in normal form."""
    if isinstance(c, NF0):
        return P.gen_dim(c.obj) == 0
    if isinstance(c, NF1):
        if P.gen_dim(c.anchor) != 0:
            return False
        at = c.anchor
        for g in c.path:
            if P.gen_dim(g) != 1 or obj_src(P, g) != at:
                return False
            at = obj_tgt(P, g)
        return True
    if isinstance(c, NF2):
        if not check_cell(P, c.source):
            return False
        if any(P.gen_dim(w.gen) != 2 for w in c.whiskers):
            return False
        rebuilt = _make_nf2(P, c.source, [(len(w.left), w.gen) for w in c.whiskers])
        return rebuilt == c
    return True


def free_cat(P) -> FreeCategory:
    """The free category on ``P`` (memoized per polygraph object)."""
    cached = P.__dict__.get("_free_category")
    if cached is None:
        cached = FreeCategory(P)
        object.__setattr__(P, "_free_category", cached)
    return cached
