"""The resolution W(C), its counit and unit, the isomorphism GW(C) ~ U(C), and
lifting of globular maps to morphisms of resolutions.

W(C) has the 0-cells of C as 0-generators and, in dimension n, one generator
``(z, x, y)`` for every n-cell z of C and every pair of parallel free
(n-1)-cells x, y whose counit images are the source and target of z.  It is
infinite as soon as C has a 1-cell, so generators are only ever listed up to
a budget: a generator is within budget b when x and y each have at most b
generator occurrences (and, over a lazy C, so does z).
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Hashable

from . import freecat as fc
from .freecat import (NF0, NormalCell, GenAssignment, UndeclaredGenerator, cell_expr, cell_size,
                      describe, free_cat, okey)
from .globset import GlobularMap, GlobularSet, LazyGlobularMap
from .polygraph import Polygraph, PolyMorphism, core_generators, glob_to_poly
from .report import Report
from .strictcat import OmegaFunctor, StrictCategory, forget, is_finite

__all__ = [
    "ResolutionGenerator", "Resolution", "resolve", "forget", "free_cat", "free_on_globset",
    "counit", "counit_eval", "unit_poly", "unit", "phi", "chi", "verify_phi", "phi_map", "chi_map", "lift",
    "resolve_functor", "underlying_map",
]


@fc._cached_hash
@dataclass(frozen=True)
class ResolutionGenerator:
    """An n-generator ``(z, x, y)`` of W(C), n >= 1."""

    dim: int
    z: Hashable
    x: NormalCell
    y: NormalCell

    def expr(self) -> list:
        return ["W", _cell_or_name(self.z), cell_expr(self.x), cell_expr(self.y)]

    def describe(self) -> str:
        return fc._memo_key(self, lambda: json.dumps(self.expr(), separators=(",", ":"),
                                                     ensure_ascii=False))

    def order_key(self) -> tuple:
        return (6, self.dim, cell_size(self.x) + cell_size(self.y), okey(self.z),
                self.x.order_key(), self.y.order_key())

    def __str__(self) -> str:
        return f"({self.z}, {self.x}, {self.y})"


def _cell_or_name(z):
    return cell_expr(z) if fc._is_cell(z) else fc.gen_expr(z)


class Resolution:
    """The lazy polygraph W(C)."""

    finite = False

    def __init__(self, C: StrictCategory):
        self.base = C
        self.max_dim = C.max_dim
        self.name = f"W({getattr(C, 'name', '') or C!r})"
        self._gens: dict = {}
        self._chi: dict = {}
        self._counit: OmegaFunctor | None = None

    def __repr__(self) -> str:
        return self.name

    def gen_dim(self, g) -> int:
        if isinstance(g, ResolutionGenerator):
            return g.dim
        try:
            if self.base.has_cell(0, g):
                return 0
        except TypeError:
            pass
        raise UndeclaredGenerator(f"{describe(g)} is not a generator of {self.name}")

    def attach(self, g) -> tuple[NormalCell, NormalCell]:
        if not isinstance(g, ResolutionGenerator):
            raise fc.TypingError("0-generators have no attachment")
        return g.x, g.y

    def generators(self, n: int, budget: int | None = None) -> list:
        b = 3 if budget is None else budget
        key = (n, b)
        if key not in self._gens:
            self._gens[key] = tuple(self._enumerate(n, b))
        return list(self._gens[key])

    def _base_cells(self, n: int, budget: int) -> list:
        C = self.base
        if is_finite(C):
            return list(C.enumerate_cells(n))
        return [z for z in C.enumerate_cells(n, budget) if cell_size(z) <= budget]

    def _enumerate(self, n: int, budget: int) -> list:
        if n < 0 or n > self.max_dim:
            return []
        if n == 0:
            return self._base_cells(0, budget)
        eps = counit(self)
        lower = fc.enumerate_cells(self, n - 1, budget)
        # x and y must be parallel; group candidates by (counit image, boundary)
        index: dict = defaultdict(list)
        for c in lower:
            bnd = (fc.source(self, c), fc.target(self, c)) if n >= 2 else ()
            index[eps(n - 1, c)].append((bnd, c))
        out = []
        C = self.base
        for z in self._base_cells(n, budget):
            xs = index.get(C.src(n, z), ())
            ys = index.get(C.tgt(n, z), ())
            if not xs or not ys:
                continue
            by_bnd: dict = defaultdict(list)
            for bnd, y in ys:
                by_bnd[bnd].append(y)
            for bnd, x in xs:
                for y in by_bnd.get(bnd, ()):
                    out.append(ResolutionGenerator(n, z, x, y))
        out.sort(key=okey)
        return out

    def contains(self, n: int, g) -> bool:
        """Decide membership from the triple itself, without enumerating."""
        C = self.base
        if n == 0:
            return not isinstance(g, ResolutionGenerator) and _safe_has(C, 0, g)
        if not isinstance(g, ResolutionGenerator) or g.dim != n or n > self.max_dim:
            return False
        if not _safe_has(C, n, g.z):
            return False
        for c in (g.x, g.y):
            if not fc._is_cell(c) or fc.cell_dim(c) != n - 1 or not self._contains_cell(c):
                return False
        if n >= 2 and (fc.source(self, g.x) != fc.source(self, g.y)
                       or fc.target(self, g.x) != fc.target(self, g.y)):
            return False
        eps = counit(self)
        return eps(n - 1, g.x) == C.src(n, g.z) and eps(n - 1, g.y) == C.tgt(n, g.z)

    def _contains_cell(self, c: NormalCell) -> bool:
        gens = _generators_of(c)
        if not all(self.contains(d, g) for d, g in gens):
            return False
        try:
            return fc.check_cell(self, c)
        except (fc.TypingError, KeyError):
            return False

    def truncated(self, budget: int, name: str | None = None) -> Polygraph:
        """The finite sub-polygraph of generators within ``budget``."""
        gens = [tuple(self.generators(n, budget)) for n in range(self.max_dim + 1)]
        att = {g: self.attach(g) for layer in gens[1:] for g in layer}
        return Polygraph(self.max_dim, tuple(gens), att, name or self.name,
                         {"resolution-of": getattr(self.base, "name", ""), "budget": budget})


def _safe_has(C, n: int, x) -> bool:
    try:
        return bool(C.has_cell(n, x))
    except (TypeError, KeyError):
        return False


def _generators_of(c: NormalCell) -> list[tuple[int, Hashable]]:
    if isinstance(c, NF0):
        return [(0, c.obj)]
    if isinstance(c, fc.NF1):
        return [(0, c.anchor)] + [(1, g) for g in c.path]
    if isinstance(c, fc.NF2):
        return _generators_of(c.source) + [(2, w.gen) for w in c.whiskers]
    raise fc.UndecidedDimension("membership of cells above dimension 2 is not decided")


def resolve(C: StrictCategory) -> Resolution:
    """W(C), memoized per category object."""
    cached = C.__dict__.get("_resolution") if hasattr(C, "__dict__") else None
    if cached is None:
        cached = Resolution(C)
        try:
            object.__setattr__(C, "_resolution", cached)
        except AttributeError:
            pass
    return cached


def free_on_globset(X: GlobularSet):
    """The category freely generated by a globular set."""
    return free_cat(glob_to_poly(X))


# Counit and unit

def counit(W: Resolution) -> OmegaFunctor:
    """ε_C : ℱW(C) -> C, sending each generator triple to its first component."""
    if W._counit is None:
        A = GenAssignment(W.base, lambda n, g: g.z if n else g)
        W._counit = fc.extend_functor(W, A, check=False)
        object.__setattr__(W._counit, "name", "counit")
    return W._counit


def counit_eval(C: StrictCategory, t):
    """Image in C of a term or normal cell over W(C)."""
    W = resolve(C)
    c = t if fc._is_cell(t) else fc.normalize(W, t)
    return counit(W)(fc.cell_dim(c), c)


def unit_poly(P, g) -> Hashable:
    """η_P(g): the generator ``(ι g, η src g, η tgt g)`` of Wℱ(P)."""
    return unit(P)(P.gen_dim(g), g)


def unit(P) -> PolyMorphism:
    """η_P : P -> Wℱ(P)."""
    cached = P.__dict__.get("_unit")
    if cached is not None:
        return cached
    F = free_cat(P)
    W = resolve(F)
    memo: dict = {}

    def eta(n, g):
        key = (n, g)
        if key not in memo:
            if n == 0:
                memo[key] = NF0(g)
            else:
                s, t = P.attach(g)
                memo[key] = ResolutionGenerator(n, fc.iota(P, g), u.on_cell(s), u.on_cell(t))
        return memo[key]

    u = PolyMorphism(P, W, eta, "unit")
    object.__setattr__(P, "_unit", u)
    return u


# GW(C) is isomorphic to U(C)

def phi(C: StrictCategory, g):
    """φ(g) = ε(ι g) for a core generator g of W(C)."""
    W = resolve(C)
    n = W.gen_dim(g)
    if n and not _in_core(W, g):
        raise ValueError(f"{describe(g)} is not a core generator")
    return counit(W)(n, fc.iota(W, g))


def _in_core(W: Resolution, g) -> bool:
    if not isinstance(g, ResolutionGenerator):
        return W.contains(0, g)
    sx, sy = fc.single_generator(g.x), fc.single_generator(g.y)
    if sx is None or sy is None:
        return False
    return _in_core(W, sx) and _in_core(W, sy)


def chi(C: StrictCategory, z, n: int | None = None):
    """χ(z): dimension 0 is the identity, above that ``(z, ι χ(src z), ι χ(tgt z))``."""
    W = resolve(C)
    if n is None:
        n = _dim_of(C, z)
    if n == 0:
        return z
    key = (n, z)
    out = W._chi.get(key)
    if out is None:
        s, t = chi(C, C.src(n, z), n - 1), chi(C, C.tgt(n, z), n - 1)
        out = W._chi[key] = ResolutionGenerator(n, z, fc.iota(W, s), fc.iota(W, t))
    return out


def _dim_of(C, z) -> int:
    if fc._is_cell(z):
        return fc.cell_dim(z)
    dims = [n for n in range(C.max_dim + 1) if _safe_has(C, n, z)]
    if len(dims) != 1:
        raise ValueError(f"cannot infer the dimension of {z!r}; pass n")
    return dims[0]


def phi_map(C: StrictCategory, budget: int | None = None) -> GlobularMap | LazyGlobularMap:
    """φ^C as a globular map GW(C) -> U(C).

    For a finite C the core is exact at budget 1: core generators have
    single-generator boundaries, so nothing larger can qualify.
    """
    W = resolve(C)
    if is_finite(C):
        core = core_generators(W, 1)
        maps = tuple({describe(g): phi(C, g) for g in layer} for layer in core.gens)
        return GlobularMap(core.globset(), forget(C), maps)
    return LazyGlobularMap(W, C, lambda n, g: phi(C, g), "phi")


def chi_map(C: StrictCategory) -> GlobularMap | LazyGlobularMap:
    W = resolve(C)
    if is_finite(C):
        core = core_generators(W, 1)
        maps = tuple({z: describe(chi(C, z, n)) for z in C.enumerate_cells(n)}
                     for n in range(C.max_dim + 1))
        return GlobularMap(forget(C), core.globset(), maps)
    return LazyGlobularMap(C, W, lambda n, z: chi(C, z, n), "chi")


def verify_phi(C: StrictCategory) -> Report:
    """φ: GW(C) -> U(C) is a globular bijection with χ as two-sided inverse.

    Exhaustive over the core of W(C) and the cells of a finite C.
    """
    if not is_finite(C):
        raise ValueError("verify_phi enumerates a finite category")
    W = resolve(C)
    core = core_generators(W, 1)
    rep = Report(f"phi({C.name})")
    for n in range(C.max_dim + 1):
        cells = list(C.enumerate_cells(n))
        images = {}
        for g in core.gens[n]:
            rep.checked += 1
            z = phi(C, g)
            if z in images:
                rep.add("injective", describe(images[z]), describe(g), dim=n, detail=f"both map to {z}")
            images[z] = g
            if chi(C, z, n) != g:
                rep.add("chi∘phi=1", describe(g), dim=n, detail=f"χ(φ g) = {describe(chi(C, z, n))}")
            if n and (C.src(n, z) != phi(C, core.src[n][g]) or C.tgt(n, z) != phi(C, core.tgt[n][g])):
                rep.add("globular", describe(g), dim=n)
        for z in cells:
            rep.checked += 1
            if z not in images:
                rep.add("surjective", z, dim=n, detail="no core generator over this cell")
            c = chi(C, z, n)
            if c not in core.members(n):
                rep.add("chi-in-core", z, dim=n, detail=f"{describe(c)} is not a core generator")
            elif phi(C, c) != z:
                rep.add("phi∘chi=1", z, dim=n, detail=f"φ(χ z) = {phi(C, c)}")
        rep.notes.append(f"dim {n}: {len(core.gens[n])} core generators, {len(cells)} cells")
    return rep


# lifting globular maps

def underlying_map(F: OmegaFunctor) -> LazyGlobularMap:
    """U(F) as a cellwise map."""
    return LazyGlobularMap(F.dom, F.cod, F.fn, f"U({F.name})")


def lift(C: StrictCategory, D: StrictCategory, alpha: Callable, name: str = "") -> PolyMorphism:
    """The unique ᾱ : W(C) -> W(D) over a globular map α : U(C) -> U(D).

    Dimension 0 is α itself; a triple ``(z, x, y)`` goes to
    ``(α z, ℱᾱ x, ℱᾱ y)``; the target boundary is taken from ``y``, never
    from ``x``.  The map is lazy and memoized, so it is defined on every
    generator and evaluated per dimension on demand.
    """
    WC, WD = resolve(C), resolve(D)
    memo: dict = {}

    def fn(n, g):
        key = (n, g)
        if key not in memo:
            if n == 0:
                memo[key] = alpha(0, g)
            else:
                memo[key] = ResolutionGenerator(n, alpha(n, g.z), u.on_cell(g.x), u.on_cell(g.y))
        return memo[key]

    u = PolyMorphism(WC, WD, fn, name or f"lift({getattr(alpha, 'name', '')})")
    return u


def resolve_functor(F: OmegaFunctor) -> PolyMorphism:
    """W(F), which by uniqueness of lifts is the lift of U(F)."""
    return lift(F.dom, F.cod, F.fn, f"W({F.name})")

