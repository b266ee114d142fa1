"""Executable form of the monadicity argument for W.

Two ingredients are checked.  First, W reflects isomorphisms.  Second, a
pair whose image under W has a split coequalizer in polygraphs also has a
coequalizer of categories.  The category E is transported onto the globular
core of the split quotient, and W of the quotient map splits again via
lifted sections.

Everything is budgeted.  A check on a structure that sits ``L`` resolution
layers above the finite input runs at budget ``max(1, budget - L + 1)``:
generators of W(C) and cells of ℱW(C) use the full budget, and each further
W costs one unit.  Nested resolutions grow too quickly to enumerate fully.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping

from . import freecat as fc
from .adjunction import (Resolution, chi, counit, lift, phi, resolve,
                         resolve_functor, unit)
from .freecat import FreeCategory, describe, free_cat
from .globset import LazyGlobularMap
from .polygraph import Core, PolyMorphism, core_generators, validate_polymorphism
from .report import Report
from .strictcat import (IsoVerdict, OmegaFunctor, TableCategory, composable_pairs, is_finite, is_iso,
                        validate_category, validate_functor)

__all__ = [
    "SplitFork", "degenerate_fork", "fork_of_functors", "canonical_split_pair", "validate_split_fork", "TransportResult",
    "transport_structure", "resplit_in_pol", "IsoReflection", "check_iso_reflection",
    "verify_coequalizer_universal", "layer_budget", "search_lifts", "run_pipeline", "default_cones",
]


def layer_budget(budget: int, layer: int) -> int:
    return max(1, budget - max(layer, 1) + 1)


@dataclass(frozen=True)
class SplitFork:
    """Polygraph morphisms ``f, g: source ⇉ target``, ``k: target -> quotient``
    with sections ``a: quotient -> target`` and ``b: target -> source``.

    ``f_cat`` and ``g_cat`` are the underlying functors when the polygraph
    morphisms are W-images; ``layers`` records how many resolutions each of
    the three polygraphs sits above the finite input category.
    """

    source: object
    target: object
    quotient: object
    f: PolyMorphism
    g: PolyMorphism
    k: PolyMorphism
    a: PolyMorphism
    b: PolyMorphism
    f_cat: OmegaFunctor | None = None
    g_cat: OmegaFunctor | None = None
    k_cat: OmegaFunctor | None = None
    layers: Mapping[str, int] = field(default_factory=lambda: {"source": 1, "target": 1, "quotient": 1})
    name: str = ""

    def budget_for(self, which: str, budget: int) -> int:
        return layer_budget(budget, self.layers[which])

    def replace(self, **changes) -> SplitFork:
        fields = {k: getattr(self, k) for k in self.__dataclass_fields__}
        fields.update(changes)
        return SplitFork(**fields)


def degenerate_fork(C) -> SplitFork:
    """f = g = id on W(C), with every other map an identity too."""
    W = resolve(C)
    ident = PolyMorphism.identity(W)
    idC = OmegaFunctor.identity(C)
    return SplitFork(W, W, W, ident, ident, ident, ident, ident, idC, idC, idC, name=f"degenerate({C.name})")


def fork_of_functors(f: OmegaFunctor, g: OmegaFunctor, k: OmegaFunctor, a: OmegaFunctor,
                     b: OmegaFunctor, name: str = "") -> SplitFork:
    """W applied to a split fork of finite categories.

    ``f, g: C ⇉ D``, ``k: D -> Q`` with sections ``a: Q -> D`` and
    ``b: D -> C``.  Since W is a functor the images split again, with
    quotient W(Q).
    """
    C, D, Q = f.dom, f.cod, k.cod
    return SplitFork(resolve(C), resolve(D), resolve(Q), resolve_functor(f), resolve_functor(g),
                     resolve_functor(k), resolve_functor(a), resolve_functor(b), f, g, k,
                     name=name or f"fork({C.name} ⇉ {D.name} -> {Q.name})")


def canonical_split_pair(C) -> SplitFork:
    """The standard presentation of C as a coequalizer, imaged under W.

    With P = W(C), D = ℱP and C' = ℱW(D): ``f = ε_D`` and ``g = ℱW(ε_C)``
    from C' to D; the quotient map is ``k = W(ε_C)``; the sections are the
    units ``a = η_P`` and ``b = η_{W(D)}``.
    """
    if not is_finite(C):
        raise ValueError("the canonical fork is built over a finite category")
    P = resolve(C)
    D = free_cat(P)
    WD = resolve(D)
    Cp = free_cat(WD)
    WCp = resolve(Cp)
    eps_C = counit(P)
    eps_D = counit(WD)
    k = resolve_functor(eps_C)
    g_cat = OmegaFunctor(Cp, D, lambda n, c: fc.apply_free_morphism(k, c), "ℱW(ε)")
    f = resolve_functor(eps_D)
    g = resolve_functor(g_cat)
    a, b = unit(P), unit(WD)
    assert a.cod is WD and b.cod is WCp
    return SplitFork(WCp, WD, P, f, g, k, a, b, eps_D, g_cat, eps_C,
                     {"source": 3, "target": 2, "quotient": 1}, f"canonical({C.name})")


def _compare(rep: Report, rule: str, gens, n: int, lhs: Callable, rhs: Callable) -> None:
    for x in gens:
        rep.checked += 1
        try:
            left, right = lhs(n, x), rhs(n, x)
        except (KeyError, fc.TypingError, ValueError) as exc:
            rep.add(rule, describe(x), dim=n, detail=f"undefined: {exc}")
            continue
        if left != right:
            rep.add(rule, describe(x), dim=n, detail=f"{describe(left)} != {describe(right)}")


def validate_split_fork(s: SplitFork, budget: int = 3, check_morphisms: bool = True) -> Report:
    """k∘a = 1, f∘b = 1, g∘b = a∘k and k∘f = k∘g on budgeted generators."""
    rep = Report("split-fork")
    qb, tb, sb = (s.budget_for(w, budget) for w in ("quotient", "target", "source"))
    if check_morphisms:
        for label, u, b in (("f", s.f, sb), ("g", s.g, sb), ("k", s.k, tb), ("a", s.a, qb), ("b", s.b, tb)):
            sub = validate_polymorphism(u, b)
            for v in sub.violations:
                rep.add(f"morphism-{label}", *v.witness, detail=f"{v.rule}: {v.detail}", dim=v.dim,
                        malformed=v.malformed)
            rep.checked += sub.checked
    for n in range(s.quotient.max_dim + 1):
        _compare(rep, "k∘a=1", s.quotient.generators(n, qb), n, lambda n, x: s.k(n, s.a(n, x)),
                 lambda n, x: x)
    for n in range(s.target.max_dim + 1):
        gens = s.target.generators(n, tb)
        _compare(rep, "f∘b=1", gens, n, lambda n, x: s.f(n, s.b(n, x)), lambda n, x: x)
        _compare(rep, "g∘b=a∘k", gens, n, lambda n, x: s.g(n, s.b(n, x)), lambda n, x: s.a(n, s.k(n, x)))
    for n in range(s.source.max_dim + 1):
        _compare(rep, "k∘f=k∘g", s.source.generators(n, sb), n, lambda n, x: s.k(n, s.f(n, x)),
                 lambda n, x: s.k(n, s.g(n, x)))
    # the polygraph maps must be the W-images of the functors they came from
    for label, u, F in (("f", s.f, s.f_cat), ("g", s.g, s.g_cat)):
        if F is None or not isinstance(s.source, Resolution):
            continue
        lifted = resolve_functor(F)
        for n in range(s.source.max_dim + 1):
            _compare(rep, f"{label}=W({label})", s.source.generators(n, sb), n, u, lifted)
    return rep


# Transport of structure

@dataclass
class TransportResult:
    fork: SplitFork
    E: TableCategory
    h: OmegaFunctor
    alpha: LazyGlobularMap
    beta: LazyGlobularMap
    core: Core
    comparison: OmegaFunctor | None
    budget: int
    report: Report
    alpha_lift: PolyMorphism | None = None
    beta_lift: PolyMorphism | None = None

    @property
    def D(self):
        return self.h.dom

    def gen(self, n: int, e: str):
        """The core generator behind the E-cell called ``e``."""
        return self._by_id[n][e]

    def __post_init__(self):
        self._by_id = [self.core.by_id(n) for n in range(len(self.core.gens))]


def _exact_core(P, budget: int) -> Core:
    # over a finite base every core generator has single-generator boundaries,
    # so budget 1 already finds all of them
    if isinstance(P, Resolution) and is_finite(P.base):
        return core_generators(P, 1)
    return core_generators(P, budget)


def _free_generators_check(rep: Report, rule: str, C, n_max: int, budget: int, lhs, rhs) -> None:
    """Compare two functors out of C: on generators if C is free, else on every cell.

    Two functors out of a free category agree as soon as they agree on
    generators, which keeps the check linear in the generator count.
    """
    if isinstance(C, FreeCategory):
        P = C.polygraph
        for n in range(n_max + 1):
            cells = [fc.iota(P, g) for g in P.generators(n, budget)]
            _compare(rep, rule, cells, n, lhs, rhs)
    else:
        for n in range(n_max + 1):
            _compare(rep, rule, C.enumerate_cells(n, budget), n, lhs, rhs)


def transport_structure(s: SplitFork, budget: int = 3) -> TransportResult:
    """Put a category structure E on the globular core G(P) of the quotient.

    With α = φ^D∘G(a), l = G(k)∘χ^D and β = φ^{C'}∘G(b)∘χ^D, E has
    identities ``l(id(α e))`` and composites ``l(α e ∘k α e')``; h = l.
    """
    fork_rep = validate_split_fork(s, budget)
    if not fork_rep.ok:
        raise ValueError(f"not a split fork: {fork_rep.summary()}")
    if s.f_cat is None or s.g_cat is None:
        raise ValueError("transport needs the underlying functors f and g")
    P = s.quotient
    WD = s.target
    D = WD.base
    Cp = s.f_cat.dom
    qb = s.budget_for("quotient", budget)
    core = _exact_core(P, qb)
    members = [core.members(n) for n in range(len(core.gens))]

    def alpha_gen(n, e):
        return phi(D, s.a(n, e))

    def l_gen(n, d):
        e = s.k(n, chi(D, d, n))
        if e not in members[n]:
            raise AssertionError(f"l({d}) = {describe(e)} is not a core generator")
        return e

    def beta_cell(n, d):
        return phi(Cp, s.b(n, chi(D, d, n)))

    by_id = [core.by_id(n) for n in range(len(core.gens))]
    top = P.max_dim
    cells = tuple(tuple(describe(g) for g in layer) for layer in core.gens)
    srcs = tuple({describe(g): describe(t) for g, t in m.items()} for m in core.src)
    tgts = tuple({describe(g): describe(t) for g, t in m.items()} for m in core.tgt)
    idt = tuple({e: describe(l_gen(n + 1, D.identity(n, alpha_gen(n, by_id[n][e])))) for e in cells[n]}
                for n in range(top))
    skeleton = TableCategory(top, cells, srcs, tgts, idt, {}, "E")
    comps = {}
    for n in range(1, top + 1):
        for k in range(n):
            comps[(k, n)] = {
                (x, y): describe(l_gen(n, D.comp(k, n, alpha_gen(n, by_id[n][x]), alpha_gen(n, by_id[n][y]))))
                for x, y in composable_pairs(skeleton, k, n, cells[n])}
    E = TableCategory(top, cells, srcs, tgts, idt, comps, "E")

    alpha = LazyGlobularMap(E, D, lambda n, e: alpha_gen(n, by_id[n][e]), "alpha")
    beta = LazyGlobularMap(D, Cp, beta_cell, "beta")
    h_memo: dict = {}

    def h_fn(n, d):
        key = (n, d)
        if key not in h_memo:
            h_memo[key] = describe(l_gen(n, d))
        return h_memo[key]

    h = OmegaFunctor(D, E, h_fn, "h")

    rep = Report("transport")
    rep.extend(_relabel(validate_category(E), "E-"))
    if isinstance(D, FreeCategory):
        rep.extend(_relabel(fc.validate_free_functor(h, qb), "h-"))
    else:
        rep.extend(_relabel(validate_functor(h, qb), "h-"))
    for n in range(top + 1):
        _compare(rep, "h∘α=1", cells[n], n, lambda n, e: h(n, alpha(n, e)), lambda n, e: e)
    _free_generators_check(rep, "h∘f=h∘g", Cp, Cp.max_dim, s.budget_for("target", budget),
                           lambda n, c: h(n, s.f_cat(n, c)), lambda n, c: h(n, s.g_cat(n, c)))
    comparison = _comparison(E, by_id, P)
    if comparison is not None:
        rep.extend(_relabel(validate_functor(comparison), "comparison-"))
        verdict = is_iso(comparison)
        rep.checked += 1
        if not verdict.iso:
            rep.add("comparison-iso", *verdict.witness, detail=verdict.detail)
        rep.notes.append(f"E ≅ {comparison.cod.name}" if verdict.iso else "E not iso to input")
    return TransportResult(s, E, h, alpha, beta, core, comparison, budget, rep)


def _relabel(rep: Report, prefix: str) -> Report:
    out = Report(rep.subject, checked=rep.checked)
    for v in rep.violations:
        out.add(prefix + v.rule, *v.witness, detail=v.detail, dim=v.dim, malformed=v.malformed)
    return out


def _comparison(E, by_id, P) -> OmegaFunctor | None:
    """E -> Q when the quotient is P = W(Q) over a finite Q: φ^Q on the core.

    For the canonical fork Q is the input category and this agrees with
    ε∘α; for a fork of functors it is the given quotient.
    """
    if not (isinstance(P, Resolution) and is_finite(P.base)):
        return None
    Q = P.base
    tables = [{e: phi(Q, by_id[n][e]) for e in E.cells[n]} for n in range(E.max_dim + 1)]
    return OmegaFunctor.from_tables(E, Q, tables, "comparison")


def resplit_in_pol(t: TransportResult, budget: int | None = None) -> Report:
    """Lift α and β and check W(h)∘ᾱ = 1, W(f)∘β̄ = 1, W(g)∘β̄ = ᾱ∘W(h).

    The lifted triples are first checked to be generators of the intended
    codomain (rules ``lift-alpha`` / ``lift-beta``).  The lifting recipe only
    produces generators when the globular map preserves identities and
    composites, so the report also records whether α and β do.  The three
    equations are then compared on the lifted triples.
    """
    s = t.fork
    budget = t.budget if budget is None else budget
    D, E = t.D, t.E
    Cp = s.f_cat.dom
    abar = lift(E, D, t.alpha, "lift(alpha)")
    bbar = lift(D, Cp, t.beta, "lift(beta)")
    Wh = resolve_functor(t.h)
    t.alpha_lift, t.beta_lift = abar, bbar
    WE, WD, WCp = resolve(E), s.target, resolve(Cp)
    eb, db = s.budget_for("quotient", budget), s.budget_for("target", budget)
    rep = Report("resplit")
    for rule, u, dom, cod, b in (("lift-alpha", abar, WE, WD, eb), ("lift-beta", bbar, WD, WCp, db)):
        for n in range(dom.max_dim + 1):
            for g in dom.generators(n, b):
                rep.checked += 1
                img = u(n, g)
                if not cod.contains(n, img):
                    rep.add(rule, describe(g), dim=n,
                            detail=f"lifted triple {describe(img)} is not a generator of {cod.name}")
    for n in range(WE.max_dim + 1):
        _compare(rep, "W(h)∘ᾱ=1", WE.generators(n, eb), n, lambda n, x: Wh(n, abar(n, x)), lambda n, x: x)
    for n in range(WD.max_dim + 1):
        gens = WD.generators(n, db)
        _compare(rep, "W(f)∘β̄=1", gens, n, lambda n, x: s.f(n, bbar(n, x)), lambda n, x: x)
        _compare(rep, "W(g)∘β̄=ᾱ∘W(h)", gens, n, lambda n, x: s.g(n, bbar(n, x)),
                 lambda n, x: abar(n, Wh(n, x)))
    for label, m, dom, cod, b in (("alpha", t.alpha, E, D, eb), ("beta", t.beta, D, Cp, db)):
        F = OmegaFunctor(dom, cod, m.fn, label)
        sub = validate_functor(F, b)
        rep.notes.append(f"{label} functorial: {sub.ok}"
                         + ("" if sub.ok else f" (fails {', '.join(sorted(sub.rules))})"))
    return rep


# W reflects isomorphisms

@dataclass(frozen=True)
class IsoReflection:
    verdict: str  # "certified-iso" or "not-certified"
    witness: tuple
    detail: str
    direct: IsoVerdict

    @property
    def certified(self) -> bool:
        return self.verdict == "certified-iso"

    @property
    def consistent(self) -> bool:
        return self.certified == self.direct.iso


def check_iso_reflection(F: OmegaFunctor, budget: int = 2) -> IsoReflection:
    """Decide whether W(F) is bijective on budgeted generators; if it is,
    carry the bijection through the core and φ to certify F itself.
    """
    C, D = F.dom, F.cod
    WF = resolve_functor(F)
    WC, WD = resolve(C), resolve(D)
    direct = is_iso(F)

    def fail(witness, detail):
        return IsoReflection("not-certified", witness, detail, direct)

    if C.max_dim != D.max_dim:
        return fail(("max_dim",), "dimensions differ")
    for n in range(C.max_dim + 1):
        seen = {}
        for g in WC.generators(n, budget):
            img = WF(n, g)
            if img in seen:
                return fail((n, describe(seen[img]), describe(g)), "W(F) is not injective")
            seen[img] = g
        for h in WD.generators(n, budget):
            if h not in seen:
                return fail((n, describe(h)), "W(F) misses a generator")
    # GW(F) restricted to cores, then φ turns it into U(F)
    core_c, core_d = _exact_core(WC, budget), _exact_core(WD, budget)
    for n in range(C.max_dim + 1):
        images = {}
        for g in core_c.gens[n]:
            img = WF(n, g)
            if img not in core_d.members(n):
                return fail((n, describe(g)), "core generator leaves the core")
            images[img] = g
            if phi(D, img) != F(n, phi(C, g)):
                return fail((n, describe(g)), "φ is not natural along F")
        if len(images) != len(core_d.gens[n]):
            return fail((n,), "G W(F) is not bijective")
        # via χ: U(F) = φ^D ∘ GW(F) ∘ χ^C hits every cell of D exactly once
        ufs = {phi(D, WF(n, chi(C, z, n))) for z in C.enumerate_cells(n)}
        if len(ufs) != len(C.enumerate_cells(n)) or ufs != set(D.enumerate_cells(n)):
            return fail((n,), "U(F) recovered through φ is not bijective")
    return IsoReflection("certified-iso", (), "W(F) bijective; U(F) iso via φ; U reflects isos", direct)


# Universal property of the transported coequalizer

def verify_coequalizer_universal(t: TransportResult, m: OmegaFunctor, budget: int | None = None,
                                 name: str = "") -> Report:
    """For a cone m: D -> F with m∘f = m∘g, check m̄ = m∘α is the unique
    functor E -> F with m̄∘h = m (exhaustive over cell maps E -> F).
    """
    s = t.fork
    budget = t.budget if budget is None else budget
    rep = Report(f"coequalizer{':' + name if name else ''}")
    D, E, F = t.D, t.E, m.cod
    Cp = s.f_cat.dom
    pre = Report("precondition")
    _free_generators_check(pre, "m∘f=m∘g", Cp, Cp.max_dim, s.budget_for("target", budget),
                           lambda n, c: m(n, s.f_cat(n, c)), lambda n, c: m(n, s.g_cat(n, c)))
    if not pre.ok:
        for v in pre.violations:
            rep.add("precondition", *v.witness, detail=v.detail, dim=v.dim, malformed=True)
        return rep
    if not is_finite(F):
        rep.add("precondition", detail="uniqueness search needs a finite codomain", malformed=True)
        return rep
    mbar_tables = [{e: m(n, t.alpha(n, e)) for e in E.cells[n]} for n in range(E.max_dim + 1)]
    mbar = OmegaFunctor.from_tables(E, F, mbar_tables, "m∘α")
    rep.extend(_relabel(validate_functor(mbar), "mbar-"))
    db = s.budget_for("quotient", budget)
    dcells = [list(D.enumerate_cells(n, db)) for n in range(D.max_dim + 1)]
    for n, layer in enumerate(dcells):
        _compare(rep, "mbar∘h=m", layer, n, lambda n, d: mbar(n, t.h(n, d)), m)
    # exhaustive search: per-cell candidates cut down by u(h(d)) = m(d)
    cands = [{e: set(F.enumerate_cells(n)) for e in E.cells[n]} for n in range(E.max_dim + 1)]
    for n, layer in enumerate(dcells):
        for d in layer:
            cands[n][t.h(n, d)] &= {m(n, d)}
    solutions = []
    order = [(n, e) for n in range(E.max_dim + 1) for e in E.cells[n]]
    for choice in itertools.product(*(sorted(cands[n][e], key=str) for n, e in order)):
        tables = [dict() for _ in range(E.max_dim + 1)]
        for (n, e), v in zip(order, choice):
            tables[n][e] = v
        u = OmegaFunctor.from_tables(E, F, tables)
        if validate_functor(u).ok:
            solutions.append(tables)
    rep.checked += 1
    if len(solutions) != 1:
        rep.add("uniqueness", len(solutions), detail="expected exactly one factorization")
    elif solutions[0] != [dict(x) for x in mbar_tables]:
        rep.add("uniqueness", detail="the unique factorization is not m∘α")
    rep.notes.append(f"factorizations found: {len(solutions)}")
    return rep


# Lift uniqueness by search

def search_lifts(C, D, alpha: Callable, budget: int = 2) -> list[dict]:
    """Every generator-to-generator map W(C) -> W(D) on budgeted generators
    that is attach-compatible and satisfies ε_D∘ℱu = α∘ε_C on generators.

    The candidates for each generator are drawn from the listed generators of
    W(D), not constructed, so a count of 1 is a genuine uniqueness check.
    """
    WC, WD = resolve(C), resolve(D)
    epsC, epsD = counit(WC), counit(WD)
    partial: list[dict] = [{}]
    for n in range(WC.max_dim + 1):
        targets = WD.generators(n, budget)
        grown = []
        for sol in partial:
            u = PolyMorphism(WC, WD, lambda m, g, sol=sol: sol[(m, g)])
            options = []
            for g in WC.generators(n, budget):
                want = alpha(n, epsC(n, fc.iota(WC, g)))
                if n:
                    bnd = (u.on_cell(g.x), u.on_cell(g.y))
                    opts = [t for t in targets if WD.attach(t) == bnd and epsD(n, fc.iota(WD, t)) == want]
                else:
                    opts = [t for t in targets if epsD(0, fc.iota(WD, t)) == want]
                options.append((g, opts))
            for choice in itertools.product(*(o for _, o in options)):
                new = dict(sol)
                new.update({(n, g): c for (g, _), c in zip(options, choice)})
                grown.append(new)
        partial = grown
    return partial


def run_pipeline(C, budget: int = 3, cones: Mapping[str, OmegaFunctor] | None = None) -> dict:
    """canonical fork -> validation -> transport -> resplit -> coequalizer cones."""
    fork = canonical_split_pair(C)
    out = {"fork": validate_split_fork(fork, budget)}
    if not out["fork"].ok:
        return out
    t = transport_structure(fork, budget)
    out["transport"] = t.report
    out["result"] = t
    out["resplit"] = resplit_in_pol(t, budget)
    for label, m in (cones or default_cones(t)).items():
        out[f"cone:{label}"] = verify_coequalizer_universal(t, m, budget, label)
    return out


def default_cones(t: TransportResult) -> dict[str, OmegaFunctor]:
    """h itself, the collapse to the terminal category, and the counit when D is free."""
    from .fixtures import fix1

    T = fix1()
    D = t.D
    cones = {"h": t.h,
             "collapse": OmegaFunctor(D, T, lambda n, d: T.cells[n][0], "collapse")}
    if t.fork.k_cat is not None and t.fork.k_cat.dom is D:
        cones["k"] = t.fork.k_cat
    return cones
