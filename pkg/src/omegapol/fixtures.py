"""Fixture categories, polygraphs and globular sets used by tests, the CLI and docs."""

from __future__ import annotations

from typing import Mapping

from .freecat import NF1, Comp, Gen, Id
from .globset import GlobularSet
from .polygraph import Polygraph
from .strictcat import OmegaFunctor, TableCategory


def two_category(name: str, objects, arrows: Mapping[str, tuple[str, str]],
                 unit: Mapping[str, str], compose1: Mapping[tuple[str, str], str] | None = None,
                 cells2: Mapping[str, tuple[str, str]] | None = None,
                 vertical: Mapping[tuple[str, str], str] | None = None,
                 horizontal: Mapping[tuple[str, str], str] | None = None) -> TableCategory:
    """A 2-truncated category from its non-trivial data.

    ``unit[a]`` names the identity 1-cell of object ``a``; every 1-cell ``f``
    gets an identity 2-cell named ``id_f``.  Composites involving identities
    are filled in; everything else must appear in ``compose1``,
    ``vertical`` or ``horizontal``.
    """
    compose1 = dict(compose1 or {})
    vertical = dict(vertical or {})
    horizontal = dict(horizontal or {})
    arrows = dict(arrows)
    for a in objects:
        arrows.setdefault(unit[a], (a, a))
    ones = list(arrows)
    unit_cells = set(unit.values())
    two = {f"id_{f}": (f, f) for f in ones}
    two.update(cells2 or {})
    id2 = {f: f"id_{f}" for f in ones}
    unit2 = set(id2.values())
    rows = []
    for f in ones:
        for g in ones:
            if arrows[f][1] != arrows[g][0]:
                continue
            if f in unit_cells:
                h = g
            elif g in unit_cells:
                h = f
            else:
                h = compose1[(f, g)]
            rows.append((0, 1, f, g, h))
    comp1 = {(f, g): h for _, _, f, g, h in rows}
    obj_unit2 = {id2[unit[a]] for a in objects}

    def s0(x):
        return arrows[two[x][0]][0]

    def t0(x):
        return arrows[two[x][0]][1]

    for x in two:
        for y in two:
            if two[x][1] == two[y][0]:
                if x in unit2:
                    z = y
                elif y in unit2:
                    z = x
                else:
                    z = vertical[(x, y)]
                rows.append((1, 2, x, y, z))
            if t0(x) == s0(y):
                if x in obj_unit2:
                    z = y
                elif y in obj_unit2:
                    z = x
                elif x in unit2 and y in unit2:
                    z = id2[comp1[(two[x][0], two[y][0])]]
                else:
                    z = horizontal[(x, y)]
                rows.append((0, 2, x, y, z))
    return TableCategory.build(name, list(objects), [arrows, two], [dict(unit), id2], rows)


def fix1() -> TableCategory:
    """Terminal category, one cell per dimension up to 2."""
    return two_category("fix1", ["*"], {}, {"*": "id_*"})


def fix2() -> TableCategory:
    """Walking arrow x -> y."""
    return two_category("fix2", ["x", "y"], {"f": ("x", "y")}, {"x": "id_x", "y": "id_y"})


def fix3() -> TableCategory:
    """One object, 1-cells {1, e} with e.e = e."""
    return two_category("fix3", ["*"], {"e": ("*", "*")}, {"*": "1"}, {("e", "e"): "e"})


def walking_2cell() -> TableCategory:
    return two_category("walking2", ["x", "y"], {"f": ("x", "y"), "g": ("x", "y")},
                        {"x": "id_x", "y": "id_y"}, cells2={"a": ("f", "g")})


def discrete2() -> TableCategory:
    return two_category("discrete2", ["p", "q"], {}, {"p": "id_p", "q": "id_q"})


def z2_scalars() -> TableCategory:
    """One object, one 1-cell, 2-cells {id_1, s} with s.s = id_1 both ways (Eckmann-Hilton)."""
    return two_category("z2", ["*"], {}, {"*": "1"}, cells2={"s": ("1", "1")},
                        vertical={("s", "s"): "id_1"}, horizontal={("s", "s"): "id_1"})


def monoid_category(name: str, elements: list[str], table: Mapping[tuple[str, str], str]) -> TableCategory:
    """One-object category from a monoid whose unit is the element ``"1"``."""
    arrows = {m: ("*", "*") for m in elements if m != "1"}
    comp = {(a, b): table[(a, b)] for a in arrows for b in arrows}
    return two_category(name, ["*"], arrows, {"*": "1"}, comp)


def left_zero_monoid() -> TableCategory:
    """{1, a, b} with a.x = a and b.x = b for x != 1."""
    return monoid_category("leftzero", ["1", "a", "b"],
                           {(x, y): x for x in "ab" for y in "ab"})


def fixture_categories() -> dict[str, TableCategory]:
    return {c.name: c for c in (fix1(), fix2(), fix3(), walking_2cell(), discrete2(), z2_scalars(),
                                left_zero_monoid())}


# Functors between fixtures

def collapse(C: TableCategory, T: TableCategory | None = None) -> OmegaFunctor:
    """The unique functor into the terminal category."""
    T = T or fix1()
    return OmegaFunctor.from_tables(C, T, [{x: T.cells[n][0] for x in C.cells[n]}
                                           for n in range(C.max_dim + 1)], "collapse")


def swap_discrete2(C: TableCategory | None = None) -> OmegaFunctor:
    C = C or discrete2()
    sw = {"p": "q", "q": "p"}
    maps = [dict(sw), {f"id_{a}": f"id_{b}" for a, b in sw.items()},
            {f"id_id_{a}": f"id_id_{b}" for a, b in sw.items()}]
    return OmegaFunctor.from_tables(C, C, maps, "swap")


def fix3_swap_mutant(C: TableCategory | None = None) -> OmegaFunctor:
    """Sends e to 1 and 1 to e: breaks identity preservation."""
    C = C or fix3()
    maps = [{"*": "*"}, {"1": "e", "e": "1"}, {"id_1": "id_e", "id_e": "id_1"}]
    return OmegaFunctor.from_tables(C, C, maps, "swap-mutant")


def terminal_into_fix3(C: TableCategory | None = None) -> OmegaFunctor:
    C = C or fix3()
    T = fix1()
    return OmegaFunctor.from_tables(T, C, [{"*": "*"}, {"id_*": "1"}, {"id_id_*": "id_1"}], "unit")


def walking2_to_arrow(W: TableCategory | None = None, A: TableCategory | None = None) -> OmegaFunctor:
    W, A = W or walking_2cell(), A or fix2()
    maps = [{"x": "x", "y": "y"},
            {"id_x": "id_x", "id_y": "id_y", "f": "f", "g": "f"},
            {"id_id_x": "id_id_x", "id_id_y": "id_id_y", "id_f": "id_f", "id_g": "id_f", "a": "id_f"}]
    return OmegaFunctor.from_tables(W, A, maps, "identify")


def pick(C: TableCategory, obj: str) -> OmegaFunctor:
    """Fix-1 -> C choosing an object and its identities."""
    T = fix1()
    cells = [obj]
    for n in range(C.max_dim):
        cells.append(C.identity(n, cells[-1]))
    return OmegaFunctor.from_tables(T, C, [{T.cells[n][0]: cells[n]} for n in range(C.max_dim + 1)],
                                    f"pick-{obj}")


def retract_fork(C: TableCategory, obj: str) -> dict[str, OmegaFunctor]:
    """id and the constant functor at ``obj`` on C, split by the collapse to Fix-1.

    With k the collapse and a = pick(obj): k∘a = 1, id∘id = 1 and
    (a∘k)∘id = a∘k, so the pair has the split coequalizer C -> Fix-1.
    """
    k = collapse(C)
    a = pick(C, obj)
    const = OmegaFunctor.from_tables(C, C, [{x: a(n, k(n, x)) for x in C.cells[n]}
                                            for n in range(C.max_dim + 1)], f"const-{obj}")
    ident = OmegaFunctor.identity(C)
    return {"f": ident, "g": const, "k": k, "a": a, "b": ident}


# Globular sets

def walking_arrow_globset() -> GlobularSet:
    return GlobularSet.build(["x", "y"], {"f": ("x", "y")})


def sphere2_globset() -> GlobularSet:
    return GlobularSet.build(["x", "y"], {"u": ("x", "y"), "v": ("x", "y")},
                             {"A": ("u", "v"), "B": ("u", "v")})


def point_globset(max_dim: int = 1) -> GlobularSet:
    layers = [{f"c{n}": (f"c{n - 1}", f"c{n - 1}")} if n > 1 else {"c1": ("c0", "c0")}
              for n in range(1, max_dim + 1)]
    return GlobularSet.build(["c0"], *layers)


def fixture_globsets() -> dict[str, GlobularSet]:
    return {"walking-arrow": walking_arrow_globset(), "sphere2": sphere2_globset(),
            "point": point_globset(2), "empty": GlobularSet.empty(0)}


# Polygraphs

def fix_p1() -> Polygraph:
    """a; f: a -> a; m: f.f => f."""
    return Polygraph.build(["a"], {"f": ("a", "a")}, {"m": (["f", "f"], ["f"])}, name="fix-p1")


def two_strand() -> Polygraph:
    """u: a -> b, v: b -> c, alpha: u => u, beta: v => v."""
    return Polygraph.build(["a", "b", "c"], {"u": ("a", "b"), "v": ("b", "c")},
                           {"alpha": (["u"], ["u"]), "beta": (["v"], ["v"])}, name="two-strand")


def scalars() -> Polygraph:
    """Degenerate 2-generators: scalars, a cap and a cup on one loop."""
    return Polygraph.build(["a"], {"f": ("a", "a")},
                           {"s": (NF1("a"), NF1("a")), "t": (NF1("a"), NF1("a")),
                            "cap": (["f"], NF1("a")), "cup": (NF1("a"), ["f"])},
                           name="scalars")


def bigon() -> Polygraph:
    """Two parallel 1-generators with 2-generators both ways and a 2-loop."""
    return Polygraph.build(["a", "b"], {"u": ("a", "b"), "w": ("a", "b"), "r": ("b", "b")},
                           {"p": (["u"], ["w"]), "q": (["w"], ["u"]), "k": (["r"], ["r", "r"])},
                           name="bigon")


def fixture_polygraphs() -> dict[str, Polygraph]:
    return {P.name: P for P in (fix_p1(), two_strand(), scalars(), bigon())}


def interchange_terms():
    """The two vertical orders of alpha and beta over the two-strand polygraph."""
    lhs = Comp(1, Comp(0, Gen("alpha"), Id(Gen("v"))), Comp(0, Id(Gen("u")), Gen("beta")))
    rhs = Comp(1, Comp(0, Id(Gen("u")), Gen("beta")), Comp(0, Gen("alpha"), Id(Gen("v"))))
    return lhs, rhs
