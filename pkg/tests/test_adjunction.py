import pytest

from omegapol.adjunction import (ResolutionGenerator, chi, counit, counit_eval, forget, free_on_globset, lift, phi,
                                 phi_map, resolve, resolve_functor, underlying_map, unit, unit_poly, verify_phi)
from omegapol.fixtures import (collapse, fix1, fix2, fix3, fix_p1, fixture_categories, fixture_polygraphs,
                               walking2_to_arrow, walking_arrow_globset, walking_2cell)
from omegapol.freecat import NF0, NF1, NF2, Gen, apply_free_morphism, enumerate_cells, free_cat, validate_free_functor
from omegapol.globset import validate_glob_map
from omegapol.monadicity import search_lifts
from omegapol.polygraph import (PolyMorphism, compose_polymorphisms, core_generators, morphisms_agree,
                                validate_polygraph, validate_polymorphism)
from omegapol.strictcat import compose_functors, validate_functor

CATEGORIES = fixture_categories()


def test_forget_walking_arrow():
    X = forget(fix2())
    assert set(X.cells[0]) == {"x", "y"}
    assert set(X.cells[1]) == {"id_x", "id_y", "f"}
    assert (X.source(1, "f"), X.target(1, "f")) == ("x", "y")


def test_forget_fix1_and_fix3():
    assert forget(fix1()).size() == (1, 1, 1)
    X = forget(fix3())
    assert X.cells[0] == ("*",) and set(X.cells[1]) == {"1", "e"}


def test_free_category_on_walking_arrow():
    F = free_on_globset(walking_arrow_globset())
    assert set(F.enumerate_cells(1, 2)) == {NF1("x", ()), NF1("y", ()), NF1("x", ("f",))}


def test_free_category_on_fix_p1():
    F = free_cat(fix_p1())
    f = NF1("a", ("f",))
    assert F.comp(0, 1, f, f) == NF1("a", ("f", "f"))
    assert F.identity(1, NF1("a", ())) == NF2(NF1("a", ()), ())


def test_resolution_of_terminal_category():
    W = resolve(fix1())
    assert W.generators(0, 2) == ["*"]
    assert W.generators(1, 2) == [ResolutionGenerator(1, "id_*", NF0("*"), NF0("*"))]


def test_resolution_of_terminal_category_dimension_two():
    W = resolve(fix1())
    gens = W.generators(2, 2)
    assert len(gens) == 9
    paths = {g.x for g in gens} | {g.y for g in gens}
    assert len(paths) == 3
    assert {g.z for g in gens} == {"id_id_*"}


def test_resolution_of_walking_arrow_dimension_one():
    W = resolve(fix2())
    triples = {(g.z, g.x, g.y) for g in W.generators(1, 3)}
    assert triples == {("id_x", NF0("x"), NF0("x")), ("id_y", NF0("y"), NF0("y")), ("f", NF0("x"), NF0("y"))}


@pytest.mark.parametrize("name", ["fix1", "fix2", "fix3"])
def test_resolution_counts_monotone(name):
    W = resolve(CATEGORIES[name])
    counts = [len(W.generators(2, b)) for b in (1, 2, 3)]
    assert counts == sorted(counts)


def test_contains_checks_invariants():
    W = resolve(fix2())
    assert W.contains(1, ResolutionGenerator(1, "f", NF0("x"), NF0("y")))
    assert not W.contains(1, ResolutionGenerator(1, "f", NF0("y"), NF0("x")))
    assert not W.contains(1, ResolutionGenerator(1, "f", NF0("x"), NF0("q")))


def test_resolution_validates_as_polygraph():
    for name in ("fix1", "fix2", "fix3", "walking2"):
        assert validate_polygraph(resolve(CATEGORIES[name]), budget=2).ok


def test_counit_on_generator():
    g = ResolutionGenerator(1, "f", NF0("x"), NF0("y"))
    assert counit_eval(fix2(), Gen(g)) == "f"


def test_counit_on_empty_path():
    assert counit_eval(fix1(), NF1("*", ())) == "id_*"


def test_counit_on_all_two_generators_of_fix1():
    C = fix1()
    W = resolve(C)
    assert {counit_eval(C, Gen(g)) for g in W.generators(2, 2)} == {"id_id_*"}


@pytest.mark.parametrize("name", ["fix1", "fix2", "fix3"])
def test_counit_is_a_functor(name):
    W = resolve(CATEGORIES[name])
    assert validate_functor(counit(W), budget=2).ok
    # linear-time check: agreement with the extension of the generator values
    assert validate_free_functor(counit(W), budget=3).ok


def test_unit_on_fix_p1():
    P = fix_p1()
    # objects of ℱP are normal 0-cells, so the free cells over them wrap twice
    a = NF0(NF0("a"))
    assert unit_poly(P, "f") == ResolutionGenerator(1, NF1("a", ("f",)), a, a)
    assert unit_poly(P, "a") == NF0("a")


def test_unit_is_a_morphism():
    for P in fixture_polygraphs().values():
        assert validate_polymorphism(unit(P)).ok


@pytest.mark.parametrize("name", ["fix1", "fix2", "fix3"])
def test_triangle_on_resolution(name):
    # W(ε_C) ∘ η_{W(C)} = 1 on generators of W(C)
    W = resolve(CATEGORIES[name])
    eta = unit(W)
    W_eps = resolve_functor(counit(W))
    both = compose_polymorphisms(eta, W_eps)
    assert morphisms_agree(both, PolyMorphism.identity(W), budget=2, dims=(0, 1)).ok
    assert morphisms_agree(both, PolyMorphism.identity(W), budget=1, dims=(2,)).ok


@pytest.mark.parametrize("name", sorted(fixture_polygraphs()))
def test_triangle_on_free_category(name):
    # ε_{ℱP} ∘ ℱ(η_P) = 1 on cells of ℱP
    P = fixture_polygraphs()[name]
    eta = unit(P)
    eps = counit(resolve(free_cat(P)))
    for n in range(3):
        for c in enumerate_cells(P, n, 3):
            assert eps(n, apply_free_morphism(eta, c)) == c


# phi and chi

def test_phi_on_walking_arrow():
    C = fix2()
    W = resolve(C)
    core = core_generators(W, 1)
    assert {phi(C, g) for g in core.gens[1]} == {"id_x", "id_y", "f"}
    assert len(core.gens[1]) == 3
    assert phi(C, ResolutionGenerator(1, "f", NF0("x"), NF0("y"))) == "f"


def test_phi_identity_in_dimension_zero():
    C = fix1()
    assert phi(C, "*") == "*"


def test_chi_examples():
    C = fix2()
    assert chi(C, "f", 1) == ResolutionGenerator(1, "f", NF0("x"), NF0("y"))
    assert chi(C, "id_x", 1) == ResolutionGenerator(1, "id_x", NF0("x"), NF0("x"))


@pytest.mark.parametrize("name", sorted(CATEGORIES))
def test_phi_is_a_bijection(name):
    rep = verify_phi(CATEGORIES[name])
    assert rep.ok, rep.summary()
    assert validate_glob_map(phi_map(CATEGORIES[name])).ok


def test_phi_naturality_for_collapse():
    C, D = fix2(), fix1()
    F = collapse(C, D)
    WF = resolve_functor(F)
    for n, layer in enumerate(core_generators(resolve(C), 1).gens):
        for g in layer:
            # φ^D ∘ GW(F) = U(F) ∘ φ^C
            assert phi(D, WF(n, g)) == F(n, phi(C, g))


def test_phi_refuses_non_core_generator():
    C = fix1()
    g = [g for g in resolve(C).generators(2, 2) if len(g.x.path) == 2][0]
    with pytest.raises(ValueError):
        phi(C, g)


# lifts

def test_lift_of_collapse():
    C, D = fix2(), fix1()
    u = lift(C, D, underlying_map(collapse(C, D)))
    assert u(1, ResolutionGenerator(1, "f", NF0("x"), NF0("y"))) == ResolutionGenerator(1, "id_*", NF0("*"), NF0("*"))


def _counit_square(C, D, alpha, budget):
    u = lift(C, D, alpha)
    epsC, epsD = counit(resolve(C)), counit(resolve(D))
    bad = []
    for n in range(C.max_dim + 1):
        for c in enumerate_cells(resolve(C), n, budget):
            if epsD(n, apply_free_morphism(u, c)) != alpha(n, epsC(n, c)):
                bad.append(c)
    return bad


@pytest.mark.parametrize("F", [collapse(fix2()), collapse(fix3()), walking2_to_arrow()], ids=["fix2", "fix3", "walking2"])
def test_lift_commutes_with_counits(F):
    assert _counit_square(F.dom, F.cod, underlying_map(F), 3) == []


def test_lift_of_identity_is_identity():
    C = fix2()
    u = lift(C, C, lambda n, x: x)
    assert morphisms_agree(u, PolyMorphism.identity(resolve(C)), budget=2).ok


def test_lift_of_composite():
    F = walking2_to_arrow()
    G = collapse(F.cod)
    both = lift(F.dom, G.cod, underlying_map(compose_functors(F, G)))
    stepwise = compose_polymorphisms(resolve_functor(F), resolve_functor(G))
    assert morphisms_agree(both, stepwise, budget=2).ok


@pytest.mark.parametrize("C,D", [(fix1(), fix1()), (fix2(), fix1()), (fix2(), fix2())], ids=["1-1", "2-1", "2-2"])
def test_lift_is_unique(C, D):
    F = collapse(C, D) if D.name == "fix1" else None
    alpha = underlying_map(F) if F else (lambda n, x: x)
    sols = search_lifts(C, D, alpha, budget=2)
    assert len(sols) == 1
    u = lift(C, D, alpha)
    assert all(u(n, g) == v for (n, g), v in sols[0].items())


def test_lift_of_non_functorial_map_breaks_counit_square():
    from omegapol.fixtures import fix3_swap_mutant
    F = fix3_swap_mutant()
    assert _counit_square(F.dom, F.cod, underlying_map(F), 2)


def test_lift_generators_are_generators():
    C, D = walking_2cell(), fix2()
    u = resolve_functor(walking2_to_arrow(C, D))
    WD = resolve(D)
    for n in range(3):
        for g in resolve(C).generators(n, 2):
            assert WD.contains(n, u(n, g))
