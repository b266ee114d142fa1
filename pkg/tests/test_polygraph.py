import pytest
from hypothesis import given

from test_globset import globsets

from omegapol.adjunction import resolve
from omegapol.fixtures import bigon, fix1, fix2, fix_p1, fixture_globsets, fixture_polygraphs, two_strand
from omegapol.freecat import NF0, NF1, NF2, Whisker, single_generator
from omegapol.globset import GlobularMap, GlobularSet, compose_glob_maps, validate_glob_map, validate_globular
from omegapol.polygraph import (Polygraph, PolyMorphism, compose_polymorphisms, core_generators, core_inclusion,
                                core_of_morphism, glob_to_poly, morphisms_agree, poly_core, validate_polygraph,
                                validate_polymorphism)

GLOBSETS = fixture_globsets()


@pytest.mark.parametrize("name", sorted(fixture_polygraphs()))
def test_fixture_polygraphs_validate(name):
    assert validate_polygraph(fixture_polygraphs()[name]).ok


def test_fix_p1_with_unit_target_is_still_parallel():
    P = Polygraph.build(["a"], {"f": ("a", "a")}, {"m": (["f", "f"], NF1("a", ()))})
    assert validate_polygraph(P).ok


def test_target_ending_elsewhere_breaks_parallelism():
    P = Polygraph.build(["a", "b"], {"f": ("a", "a"), "g": ("a", "b")}, {"m": (["f", "f"], ["g"])})
    rep = validate_polygraph(P)
    assert rep.rules == {"parallelism"}
    assert rep.violations[0].witness == ("m",)


def test_attachment_over_unknown_generator_is_malformed():
    P = fix_p1()
    bad = Polygraph(P.max_dim, P.gens, {**P.attachments, "m": (NF1("a", ("zz",)), NF1("a", ("f",)))})
    rep = validate_polygraph(bad)
    assert rep.malformed


def test_walking_arrow_as_polygraph():
    P = glob_to_poly(GLOBSETS["walking-arrow"])
    assert P.count() == (2, 1)
    assert P.attach("f") == (NF0("x"), NF0("y"))


def test_sphere_as_polygraph():
    P = glob_to_poly(GLOBSETS["sphere2"])
    for g in ("A", "B"):
        s, t = P.attach(g)
        assert single_generator(s) == "u" and single_generator(t) == "v"


def test_empty_globset_gives_empty_polygraph():
    P = glob_to_poly(GlobularSet.empty(0))
    assert P.count() == (0,)
    assert validate_polygraph(P).ok


@given(globsets())
def test_inclusion_of_globsets_is_valid(X):
    P = glob_to_poly(X)
    assert validate_polygraph(P).ok
    assert poly_core(P).same_as(X)


def test_core_of_fix_p1_has_no_two_cells():
    X = poly_core(fix_p1())
    assert X.cells == (("a",), ("f",), ())


@pytest.mark.parametrize("name", sorted(GLOBSETS))
def test_core_of_inclusion_is_identity(name):
    X = GLOBSETS[name]
    assert poly_core(glob_to_poly(X)).same_as(X)


def test_generator_between_generators_survives():
    X = poly_core(bigon())
    assert set(X.cells[2]) == {"p", "q"}  # k attaches to the path r.r, which is not a generator


def test_core_is_hereditary():
    for P in list(fixture_polygraphs().values()) + [resolve(fix2()).truncated(2)]:
        core = core_generators(P)
        for n in range(1, len(core.gens)):
            for g in core.gens[n]:
                assert core.src[n][g] in core.members(n - 1)
                assert core.tgt[n][g] in core.members(n - 1)


def test_single_generator_recognizer():
    assert single_generator(NF0("a")) == "a"
    assert single_generator(NF1("a", ("f",))) == "f"
    assert single_generator(NF1("a", ())) is None
    assert single_generator(NF1("a", ("f", "f"))) is None
    assert single_generator(NF2(NF1("a", ("f", "f")), (Whisker((), "m", ()),))) == "m"
    assert single_generator(NF2(NF1("a", ("f", "f")), (Whisker(("f",), "m", ()),))) is None


def test_core_of_identity_is_identity():
    P = bigon()
    G = core_of_morphism(PolyMorphism.identity(P))
    assert G.same_as(GlobularMap.identity(poly_core(P)))


def test_core_of_collapse_keeps_loop():
    u = PolyMorphism.from_tables(fix_p1(), Polygraph.build(["o"], {"l": ("o", "o")}, {"c": (["l", "l"], ["l"])}),
                                 [{"a": "o"}, {"f": "l"}, {"m": "c"}])
    assert validate_polymorphism(u).ok
    G = core_of_morphism(u)
    assert G.maps == ({"a": "o"}, {"f": "l"}, {})
    assert validate_glob_map(G).ok


def test_core_is_functorial():
    P = bigon()
    sw = PolyMorphism.from_tables(P, P, [{"a": "a", "b": "b"}, {"u": "w", "w": "u", "r": "r"},
                                         {"p": "q", "q": "p", "k": "k"}])
    assert validate_polymorphism(sw).ok
    both = compose_polymorphisms(sw, sw)
    assert morphisms_agree(both, PolyMorphism.identity(P)).ok
    assert core_of_morphism(both).same_as(compose_glob_maps(core_of_morphism(sw), core_of_morphism(sw)))


def test_morphism_with_wrong_attachment_is_rejected():
    P = two_strand()
    bad = PolyMorphism.from_tables(P, P, [{"a": "a", "b": "b", "c": "c"}, {"u": "u", "v": "v"},
                                          {"alpha": "beta", "beta": "alpha"}])
    assert validate_polymorphism(bad).rules == {"attach"}


@pytest.mark.parametrize("name", sorted(GLOBSETS))
def test_triangle_identities(name):
    X = GLOBSETS[name]
    P = glob_to_poly(X)
    # X -> G Ǧ X is the identity
    assert poly_core(P).same_as(X)
    # G of the counit Ǧ G P -> P is the identity of G P
    for Q in (P, bigon(), fix_p1()):
        eps = core_inclusion(Q)
        assert validate_polymorphism(eps).ok
        assert core_of_morphism(eps).same_as(GlobularMap.identity(poly_core(Q)))


@pytest.mark.parametrize("C", [fix1(), fix2()], ids=["fix1", "fix2"])
def test_lazy_enumeration_is_prefix_compatible(C):
    W = resolve(C)
    for n in (1, 2):
        previous = []
        for b in (1, 2, 3):
            gens = W.generators(n, b)
            assert len(set(gens)) == len(gens)
            assert all(W.contains(n, g) for g in gens)
            assert [g for g in gens if g in set(previous)] == previous
            assert set(previous) <= set(gens)
            previous = gens


def test_validation_of_resolution_truncation():
    W = resolve(fix2())
    assert validate_polygraph(W, budget=2).ok
    assert validate_polygraph(W.truncated(2)).ok


def test_sphere_core_is_globular():
    assert validate_globular(poly_core(glob_to_poly(GLOBSETS["sphere2"]))).ok
