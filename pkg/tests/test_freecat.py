import random

import pytest
from hypothesis import given, strategies as st

from oracles import Sig, all_terms, closure, generator_count, random_walk, to_term, typ

from omegapol.fixtures import bigon, fix2, fix3, fix_p1, fixture_polygraphs, interchange_terms, two_strand, z2_scalars
from omegapol.freecat import (NF0, NF1, NF2, NF3plus, Comp, CompositionError, GenAssignment, Gen, Id, TypingError,
                              UndecidedDimension, UndeclaredGenerator, apply_free_morphism, cell_dim, enumerate_cells,
                              eq_cells, evaluate, extend_functor, free_cat, infer_type, normalize, rename_term,
                              source, target, term_size, cell_size)
from omegapol.polygraph import Polygraph, PolyMorphism
from omegapol.strictcat import validate_category

POLYS = fixture_polygraphs()


def test_infer_type_of_generator():
    P = fix_p1()
    assert infer_type(P, Gen("m")) == (2, NF1("a", ("f", "f")), NF1("a", ("f",)))


def test_infer_type_of_identity():
    assert infer_type(fix_p1(), Id(Gen("a"))) == (1, NF0("a"), NF0("a"))


def test_unit_composite():
    P = fix_p1()
    t = Comp(0, Gen("f"), Id(Gen("a")))
    assert infer_type(P, t) == (1, NF0("a"), NF0("a"))
    assert normalize(P, t) == NF1("a", ("f",))
    assert normalize(P, Comp(0, Id(Gen("a")), Gen("f"))) == NF1("a", ("f",))


def test_typing_errors():
    P = fix_p1()
    with pytest.raises(UndeclaredGenerator):
        normalize(P, Gen("zz"))
    with pytest.raises(CompositionError):
        normalize(P, Comp(1, Gen("m"), Gen("m")))
    with pytest.raises(TypingError):
        normalize(P, Comp(2, Gen("m"), Gen("m")))
    with pytest.raises(TypingError):
        normalize(P, Comp(1, Gen("f"), Gen("f")))


def test_interchange_pair_normalizes_alpha_first():
    P = two_strand()
    lhs, rhs = interchange_terms()
    a, b = normalize(P, lhs), normalize(P, rhs)
    assert a == b
    assert [w.gen for w in a.whiskers] == ["alpha", "beta"]
    assert eq_cells(P, lhs, rhs)


def test_iterated_identity_is_empty_chain():
    c = normalize(fix_p1(), Id(Id(Gen("a"))))
    assert c == NF2(NF1("a", ()), ())


def test_different_path_lengths_differ():
    P = fix_p1()
    assert not eq_cells(P, Gen("f"), Comp(0, Gen("f"), Gen("f")))


def test_equality_refused_in_dimension_three():
    P = Polygraph.build(["a"], {}, {}, {"z": (NF2(NF1("a", ()), ()), NF2(NF1("a", ()), ()))}, name="p3")
    c = normalize(P, Gen("z"))
    assert isinstance(c, NF3plus)
    with pytest.raises(UndecidedDimension):
        eq_cells(P, Gen("z"), Gen("z"))
    with pytest.raises(UndecidedDimension):
        enumerate_cells(P, 3, 1)


def test_enumerate_paths_on_one_loop():
    assert enumerate_cells(fix_p1(), 1, 2) == [NF1("a", ()), NF1("a", ("f",)), NF1("a", ("f", "f"))]


def test_enumerate_two_cells_fix_p1():
    cells = [str(c) for c in enumerate_cells(fix_p1(), 2, 2)]
    assert cells == ["id(id(a))", "id(f)", "[|m|]", "id(f.f)", "[|m|f]", "[f|m|]"]


@pytest.mark.parametrize("name", sorted(POLYS))
def test_enumerate_objects_are_generators(name):
    P = POLYS[name]
    assert enumerate_cells(P, 0, 1) == [NF0(a) for a in P.generators(0)]


def _oracle_partition(P, budget):
    """Terms with at most ``budget`` generator occurrences, grouped by the move-closure oracle."""
    S = Sig(P)
    seen, classes = set(), []
    for t in all_terms(S, budget, path_len=budget):
        if t in seen:
            continue
        cl = closure(S, t, budget + 2)
        classes.append(t)
        seen |= cl
    return [to_term(t) for t in classes]


@pytest.mark.parametrize("name,budget", [("fix-p1", 2), ("fix-p1", 3), ("two-strand", 2), ("two-strand", 3),
                                         ("bigon", 2)])
def test_enumeration_against_brute_force(name, budget):
    P = POLYS[name]
    reps = _oracle_partition(P, budget)
    normal = [normalize(P, t) for t in reps]
    # the oracle and the normal form split the terms into the same classes
    assert len(set(normal)) == len(reps)
    # every normal form of size <= budget arises from a small term, and nothing else is listed
    assert set(enumerate_cells(P, 2, budget)) == {c for c in normal if cell_size(c) <= budget}


@pytest.mark.parametrize("name", sorted(POLYS))
def test_enumeration_dedup_and_closure(name):
    P = POLYS[name]
    for n in (1, 2):
        cells = enumerate_cells(P, n, 3)
        assert len(set(cells)) == len(cells)
        lower = set(enumerate_cells(P, n - 1, 3))
        for c in cells:
            for b in (source(P, c), target(P, c)):
                if cell_size(b) <= 3:
                    assert b in lower


@pytest.mark.parametrize("name", sorted(POLYS))
def test_enumeration_monotone(name):
    P = POLYS[name]
    for n in (1, 2):
        small, big = enumerate_cells(P, n, 2), enumerate_cells(P, n, 3)
        assert set(small) <= set(big)
        assert [c for c in big if c in set(small)] == small


def test_enumeration_sorted_by_size():
    sizes = [cell_size(c) for c in enumerate_cells(bigon(), 2, 3)]
    assert sizes == sorted(sizes)


# Evaluation

def _p1_into_fix3():
    return GenAssignment.from_tables(fix3(), [{"a": "*"}, {"f": "e"}, {"m": "id_e"}])


def test_evaluate_path():
    P = fix_p1()
    assert evaluate(P, _p1_into_fix3(), NF1("a", ("f", "f"))) == "e"


def test_evaluate_empty_path():
    assert evaluate(fix_p1(), _p1_into_fix3(), NF1("a", ())) == "1"


def test_incompatible_assignment_rejected():
    A = GenAssignment.from_tables(fix2(), [{"a": "x"}, {"f": "f"}, {"m": "id_f"}])
    with pytest.raises(CompositionError):
        extend_functor(fix_p1(), A)


def test_extension_is_a_functor_on_generators():
    F = extend_functor(fix_p1(), _p1_into_fix3())
    assert F(2, normalize(fix_p1(), Gen("m"))) == "id_e"


Z2 = z2_scalars()
ASSIGNMENTS = {
    "fix-p1": [{"a": "*"}, {"f": "1"}, {"m": "s"}],
    "two-strand": [{"a": "*", "b": "*", "c": "*"}, {"u": "1", "v": "1"}, {"alpha": "s", "beta": "s"}],
    "scalars": [{"a": "*"}, {"f": "1"}, {"s": "s", "t": "s", "cap": "s", "cup": "id_1"}],
    "bigon": [{"a": "*", "b": "*"}, {"u": "1", "w": "1", "r": "1"}, {"p": "s", "q": "id_1", "k": "s"}],
}


def _random_term(S, rng, max_gens):
    pool = all_terms(S, 1, path_len=2)
    t = rng.choice(pool)
    for _ in range(8):
        u = rng.choice(pool)
        k = rng.randrange(2)
        cand = ("c", k, t, u) if rng.random() < 0.5 else ("c", k, u, t)
        if typ(S, cand) is not None and generator_count(cand) <= max_gens:
            t = cand
    return t


@pytest.mark.parametrize("name", sorted(ASSIGNMENTS))
@given(seed=st.integers(0, 10**6))
def test_normalization_is_sound_for_evaluation(name, seed):
    P = POLYS[name]
    assert validate_category(Z2).ok
    A = GenAssignment.from_tables(Z2, ASSIGNMENTS[name])
    rng = random.Random(seed)
    S = Sig(P)
    t = _random_term(S, rng, 6)
    term = to_term(t)
    assert evaluate(P, A, term) == evaluate(P, A, normalize(P, term))


@pytest.mark.parametrize("name", ["fix-p1", "two-strand", "bigon", "scalars"])
@given(seed=st.integers(0, 10**6))
def test_moves_preserve_normal_form(name, seed):
    P = POLYS[name]
    S = Sig(P)
    rng = random.Random(seed)
    t = _random_term(S, rng, 4)
    u = random_walk(S, t, 6, rng, 6)
    assert eq_cells(P, to_term(t), to_term(u))


def test_term_size_counts_occurrences():
    assert term_size(Comp(0, Gen("f"), Id(Gen("a")))) == 2
    assert term_size(Id(Id(Gen("a")))) == 1


def test_free_cat_operations():
    C = free_cat(fix_p1())
    f = NF1("a", ("f",))
    assert C.comp(0, 1, f, f) == NF1("a", ("f", "f"))
    assert C.identity(1, NF1("a", ())) == NF2(NF1("a", ()), ())
    assert cell_dim(C.identity(1, f)) == 2


# Renaming along morphisms

def _loops():
    return Polygraph.build(["a"], {"u": ("a", "a"), "v": ("a", "a")}, name="loops")


def _one_loop():
    return Polygraph.build(["a"], {"w": ("a", "a")}, name="loop")


def test_identity_morphism_fixes_cells():
    P = bigon()
    u = PolyMorphism.identity(P)
    for c in enumerate_cells(P, 2, 3):
        assert apply_free_morphism(u, c) == c


def test_identity_renaming_on_fix_p1():
    P = fix_p1()
    u = PolyMorphism.from_tables(P, P, [{"a": "a"}, {"f": "f"}, {"m": "m"}])
    assert apply_free_morphism(u, NF1("a", ("f", "f"))) == NF1("a", ("f", "f"))


def test_collapsing_parallel_generators():
    u = PolyMorphism.from_tables(_loops(), _one_loop(), [{"a": "a"}, {"u": "w", "v": "w"}])
    assert apply_free_morphism(u, NF1("a", ("u", "v"))) == NF1("a", ("w", "w"))


def test_renaming_can_reorder_whiskers():
    # swapping p and q in the bigon keeps the chain valid; renaming then renormalizing commutes
    P = bigon()
    sw = {"p": "q", "q": "p"}
    u = PolyMorphism.from_tables(P, P, [{g: g for g in P.generators(0)}, {"u": "w", "w": "u", "r": "r"},
                                        {g: sw.get(g, g) for g in P.generators(2)}])
    S = Sig(P)
    for t in all_terms(S, 3, path_len=1):
        term = to_term(t)
        assert normalize(P, rename_term(u, term, P)) == apply_free_morphism(u, normalize(P, term))


@pytest.mark.parametrize("name", ["two-strand", "scalars"])
def test_renaming_commutes_with_normalize(name):
    P = POLYS[name]
    u = PolyMorphism.identity(P)
    S = Sig(P)
    for t in all_terms(S, 3, path_len=1):
        term = to_term(t)
        assert normalize(P, rename_term(u, term, P)) == apply_free_morphism(u, normalize(P, term))
