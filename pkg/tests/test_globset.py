import pytest
from hypothesis import given, strategies as st

from omegapol.fixtures import fixture_globsets, point_globset, sphere2_globset, walking_arrow_globset
from omegapol.globset import (GlobularError, GlobularMap, GlobularSet, compose_glob_maps,
                              validate_glob_map, validate_globular)


def test_walking_arrow_is_globular():
    assert validate_globular(walking_arrow_globset()).ok


def test_sphere2_is_globular():
    rep = validate_globular(sphere2_globset())
    assert rep.ok
    # two 2-cells, each checked against both identities
    assert rep.checked == 4


def test_sphere2_mutant_breaks_source_identity():
    X = sphere2_globset()
    # a third 1-cell y -> y; retarget A's source to it so src(src A) = y but src(tgt A) = x
    bad = GlobularSet.build(["x", "y"], {"u": ("x", "y"), "v": ("x", "y"), "w": ("y", "y")},
                            {"A": ("w", "v"), "B": ("u", "v")})
    assert validate_globular(X).ok
    rep = validate_globular(bad)
    assert not rep.ok and not rep.malformed
    assert {(v.rule, v.witness[0]) for v in rep.violations} == {("globular-ss", "A")}


def test_undeclared_boundary_is_malformed():
    X = walking_arrow_globset()
    bad = GlobularSet(X.max_dim, X.cells, ({}, {"f": "z"}), X.tgt)
    rep = validate_globular(bad)
    assert rep.malformed and rep.rules == {"undeclared"}


def test_duplicate_identifiers_are_malformed():
    bad = GlobularSet(0, (("x", "x"),), ({},), ({},))
    assert validate_globular(bad).rules == {"distinct-ids"}


def test_identity_map_validates():
    X = walking_arrow_globset()
    assert validate_glob_map(GlobularMap.identity(X)).ok


def test_constant_map_to_terminal_validates():
    assert validate_glob_map(GlobularMap.constant(walking_arrow_globset(), point_globset(1))).ok


def test_swapped_endpoints_violate_commutation():
    X = walking_arrow_globset()
    Y = GlobularSet.build(["x", "y"], {"f": ("x", "y"), "g": ("y", "x")})
    alpha = GlobularMap(X, Y, ({"x": "x", "y": "y"}, {"f": "g"}))
    rep = validate_glob_map(alpha)
    assert {v.rule for v in rep.violations} == {"commute-src", "commute-tgt"}
    assert all(v.witness[0] == "f" for v in rep.violations)


def test_dimension_mismatch_needs_flag():
    X, Y = walking_arrow_globset(), point_globset(2)
    alpha = GlobularMap(X, Y, ({"x": "c0", "y": "c0"}, {"f": "c1"}))
    assert validate_glob_map(alpha).rules == {"dimension-mismatch"}
    assert validate_glob_map(alpha, allow_higher_codomain=True).ok


def test_composition_units_and_constants():
    X = walking_arrow_globset()
    T = point_globset(1)
    alpha = GlobularMap.constant(X, T)
    assert compose_glob_maps(alpha, GlobularMap.identity(T)).same_as(alpha)
    assert compose_glob_maps(GlobularMap.identity(X), alpha).same_as(alpha)
    loop = GlobularSet.build(["x"], {"i": ("x", "x")})
    c = compose_glob_maps(GlobularMap.constant(X, loop), GlobularMap.constant(loop, T))
    assert c.same_as(alpha)


def test_composition_requires_matching_boundary():
    X = walking_arrow_globset()
    with pytest.raises(GlobularError):
        compose_glob_maps(GlobularMap.identity(X), GlobularMap.identity(point_globset(1)))


@pytest.mark.parametrize("name", sorted(fixture_globsets()))
def test_fixture_globsets_validate(name):
    assert validate_globular(fixture_globsets()[name]).ok


# Random globular sets: build each layer from parallel pairs of the layer below.

@st.composite
def globsets(draw, max_dim=3):
    objs = [f"o{i}" for i in range(draw(st.integers(1, 3)))]
    layers = []
    prev_cells, prev_bd = objs, None
    for n in range(1, draw(st.integers(1, max_dim)) + 1):
        if prev_bd is None:
            pairs = [(a, b) for a in prev_cells for b in prev_cells]
        else:
            pairs = [(a, b) for a in prev_cells for b in prev_cells if prev_bd[a] == prev_bd[b]]
        chosen = draw(st.lists(st.sampled_from(pairs), max_size=4)) if pairs else []
        layer = {f"c{n}_{i}": p for i, p in enumerate(chosen)}
        layers.append(layer)
        prev_bd = layer
        prev_cells = list(layer)
        if not prev_cells:
            break
    return GlobularSet.build(objs, *layers)


@given(globsets())
def test_parallel_construction_is_globular(X):
    rep = validate_globular(X)
    assert rep.ok
    for n in range(2, X.max_dim + 1):
        for c in X.cells[n]:
            s, t = X.source(n, c), X.target(n, c)
            assert X.source(n - 1, s) == X.source(n - 1, t)
            assert X.target(n - 1, s) == X.target(n - 1, t)


@given(globsets())
def test_composite_of_valid_maps_validates(X):
    T = point_globset(X.max_dim)
    alpha = GlobularMap.identity(X)
    beta = GlobularMap.constant(X, T)
    assert validate_glob_map(compose_glob_maps(alpha, beta)).ok
    assert compose_glob_maps(alpha, beta).same_as(beta)
