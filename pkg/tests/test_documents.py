import copy
import json

import pytest
from hypothesis import given, strategies as st

from omegapol.adjunction import resolve
from omegapol.corpus import corpus, data_dir
from omegapol.documents import (DocumentError, check, dumps, from_document, load_path, loads, polygraph_payload,
                                roundtrip, schema, term_from_expr, term_to_expr, to_document)
from omegapol.fixtures import fix1, fix2, fixture_categories
from omegapol.freecat import Comp, Gen, Id
from omegapol.polygraph import Polygraph
from omegapol.strictcat import validate_category, validate_functor

CORPUS = corpus()


def test_schema_is_draft_2020_12():
    assert schema()["$schema"].endswith("2020-12/schema")


def test_corpus_covers_every_kind():
    kinds = {doc["kind"] for doc in CORPUS.values()}
    assert kinds == {"globset", "category", "functor", "globmap", "polygraph", "polymorphism", "term", "fork"}


@pytest.mark.parametrize("fname", sorted(CORPUS))
def test_corpus_documents_validate(fname):
    check(CORPUS[fname])


@pytest.mark.parametrize("fname", sorted(CORPUS))
def test_roundtrip_is_stable(fname):
    doc = CORPUS[fname]
    once = roundtrip(doc)
    assert once == doc
    assert roundtrip(loads(dumps(once))) == once


@pytest.mark.parametrize("fname", sorted(CORPUS))
def test_shipped_files_match_corpus(fname):
    path = data_dir() / fname
    assert json.loads(path.read_text(encoding="utf-8")) == CORPUS[fname]
    kind, _ = load_path(str(path))
    assert kind == CORPUS[fname]["kind"]


def test_no_stray_data_files():
    assert sorted(p.name for p in data_dir().glob("*.json")) == sorted(CORPUS)


def test_category_roundtrip_preserves_tables():
    for C in fixture_categories().values():
        D = from_document(to_document(C))
        assert D == C
        assert validate_category(D).ok


def _mutated(fname, fn):
    doc = copy.deepcopy(CORPUS[fname])
    fn(doc)
    return doc


@pytest.mark.parametrize("fname,edit", [
    ("fix2.category.json", lambda d: d.update(extra=1)),
    ("fix2.category.json", lambda d: d["payload"].update(colour="red")),
    ("fix2.category.json", lambda d: d.update(version="2")),
    ("fix2.category.json", lambda d: d.update(kind="monad")),
    ("fix2.category.json", lambda d: d["payload"]["dims"][1].append(["g", "x"])),
    ("sphere2.globset.json", lambda d: d["payload"].update(name="s")),
    ("interchange.term.json", lambda d: d["payload"].update(term=["gen"])),
    ("interchange.term.json", lambda d: d["payload"].update(term=["comp", -1, ["gen", "u"], ["gen", "u"]])),
    ("fix-p1.polygraph.json", lambda d: d["payload"].pop("generators")),
    ("retract-fix2.fork.json", lambda d: d["payload"].pop("b")),
])
def test_schema_rejects(fname, edit):
    with pytest.raises(DocumentError):
        check(_mutated(fname, edit))


def test_duplicate_cells_rejected():
    doc = _mutated("fix2.category.json", lambda d: d["payload"]["dims"][0].append("x"))
    check(doc)
    with pytest.raises(DocumentError):
        from_document(doc)


def test_dangling_map_rejected():
    def edit(d):
        d["payload"]["maps"][0] = [["x", "nowhere"]]
    doc = _mutated("collapse-fix2.functor.json", edit)
    check(doc)
    # loading is structural; the functor validator flags the gap as malformed
    rep = validate_functor(from_document(doc))
    assert rep.malformed and rep.rules == {"undeclared"}


def test_not_json():
    with pytest.raises(DocumentError):
        loads("{kind: category")


def test_missing_file(tmp_path):
    with pytest.raises(DocumentError):
        load_path(str(tmp_path / "absent.json"))


def test_resolution_exports_with_provenance():
    W = resolve(fix1())
    P = W.truncated(2)
    doc = {"kind": "polygraph", "version": "1", "payload": polygraph_payload(P)}
    check(doc)
    assert doc["payload"]["provenance"] == {"resolution-of": "fix1", "budget": 2}
    assert [len(layer) for layer in doc["payload"]["generators"]] == [1, 1, 9]
    back = from_document(doc)
    assert isinstance(back, Polygraph)
    assert back.count() == (1, 1, 9)
    assert roundtrip(doc) == doc


def test_compact_and_indented_dumps_parse_alike():
    doc = to_document(fix2())
    assert loads(dumps(doc)) == loads(dumps(doc, indent=1)) == doc
    assert " " not in dumps(to_document(fix1()))


names = st.sampled_from(["u", "v", "alpha", "a"])
terms = st.recursive(names.map(Gen), lambda sub: st.one_of(
    sub.map(Id), st.tuples(st.integers(0, 2), sub, sub).map(lambda x: Comp(*x))), max_leaves=6)


@given(terms)
def test_term_expressions_roundtrip(t):
    e = term_to_expr(t)
    check({"kind": "term", "version": "1", "payload": {"polygraph": {"name": "", "generators": [[]]}, "term": e}})
    assert term_from_expr(e) == t
