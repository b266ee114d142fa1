"""The fixture corpus as document files.

``python3 -m omegapol.corpus DIR`` writes one ``<name>.<kind>.json`` file per
fixture; the copies shipped in ``omegapol/data`` are produced this way.
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from . import fixtures as fx
from .documents import FunctorFork, TermDocument, dumps, to_document
from .globset import GlobularMap, LazyGlobularMap
from .polygraph import PolyMorphism
from .strictcat import OmegaFunctor


def _named(F: OmegaFunctor, name: str) -> OmegaFunctor:
    return OmegaFunctor(F.dom, F.cod, F.fn, name, F.tables)


def corpus() -> dict[str, dict]:
    """File name -> document, in a fixed order."""
    cats = fx.fixture_categories()
    f1, f2, f3, w2, d2 = (cats[k] for k in ("fix1", "fix2", "fix3", "walking2", "discrete2"))
    docs: dict[str, object] = {}
    for name, C in cats.items():
        docs[f"{name}.category"] = C
    functors = {
        "collapse-fix2": fx.collapse(f2, f1),
        "collapse-fix3": fx.collapse(f3, f1),
        "id-fix3": OmegaFunctor.identity(f3),
        "id-walking2": OmegaFunctor.identity(w2),
        "swap-discrete2": fx.swap_discrete2(d2),
        "unit-fix3": fx.terminal_into_fix3(f3),
        "identify-walking2": fx.walking2_to_arrow(w2, f2),
        "swap-mutant-fix3": fx.fix3_swap_mutant(f3),
    }
    for name, F in functors.items():
        docs[f"{name}.functor"] = _named(F, name)
    globsets = fx.fixture_globsets()
    for name, X in globsets.items():
        docs[f"{name}.globset"] = X
    docs["sphere2-to-point.globmap"] = GlobularMap.constant(globsets["sphere2"], globsets["point"])
    for name, F in (("collapse-fix2", functors["collapse-fix2"]), ("swap-mutant-fix3", functors["swap-mutant-fix3"])):
        docs[f"U-{name}.globmap"] = LazyGlobularMap(F.dom, F.cod, F.fn, f"U-{name}")
    polys = fx.fixture_polygraphs()
    for name, P in polys.items():
        docs[f"{name}.polygraph"] = P
    docs["id-two-strand.polymorphism"] = PolyMorphism.from_tables(
        polys["two-strand"], polys["two-strand"],
        [{g: g for g in polys["two-strand"].generators(n)} for n in range(3)], "id-two-strand")
    sw = {"a": "a", "b": "b", "u": "w", "w": "u", "r": "r", "p": "q", "q": "p", "k": "k"}
    bigon = polys["bigon"]
    docs["swap-bigon.polymorphism"] = PolyMorphism.from_tables(
        bigon, bigon, [{g: sw[g] for g in bigon.generators(n)} for n in range(3)], "swap-bigon")
    lhs, rhs = fx.interchange_terms()
    docs["interchange.term"] = TermDocument(polys["two-strand"], lhs, rhs)
    for name, C, obj in (("retract-fix2", f2, "x"), ("retract-discrete2", d2, "p")):
        docs[f"{name}.fork"] = FunctorFork(name=name, **fx.retract_fork(C, obj))
    return {f"{stem}.json": to_document(v) for stem, v in docs.items()}


def data_dir() -> Path:
    return Path(str(resources.files("omegapol").joinpath("data")))


def write(directory: str | Path) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, doc in corpus().items():
        path = out / fname
        path.write_text(dumps(doc, indent=1) + "\n", encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write(sys.argv[1] if len(sys.argv) > 1 else data_dir()):
        print(p)
