"""Command line entry point.

Every subcommand reads one document and writes line-delimited JSON records
to stdout, ending with a ``summary`` record.  Exit status is 0 when every
check passes, 1 on a failed check and 2 on malformed input.  Output depends
only on the input and the flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, TextIO

from . import freecat as fc
from .adjunction import counit, lift, phi, resolve, verify_phi
from .documents import (DocumentError, FunctorFork, TermDocument, dumps, load_path, polygraph_payload,
                        term_to_expr, to_document)
from .globset import GlobularMap, GlobularSet, LazyGlobularMap, validate_glob_map, validate_globular
from .monadicity import (default_cones, resplit_in_pol, run_pipeline, transport_structure,
                         validate_split_fork, verify_coequalizer_universal)
from .polygraph import core_generators, validate_polygraph, validate_polymorphism
from .report import Report
from .strictcat import OmegaFunctor, forget, validate_category, validate_functor

COMMANDS = ("validate", "free", "resolve", "core", "phi-check", "lift", "coeq", "beck-check")


class WrongKind(DocumentError):
    pass


class Session:
    """Collects records for one command and works out the exit status."""

    def __init__(self, out: TextIO, args: argparse.Namespace):
        self.out = out
        self.args = args
        self.stages: dict[str, dict] = {}
        self.failed = False
        self.malformed = False
        self.extra: dict = {}

    def emit(self, record: str, **fields) -> None:
        fields["record"] = record
        self.out.write(json.dumps(fields, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n")

    def stage(self, name: str, rep: Report) -> Report:
        for v in rep.violations[: self.args.max_witnesses]:
            self.emit("violation", stage=name, **v.as_record())
        for note in rep.notes:
            self.emit("note", stage=name, text=note)
        self.stages[name] = {"ok": rep.ok, "checked": rep.checked, "violations": len(rep.violations)}
        self.failed |= not rep.ok
        self.malformed |= rep.malformed
        return rep

    def exit_code(self) -> int:
        if self.malformed:
            return 2
        return 1 if self.failed else 0

    def finish(self, code: int | None = None) -> int:
        code = self.exit_code() if code is None else code
        self.emit("summary", command=self.args.command, input=self.args.document, budget=self.args.budget,
                  dim=self.args.dim, ok=code == 0, exit=code, stages=self.stages, **self.extra)
        return code


def _want(kind: str, value: object, *allowed: str) -> None:
    if kind not in allowed:
        raise WrongKind(f"expected a {' or '.join(allowed)} document, got {kind}")


def _dim(args, top: int) -> int:
    return top if args.dim is None else min(args.dim, top)


# Subcommands

def cmd_validate(s: Session, kind: str, v) -> None:
    b = s.args.budget
    if kind == "globset":
        s.stage("globset", validate_globular(v))
    elif kind == "category":
        s.stage("category", validate_category(v))
    elif kind == "functor":
        s.stage("source", validate_category(v.dom))
        s.stage("target", validate_category(v.cod))
        s.stage("functor", validate_functor(v))
    elif kind == "globmap":
        if isinstance(v, LazyGlobularMap):
            s.stage("source", validate_category(v.dom))
            s.stage("target", validate_category(v.cod))
            X, Y = forget(v.dom), forget(v.cod)
            v = GlobularMap(X, Y, tuple({c: v(n, c) for c in X.cells[n]} for n in range(X.max_dim + 1)))
        s.stage("globmap", validate_glob_map(v))
    elif kind == "polygraph":
        s.stage("polygraph", validate_polygraph(v))
    elif kind == "polymorphism":
        s.stage("source", validate_polygraph(v.dom))
        s.stage("target", validate_polygraph(v.cod))
        s.stage("polymorphism", validate_polymorphism(v))
    elif kind == "term":
        _type_terms(s, v)
    elif kind == "fork":
        if _fork_parts(s, v):
            s.stage("split-fork", validate_split_fork(v.split_fork(), b))


def _fork_parts(s: Session, v: FunctorFork) -> bool:
    for w in ("source", "target", "quotient"):
        s.stage(w, validate_category(getattr(v, w)))
    for w, F in v.functors().items():
        s.stage(f"functor-{w}", validate_functor(F))
    return not s.failed


def _type_terms(s: Session, v: TermDocument) -> list:
    P = v.polygraph
    rep = Report("term")
    s.stage("polygraph", validate_polygraph(P))
    cells = []
    for label, t in (("term", v.term), ("other", v.other)):
        if t is None:
            continue
        rep.checked += 1
        try:
            c = fc.normalize(P, t)
        except fc.TypingError as exc:
            rep.add("typing", label, detail=str(exc))
            continue
        n = fc.cell_dim(c)
        rec = {"which": label, "dim": n, "normal_form": term_to_expr(fc.to_term(c))}
        if n:
            rec["source"] = term_to_expr(fc.to_term(fc.source(P, c)))
            rec["target"] = term_to_expr(fc.to_term(fc.target(P, c)))
        s.emit("normal-form", **rec)
        cells.append(c)
    s.stage("term", rep)
    return cells


def cmd_free(s: Session, kind: str, v) -> None:
    _want(kind, v, "polygraph", "term")
    if kind == "term":
        cells = _type_terms(s, v)
        if v.other is not None and len(cells) == 2:
            try:
                equal = fc.eq_cells(v.polygraph, cells[0], cells[1])
            except fc.UndecidedDimension as exc:
                s.emit("word-problem", equal=None, detail=str(exc))
            else:
                s.emit("word-problem", equal=equal)
                s.extra["equal"] = equal
        return
    s.stage("polygraph", validate_polygraph(v))
    if s.failed:
        return
    counts = []
    for n in range(_dim(s.args, min(v.max_dim, 2)) + 1):
        cells = fc.enumerate_cells(v, n, s.args.budget)
        for c in cells:
            s.emit("cell", dim=n, size=fc.cell_size(c), cell=term_to_expr(fc.to_term(c)))
        counts.append(len(cells))
    s.extra["counts"] = counts


def cmd_resolve(s: Session, kind: str, v) -> None:
    _want(kind, v, "category")
    s.stage("category", validate_category(v))
    if s.failed:
        return
    W = resolve(v)
    top = _dim(s.args, W.max_dim)
    P = W.truncated(s.args.budget)
    doc = {"kind": "polygraph", "version": "1", "payload": polygraph_payload(P, top)}
    s.emit("document", document=doc)
    if s.args.output:
        with open(s.args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc, indent=1) + "\n")
    s.extra["counts"] = [len(layer) for layer in P.gens[: top + 1]]


def cmd_core(s: Session, kind: str, v) -> None:
    _want(kind, v, "polygraph", "category")
    if kind == "category":
        s.stage("category", validate_category(v))
        P = resolve(v)
        core = core_generators(P, 1)
    else:
        s.stage("polygraph", validate_polygraph(v))
        P = v
        core = core_generators(P, s.args.budget)
    if s.failed:
        return
    X = core.globset()
    top = _dim(s.args, X.max_dim)
    X = GlobularSet(top, X.cells[: top + 1], X.src[: top + 1], X.tgt[: top + 1])
    s.stage("core", validate_globular(X))
    s.emit("document", document=to_document(X))
    s.extra["counts"] = list(X.size())


def cmd_phi_check(s: Session, kind: str, v) -> None:
    _want(kind, v, "category")
    s.stage("category", validate_category(v))
    if s.failed:
        return
    core = core_generators(resolve(v), 1)
    for n in range(_dim(s.args, v.max_dim) + 1):
        for g in core.gens[n]:
            s.emit("phi", dim=n, generator=fc.gen_expr(g), cell=phi(v, g))
    rep = s.stage("phi", verify_phi(v))
    s.extra["bijective"] = rep.ok


def cmd_lift(s: Session, kind: str, v) -> None:
    _want(kind, v, "functor", "globmap")
    if kind == "globmap" and not isinstance(v, LazyGlobularMap):
        raise WrongKind("lift needs a globmap between categories, not between globular sets")
    C, D = v.dom, v.cod
    s.stage("source", validate_category(C))
    s.stage("target", validate_category(D))
    if s.failed:
        return
    alpha = v.fn if isinstance(v, OmegaFunctor) else v
    if isinstance(v, OmegaFunctor):
        s.stage("functor", validate_functor(v))
    else:
        X, Y = forget(C), forget(D)
        s.stage("globmap", validate_glob_map(
            GlobularMap(X, Y, tuple({c: v(n, c) for c in X.cells[n]} for n in range(X.max_dim + 1)))))
        F = OmegaFunctor(C, D, v.fn, "alpha")
        func = validate_functor(F)
        s.emit("note", stage="globmap", text=f"functorial: {func.ok}")
    if s.failed:
        return
    b = s.args.budget
    WC, WD = resolve(C), resolve(D)
    u = lift(C, D, alpha, "lift")
    epsC, epsD = counit(WC), counit(WD)
    rep = Report("lift")
    for n in range(_dim(s.args, WC.max_dim) + 1):
        for g in WC.generators(n, b):
            img = u(n, g)
            ok = WD.contains(n, img)
            s.emit("generator", dim=n, generator=fc.gen_expr(g), image=fc.gen_expr(img), is_generator=ok)
            rep.checked += 2
            if not ok:
                rep.add("lift-generator", fc.describe(g), dim=n,
                        detail=f"{fc.describe(img)} is not a generator of {WD.name}")
                continue
            if epsD(n, fc.iota(WD, img)) != alpha(n, epsC(n, fc.iota(WC, g))):
                rep.add("square", fc.describe(g), dim=n, detail="ε∘ℱᾱ differs from α∘ε")
    s.stage("lift", rep)


def cmd_coeq(s: Session, kind: str, v) -> None:
    _want(kind, v, "fork")
    if not _fork_parts(s, v):
        return
    b = s.args.budget
    fork = v.split_fork()
    s.stage("split-fork", validate_split_fork(fork, b))
    if s.failed:
        return
    t = transport_structure(fork, b)
    s.emit("document", document=to_document(t.E))
    for n in range(t.D.max_dim + 1):
        for d in t.D.enumerate_cells(n):
            s.emit("h", dim=n, cell=d, image=t.h(n, d))
    s.stage("transport", t.report)
    s.stage("resplit", resplit_in_pol(t, b))
    for label, m in default_cones(t).items():
        s.stage(f"cone:{label}", verify_coequalizer_universal(t, m, b, label))


def cmd_beck_check(s: Session, kind: str, v) -> None:
    _want(kind, v, "category")
    s.stage("category", validate_category(v))
    if s.failed:
        return
    out = run_pipeline(v, s.args.budget)
    for name, rep in out.items():
        if isinstance(rep, Report):
            s.stage(name, rep)
    t = out.get("result")
    if t is not None:
        iso = t.comparison is not None and t.comparison.cod is v and "comparison-iso" not in t.report.rules
        s.emit("check", name="E ≅ input", ok=iso, E=to_document(t.E)["payload"]["dims"])
        s.extra["E ≅ input"] = iso


HANDLERS: dict[str, Callable[[Session, str, object], None]] = {
    "validate": cmd_validate, "free": cmd_free, "resolve": cmd_resolve, "core": cmd_core,
    "phi-check": cmd_phi_check, "lift": cmd_lift, "coeq": cmd_coeq, "beck-check": cmd_beck_check,
}


HELP = {
    "validate": "check any document against the laws of its kind",
    "free": "enumerate free cells of a polygraph, or normalize a term",
    "resolve": "export the budgeted resolution of a category as a polygraph",
    "core": "globular core of a polygraph (or of the resolution of a category)",
    "phi-check": "bijection between the core of W(C) and the cells of C",
    "lift": "lift a functor or globular map to the resolutions",
    "coeq": "transport a split fork to its coequalizer category",
    "beck-check": "run the canonical split-fork pipeline on a category",
}


def parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("document", help="path to a JSON document")
    common.add_argument("--budget", type=int, default=3, help="enumeration budget (default 3)")
    common.add_argument("--dim", type=int, default=None, help="highest dimension (default: the input's)")
    common.add_argument("--max-witnesses", type=int, default=20,
                        help="violation records printed per stage (all are counted)")
    common.add_argument("--output", help="also write the produced document here")
    p = argparse.ArgumentParser(prog="omegapol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return p


def run(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = parser().parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    s = Session(out, args)
    if args.budget < 0 or (args.dim is not None and args.dim < 0):
        s.emit("error", message="budget and dim must be non-negative")
        return s.finish(2)
    try:
        kind, value = load_path(args.document)
        HANDLERS[args.command](s, kind, value)
    except DocumentError as exc:
        s.emit("error", message=str(exc))
        return s.finish(2)
    return s.finish()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
