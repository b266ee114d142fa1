"""Finite truncated globular sets and globular maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .report import Report


class GlobularError(ValueError):
    pass


@dataclass(frozen=True)
class GlobularSet:
    """Cells per dimension ``0..max_dim`` with source/target maps.

    ``src[n]`` and ``tgt[n]`` are defined for ``1 <= n <= max_dim``; index 0
    holds empty mappings so that dimensions line up.
    """

    max_dim: int
    cells: tuple[tuple[str, ...], ...]
    src: tuple[Mapping[str, str], ...]
    tgt: tuple[Mapping[str, str], ...]

    @classmethod
    def build(cls, objects: Sequence[str], *higher: Mapping[str, tuple[str, str]],
              max_dim: int | None = None) -> GlobularSet:
        """``build(["x", "y"], {"f": ("x", "y")})`` builds the walking arrow."""
        top = len(higher) if max_dim is None else max_dim
        layers = list(higher) + [{}] * (top - len(higher))
        cells = [tuple(objects)] + [tuple(layer) for layer in layers]
        src = [{}] + [{c: b[0] for c, b in layer.items()} for layer in layers]
        tgt = [{}] + [{c: b[1] for c, b in layer.items()} for layer in layers]
        return cls(top, tuple(cells), tuple(src), tuple(tgt))

    @classmethod
    def empty(cls, max_dim: int = 0) -> GlobularSet:
        return cls.build([], max_dim=max_dim)

    def source(self, n: int, c: str) -> str:
        return self.src[n][c]

    def target(self, n: int, c: str) -> str:
        return self.tgt[n][c]

    def has(self, n: int, c: str) -> bool:
        return 0 <= n <= self.max_dim and c in self._index[n]

    def size(self) -> tuple[int, ...]:
        return tuple(len(cs) for cs in self.cells)

    @property
    def _index(self) -> tuple[frozenset, ...]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = tuple(frozenset(cs) for cs in self.cells)
            object.__setattr__(self, "_idx", idx)
        return idx

    def same_as(self, other: GlobularSet) -> bool:
        """Equality up to the order in which cells are listed."""
        if self.max_dim != other.max_dim:
            return False
        for n in range(self.max_dim + 1):
            if set(self.cells[n]) != set(other.cells[n]):
                return False
            if n and (dict(self.src[n]) != dict(other.src[n]) or dict(self.tgt[n]) != dict(other.tgt[n])):
                return False
        return True


@dataclass(frozen=True)
class GlobularMap:
    dom: GlobularSet
    cod: GlobularSet
    maps: tuple[Mapping[str, str], ...]

    def __call__(self, n: int, c: str) -> str:
        return self.maps[n][c]

    @classmethod
    def identity(cls, X: GlobularSet) -> GlobularMap:
        return cls(X, X, tuple({c: c for c in cells} for cells in X.cells))

    @classmethod
    def constant(cls, X: GlobularSet, Y: GlobularSet) -> GlobularMap:
        """The unique map into a globular set with one cell per dimension."""
        if any(len(cs) != 1 for cs in Y.cells):
            raise GlobularError("constant map needs a codomain with exactly one cell per dimension")
        return cls(X, Y, tuple({c: Y.cells[n][0] for c in X.cells[n]} for n in range(X.max_dim + 1)))

    def same_as(self, other: GlobularMap) -> bool:
        return (self.dom.same_as(other.dom) and self.cod.same_as(other.cod)
                and all(dict(a) == dict(b) for a, b in zip(self.maps, other.maps)))


@dataclass(frozen=True)
class LazyGlobularMap:
    """A cellwise map between possibly infinite globular structures.

    Used where the domain or codomain is the underlying globular set of a
    free category; ``dom`` and ``cod`` are the categories themselves.
    """

    dom: object
    cod: object
    fn: Callable[[int, Hashable], Hashable] = field(compare=False)
    name: str = ""

    def __call__(self, n: int, c: Hashable) -> Hashable:
        return self.fn(n, c)


def validate_globular(X: GlobularSet) -> Report:
    rep = Report("globset")
    if len(X.cells) != X.max_dim + 1:
        rep.add("shape", X.max_dim, len(X.cells), detail="one cell list per dimension required",
                malformed=True)
        return rep
    for n, cells in enumerate(X.cells):
        if len(set(cells)) != len(cells):
            dupes = sorted({c for c in cells if cells.count(c) > 1})
            rep.add("distinct-ids", *dupes, dim=n, malformed=True)
    for n in range(1, X.max_dim + 1):
        lower = set(X.cells[n - 1])
        for c in X.cells[n]:
            for name, table in (("src", X.src[n]), ("tgt", X.tgt[n])):
                if c not in table:
                    rep.add("undeclared", c, detail=f"{name} missing", dim=n, malformed=True)
                elif table[c] not in lower:
                    rep.add("undeclared", c, table[c], detail=f"{name} not a {n - 1}-cell", dim=n,
                            malformed=True)
        for table in (X.src[n], X.tgt[n]):
            extra = set(table) - set(X.cells[n])
            for c in sorted(extra):
                rep.add("undeclared", c, detail="boundary given for unknown cell", dim=n, malformed=True)
    if rep.malformed:
        return rep
    for n in range(2, X.max_dim + 1):
        s1, t1 = X.src[n - 1], X.tgt[n - 1]
        for c in X.cells[n]:
            s, t = X.src[n][c], X.tgt[n][c]
            rep.checked += 2
            if s1[s] != s1[t]:
                rep.add("globular-ss", c, detail=f"src(src)={s1[s]} but src(tgt)={s1[t]}", dim=n)
            if t1[s] != t1[t]:
                rep.add("globular-tt", c, detail=f"tgt(src)={t1[s]} but tgt(tgt)={t1[t]}", dim=n)
    return rep


def validate_glob_map(alpha: GlobularMap, allow_higher_codomain: bool = False) -> Report:
    rep = Report("globmap")
    dom, cod = alpha.dom, alpha.cod
    if dom.max_dim != cod.max_dim and not (allow_higher_codomain and cod.max_dim > dom.max_dim):
        rep.add("dimension-mismatch", dom.max_dim, cod.max_dim, malformed=True)
        return rep
    if len(alpha.maps) != dom.max_dim + 1:
        rep.add("shape", len(alpha.maps), detail="one assignment per dimension required", malformed=True)
        return rep
    for n in range(dom.max_dim + 1):
        for c in dom.cells[n]:
            if c not in alpha.maps[n]:
                rep.add("undeclared", c, detail="cell not mapped", dim=n, malformed=True)
            elif not cod.has(n, alpha.maps[n][c]):
                rep.add("undeclared", c, alpha.maps[n][c], detail="image not a cell of the codomain",
                        dim=n, malformed=True)
    if rep.malformed:
        return rep
    for n in range(1, dom.max_dim + 1):
        f, f_low = alpha.maps[n], alpha.maps[n - 1]
        for c in dom.cells[n]:
            rep.checked += 2
            if f_low[dom.src[n][c]] != cod.src[n][f[c]]:
                rep.add("commute-src", c, detail=f"f(src)={f_low[dom.src[n][c]]}, src(f)={cod.src[n][f[c]]}",
                        dim=n)
            if f_low[dom.tgt[n][c]] != cod.tgt[n][f[c]]:
                rep.add("commute-tgt", c, detail=f"f(tgt)={f_low[dom.tgt[n][c]]}, tgt(f)={cod.tgt[n][f[c]]}",
                        dim=n)
    return rep


def compose_glob_maps(alpha: GlobularMap, beta: GlobularMap) -> GlobularMap:
    """Diagrammatic composite: first ``alpha`` then ``beta``."""
    if alpha.cod is not beta.dom and not alpha.cod.same_as(beta.dom):
        raise GlobularError("codomain of the first map is not the domain of the second")
    maps = tuple({c: beta.maps[n][alpha.maps[n][c]] for c in alpha.dom.cells[n]}
                 for n in range(alpha.dom.max_dim + 1))
    return GlobularMap(alpha.dom, beta.cod, maps)
