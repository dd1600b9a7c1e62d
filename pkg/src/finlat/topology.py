"""Finite T0 spaces, posets and the passage between them.

A finite topology is determined by its minimal open sets
``Λ(x) = ⋂{U open : x ∈ U}``; the specialization order is ``x ⪯ y`` iff
``Λ(x) ⊆ Λ(y)``.  Open sets are down-sets and closed sets are up-sets of
that order, so open points sit at the bottom of a Hasse diagram and closed
points at the top.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InvalidPoset, NotT0, UnknownPoint

PointSet = frozenset


class Poset:
    """Immutable finite partial order on string point identifiers.

    ``relations`` may be any set of ``(lower, upper)`` pairs; the stored order
    is their reflexive-transitive closure.  A cycle raises ``InvalidPoset``.
    Equality compares point sets and order relations, not point listing order.
    """

    __slots__ = ("points", "_index", "_below", "_above", "__dict__")

    def __init__(self, points: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        pts = tuple(str(p) for p in points)
        if len(set(pts)) != len(pts):
            raise InvalidPoset("point identifiers must be unique")
        self.points = pts
        self._index = {p: i for i, p in enumerate(pts)}
        above = {p: {p} for p in pts}
        for lo, hi in relations:
            self._check(lo)
            self._check(hi)
            above[lo].add(hi)
        # transitive closure by repeated propagation in point order
        changed = True
        while changed:
            changed = False
            for p in pts:
                reach = set(above[p])
                for q in above[p]:
                    reach |= above[q]
                if len(reach) != len(above[p]):
                    above[p] = reach
                    changed = True
        for p in pts:
            for q in above[p]:
                if q != p and p in above[q]:
                    raise InvalidPoset(f"relation has a cycle through {p!r} and {q!r}")
        self._above = {p: frozenset(s) for p, s in above.items()}
        below = {p: set() for p in pts}
        for p in pts:
            for q in self._above[p]:
                below[q].add(p)
        self._below = {p: frozenset(s) for p, s in below.items()}

    @classmethod
    def from_hasse(cls, points: Iterable[str], links: Iterable[tuple[str, str]]) -> "Poset":
        return cls(points, links)

    def _check(self, x: str) -> None:
        if x not in self._index:
            raise UnknownPoint(f"unknown point {x!r}")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, x) -> bool:
        return x in self._index

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return set(self.points) == set(other.points) and self.relation == other.relation

    def __hash__(self) -> int:
        return hash((frozenset(self.points), self.relation))

    def __repr__(self) -> str:
        return f"Poset(points={list(self.points)!r}, hasse={list(self.hasse_links)!r})"

    def index(self, x: str) -> int:
        self._check(x)
        return self._index[x]

    def leq(self, x: str, y: str) -> bool:
        self._check(x)
        self._check(y)
        return y in self._above[x]

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.leq(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def down(self, x: str) -> PointSet:
        """Λ(x): all points below ``x``, including ``x``."""
        self._check(x)
        return self._below[x]

    def up(self, x: str) -> PointSet:
        """Closure of the one-point set ``{x}``: all points above ``x``."""
        self._check(x)
        return self._above[x]

    def down_set(self, subset: Iterable[str]) -> PointSet:
        out = set()
        for x in subset:
            out |= self.down(x)
        return frozenset(out)

    def up_set(self, subset: Iterable[str]) -> PointSet:
        out = set()
        for x in subset:
            out |= self.up(x)
        return frozenset(out)

    @cached_property
    def relation(self) -> frozenset:
        return frozenset((p, q) for p in self.points for q in self._above[p])

    @cached_property
    def hasse_links(self) -> tuple[tuple[str, str], ...]:
        """Covering pairs ``(lower, upper)`` in point order."""
        links = []
        for p in self.points:
            strict = self._above[p] - {p}
            for q in sorted(strict, key=self._index.__getitem__):
                if not any(q in self._above[r] for r in strict if r != q):
                    links.append((p, q))
        return tuple(links)

    def lower_covers(self, x: str) -> tuple[str, ...]:
        return tuple(lo for lo, hi in self.hasse_links if hi == x)

    def upper_covers(self, x: str) -> tuple[str, ...]:
        return tuple(hi for lo, hi in self.hasse_links if lo == x)

    @cached_property
    def minimal(self) -> tuple[str, ...]:
        return tuple(p for p in self.points if len(self._below[p]) == 1)

    @cached_property
    def maximal(self) -> tuple[str, ...]:
        return tuple(p for p in self.points if len(self._above[p]) == 1)

    def subposet(self, subset: Iterable[str]) -> "Poset":
        keep = set(subset)
        for x in keep:
            self._check(x)
        pts = [p for p in self.points if p in keep]
        return Poset(pts, [(p, q) for p, q in self.relation if p in keep and q in keep])

    def relabel(self, mapping: dict) -> "Poset":
        return Poset([mapping[p] for p in self.points],
                     [(mapping[p], mapping[q]) for p, q in self.hasse_links])

    def reordered(self, points: Sequence[str]) -> "Poset":
        """Same order, points listed in the given sequence."""
        if sorted(points) != sorted(self.points):
            raise InvalidPoset("reordering must list every point exactly once")
        return Poset(points, self.hasse_links)


@dataclass(frozen=True)
class FiniteSpace:
    """Finite topological space given by a generating family of open sets.

    The topology is the closure of ``basis`` under unions and intersections
    together with ``∅`` and the whole space.  It is enumerated only on demand
    (``opens``), since it can be exponentially large.
    """

    points: tuple[str, ...]
    basis: tuple[PointSet, ...]

    def __post_init__(self):
        pts = tuple(str(p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise InvalidPoset("point identifiers must be unique")
        known = set(pts)
        basis = tuple(frozenset(b) for b in self.basis)
        for b in basis:
            if not b <= known:
                raise UnknownPoint(f"basis set mentions unknown points {sorted(b - known)}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "basis", basis)

    def __contains__(self, x) -> bool:
        return x in self.points

    @cached_property
    def profiles(self) -> dict[str, tuple[bool, ...]]:
        return {p: tuple(p in b for b in self.basis) for p in self.points}

    @cached_property
    def opens(self) -> frozenset:
        """Every open set, including ``∅`` and the whole space."""
        minimal = {minimal_open_set(self, p) for p in self.points}
        found = {frozenset()}
        for m in minimal:
            found |= {s | m for s in found}
        found.add(frozenset(self.points))
        return frozenset(found)

    def is_open(self, subset: Iterable[str]) -> bool:
        sub = frozenset(subset)
        self._check_subset(sub)
        return all(minimal_open_set(self, x) <= sub for x in sub)

    def _check_subset(self, sub) -> None:
        unknown = sub - set(self.points)
        if unknown:
            raise UnknownPoint(f"unknown points {sorted(unknown)}")


@dataclass(frozen=True)
class HasseDiagram:
    levels: dict
    links: tuple[tuple[str, str], ...]

    @property
    def height(self) -> int:
        return 1 + max(self.levels.values(), default=-1)

    def rank(self, level: int) -> tuple[str, ...]:
        return tuple(p for p, lv in self.levels.items() if lv == level)


def minimal_open_set(space: FiniteSpace, x: str) -> PointSet:
    """Λ(x), the intersection of all open sets containing ``x``."""
    if x not in space.points:
        raise UnknownPoint(f"unknown point {x!r}")
    out = frozenset(space.points)
    for b in space.basis:
        if x in b:
            out &= b
    return out


def is_T0(space: FiniteSpace) -> bool:
    prof = space.profiles
    return len(set(prof.values())) == len(prof)


def order_from_topology(space: FiniteSpace) -> Poset:
    prof = space.profiles
    seen = {}
    for p in space.points:
        if prof[p] in seen:
            raise NotT0(f"points {seen[prof[p]]!r} and {p!r} lie in exactly the same open sets")
        seen[prof[p]] = p
    lam = {p: minimal_open_set(space, p) for p in space.points}
    rel = [(p, q) for p in space.points for q in space.points if p != q and lam[p] <= lam[q]]
    return Poset(space.points, rel)


def topology_from_order(poset: Poset) -> FiniteSpace:
    return FiniteSpace(poset.points, tuple(poset.down(p) for p in poset.points))


def closure(poset: Poset, subset: Iterable[str]) -> PointSet:
    return poset.up_set(subset)


def interior(poset: Poset, subset: Iterable[str]) -> PointSet:
    sub = frozenset(subset)
    for x in sub:
        poset.index(x)
    return frozenset(x for x in sub if poset.down(x) <= sub)


def is_open(poset: Poset, subset: Iterable[str]) -> bool:
    sub = frozenset(subset)
    return poset.down_set(sub) == sub


def is_closed(poset: Poset, subset: Iterable[str]) -> bool:
    sub = frozenset(subset)
    return poset.up_set(sub) == sub


def hasse(poset: Poset) -> HasseDiagram:
    # level = length of the longest chain below the point
    levels: dict[str, int] = {}

    def level(p):
        if p not in levels:
            levels[p] = 1 + max((level(q) for q in poset.lower_covers(p)), default=-1)
        return levels[p]

    for p in poset.points:
        level(p)
    return HasseDiagram({p: levels[p] for p in poset.points}, poset.hasse_links)


def down_sets(poset: Poset) -> list[PointSet]:
    """All open sets of the order topology, ``∅`` included."""
    return sorted(topology_from_order(poset).opens, key=lambda s: (len(s), sorted(s)))


def random_poset(n: int, seed: int, p: float = 0.3) -> Poset:
    """Random poset on ``n`` points from a random DAG, reproducible by ``seed``."""
    rng = random.Random(seed)
    pts = [f"p{i}" for i in range(n)]
    rel = [(pts[i], pts[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    order = pts[:]
    rng.shuffle(order)
    return Poset(pts, rel).reordered(order)
