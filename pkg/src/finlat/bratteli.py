"""From a finite poset to the Bratteli diagram of an AF algebra with that
primitive spectrum, plus diagram validation.

Closed sets are up-sets.  At level ``n`` the first ``n+1`` closed sets
``K_0..K_n`` are taken; their atoms ``Y_n(k)`` label the nodes, and
``F_n(k)``, the smallest set in the ∪/∩-closure of ``K_0..K_n`` that
contains ``Y_n(k)``, decides the links: ``(n,k) -> (n+1,j)`` iff
``Y_n(k) ∩ F_{n+1}(j)`` is nonempty, always with multiplicity one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import FormatError, LevelOutOfRange, TooLarge
from .topology import Poset

MAX_POINTS = 20


def _key(s: frozenset) -> tuple:
    return (len(s), sorted(s))


def _all_closed(poset: Poset) -> set[frozenset]:
    found = {frozenset()}
    for x in poset.points:
        up = poset.up(x)
        found |= {s | up for s in found}
    found.discard(frozenset())
    return found


def closed_sets(poset: Poset, order: Sequence | None = None) -> list[frozenset]:
    """Every nonempty closed set, ``P`` first.

    Default order: ``P``, then the point closures ``closure({x})`` and then the
    remaining closed sets, each group by ascending size with ties broken by
    sorted point ids.  ``order`` may list the closed sets explicitly (as point
    collections) or as integer positions in the default order; it must be a
    permutation starting with ``P``.
    """
    if len(poset) > MAX_POINTS:
        raise TooLarge(f"closed-set enumeration is limited to {MAX_POINTS} points, got {len(poset)}")
    everything = frozenset(poset.points)
    rest = _all_closed(poset)
    rest.discard(everything)
    principal = {poset.up(x) for x in poset.points} - {everything}
    default = [everything] + sorted(principal, key=_key) + sorted(rest - principal, key=_key)
    if order is None:
        return default
    chosen = []
    for item in order:
        if isinstance(item, int):
            if not 0 <= item < len(default):
                raise FormatError(f"closed-set index {item} out of range 0..{len(default) - 1}")
            chosen.append(default[item])
        else:
            chosen.append(frozenset(item))
    if sorted(chosen, key=_key) != sorted(default, key=_key):
        raise FormatError("ordering must list every nonempty closed set exactly once")
    if chosen[0] != everything:
        raise FormatError("ordering must start with the whole poset")
    return chosen


@dataclass(frozen=True)
class LevelPartition:
    n: int
    K: tuple[frozenset, ...]
    Y: tuple[frozenset, ...]
    F: tuple[frozenset, ...]

    @property
    def F_labels(self) -> tuple[str, ...]:
        return tuple(label_closed(f, self.K) for f in self.F)


def label_closed(s: frozenset, K: Sequence[frozenset]) -> str:
    """``K<i>`` if ``s`` is one of the listed sets, else ``∩`` of the ones containing it."""
    for i, k in enumerate(K):
        if k == s:
            return f"K{i}"
    return "∩".join(f"K{i}" for i, k in enumerate(K) if s <= k)


def level_partition(poset: Poset, n: int, order: Sequence | None = None,
                    point_order: Sequence[str] | None = None,
                    closed: Sequence[frozenset] | None = None) -> LevelPartition:
    """Atoms ``Y_n`` and their closed hulls ``F_n``.

    Atoms are listed by the position of their earliest member in
    ``point_order`` (default: the poset's own point order).
    """
    if n < 0:
        raise LevelOutOfRange("level must be non-negative")
    closed = list(closed) if closed is not None else closed_sets(poset, order)
    K = tuple(closed[: n + 1])
    pos = {p: i for i, p in enumerate(point_order or poset.points)}
    groups: dict[tuple, list[str]] = {}
    for p in poset.points:
        groups.setdefault(tuple(p in k for k in K), []).append(p)
    atoms = sorted((frozenset(g) for g in groups.values()), key=lambda a: min(pos[p] for p in a))
    # within a lattice closed under ∩ the smallest member containing an atom
    # is the intersection of the generators containing it
    F = []
    for a in atoms:
        hull = frozenset(poset.points)
        for k in K:
            if a <= k:
                hull &= k
        F.append(hull)
    return LevelPartition(n, K, tuple(atoms), tuple(F))


@dataclass(frozen=True)
class Edge:
    src: tuple[int, int]
    dst: tuple[int, int]
    mult: int = 1


@dataclass(frozen=True)
class BratteliDiagram:
    dims: tuple[tuple[int, ...], ...]
    edges: tuple[Edge, ...]
    trace: tuple = field(default=(), compare=False, repr=False)

    @property
    def depth(self) -> int:
        return len(self.dims)

    def multiplicity(self, n: int) -> dict:
        """``{(k, j): N_jk}`` for links from level ``n`` to ``n+1``."""
        out = {}
        for e in self.edges:
            if e.src[0] == n and e.dst[0] == n + 1:
                out[(e.src[1], e.dst[1])] = out.get((e.src[1], e.dst[1]), 0) + e.mult
        return out

    def links(self, n: int) -> frozenset:
        return frozenset(self.multiplicity(n))


def propagate_dims(n_nodes: Sequence[int], edges: Iterable[Edge]) -> tuple[tuple[int, ...], ...]:
    edges = list(edges)
    dims = [(1,) * n_nodes[0]]
    for n in range(1, len(n_nodes)):
        row = [0] * n_nodes[n]
        for e in edges:
            if e.dst[0] == n and e.src[0] == n - 1:
                row[e.dst[1]] += e.mult * dims[n - 1][e.src[1]]
        dims.append(tuple(row))
    return tuple(dims)


def poset_to_bratteli(poset: Poset, levels: int, order: Sequence | None = None,
                      point_order: Sequence[str] | None = None) -> BratteliDiagram:
    """Diagram with levels ``0..levels-1``; partitions kept in ``trace``."""
    if levels < 1:
        raise LevelOutOfRange("need at least one level")
    closed = closed_sets(poset, order)
    parts = [level_partition(poset, n, point_order=point_order, closed=closed) for n in range(levels)]
    edges = []
    for n in range(levels - 1):
        for k, y in enumerate(parts[n].Y):
            for j, f in enumerate(parts[n + 1].F):
                if y & f:
                    edges.append(Edge((n, k), (n + 1, j), 1))
    dims = propagate_dims([len(p.Y) for p in parts], edges)
    return BratteliDiagram(dims, tuple(edges), tuple(parts))


@dataclass(frozen=True)
class StableTail:
    points: tuple[str, ...]
    Y: tuple[frozenset, ...]
    F: tuple[frozenset, ...]
    links: frozenset  # (k, j) pairs


def stable_tail(poset: Poset, point_order: Sequence[str] | None = None) -> StableTail:
    pts = tuple(point_order or poset.points)
    S = tuple(poset.up(x) for x in pts)
    links = frozenset((k, j) for k, x in enumerate(pts) for j in range(len(pts)) if x in S[j])
    return StableTail(pts, tuple(frozenset([x]) for x in pts), S, links)


@dataclass(frozen=True)
class Violation:
    condition: str
    location: tuple
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}


def validate(diagram: BratteliDiagram) -> ValidationReport:
    """Conditions: ``level0`` (single node of dim 1), ``i`` (at most one link
    per node pair), ``ii`` (links only between consecutive levels), ``iii``
    (outgoing link, all but the last level), ``iv`` (incoming link, levels
    > 0), ``mult`` (positive multiplicities), ``node`` (unknown endpoint),
    ``dim`` (dimension recurrence, checked on
    nodes that have an incoming link)."""
    out = []
    dims = diagram.dims
    L = len(dims)
    if L == 0 or len(dims[0]) != 1 or dims[0][0] != 1:
        out.append(Violation("level0", (0,), "level 0 must be one node of dimension 1"))

    def known(node):
        n, k = node
        return 0 <= n < L and 0 <= k < len(dims[n])

    seen = set()
    has_out, has_in = set(), set()
    for e in diagram.edges:
        if not (known(e.src) and known(e.dst)):
            out.append(Violation("node", (e.src, e.dst), "link endpoint is not a node"))
            continue
        if e.mult < 1:
            out.append(Violation("mult", (e.src, e.dst), f"multiplicity {e.mult} is not positive"))
        if e.dst[0] != e.src[0] + 1:
            out.append(Violation("ii", (e.src, e.dst), "link between non-consecutive levels"))
            continue
        if (e.src, e.dst) in seen:
            out.append(Violation("i", (e.src, e.dst), "more than one link for this node pair"))
        seen.add((e.src, e.dst))
        has_out.add(e.src)
        has_in.add(e.dst)
    for n in range(L):
        for k in range(len(dims[n])):
            if n < L - 1 and (n, k) not in has_out:
                out.append(Violation("iii", (n, k), "node has no outgoing link"))
            if n > 0 and (n, k) not in has_in:
                out.append(Violation("iv", (n, k), "node has no incoming link"))
    for n in range(1, L):
        row = [0] * len(dims[n])
        for e in diagram.edges:
            if known(e.src) and known(e.dst) and e.src[0] == n - 1 and e.dst[0] == n:
                row[e.dst[1]] += e.mult * dims[n - 1][e.src[1]]
        for j, (want, got) in enumerate(zip(row, dims[n])):
            if want != got and (n, j) in has_in:
                out.append(Violation("dim", (n, j), f"dimension {got} but links give {want}"))
    return ValidationReport(tuple(out))
