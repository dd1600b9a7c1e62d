"""Towers of finitary quotients and their depth-truncated projective limit."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .covering import Covering, QuotientResult, SampledSpace, generate_topology, quotient
from .errors import DepthMismatch, LevelOutOfRange, NotARefinement
from .topology import Poset, is_open


@dataclass(frozen=True)
class CoherentSequence:
    entries: tuple[str, ...]

    @property
    def depth(self) -> int:
        return len(self.entries) - 1

    def __getitem__(self, i):
        return self.entries[i]


@dataclass(frozen=True)
class Tower:
    space: SampledSpace
    coverings: tuple[Covering, ...]
    quotients: tuple[QuotientResult, ...]
    maps: tuple[dict, ...]  # maps[i]: class at level i+1 -> class at level i

    def __len__(self) -> int:
        return len(self.quotients)

    @cached_property
    def posets(self) -> tuple[Poset, ...]:
        return tuple(q.poset for q in self.quotients)

    def map(self, i: int, j: int) -> dict:
        """π_ij as a table, composed from consecutive maps (i <= j)."""
        if not 0 <= i <= j < len(self):
            raise LevelOutOfRange(f"need 0 <= i <= j < {len(self)}, got i={i}, j={j}")
        table = {c: c for c in self.posets[j].points}
        for k in range(j - 1, i - 1, -1):
            step = self.maps[k]
            table = {c: step[v] for c, v in table.items()}
        return table

    def sample_sequence(self, s: int, depth: int | None = None) -> CoherentSequence:
        depth = len(self) - 1 if depth is None else depth
        return CoherentSequence(tuple(self.quotients[i].projection[s] for i in range(depth + 1)))


def factor_map(fine: QuotientResult, coarse: QuotientResult) -> dict:
    """Direct sample-level factoring of the coarse projection through the fine one.

    Raises ``NotARefinement`` (level 0, witness pair) when a fine class is
    spread over several coarse classes.
    """
    table = {}
    rep = {}
    for s, c in enumerate(fine.projection):
        target = coarse.projection[s]
        if c not in table:
            table[c] = target
            rep[c] = s
        elif table[c] != target:
            raise NotARefinement(0, (rep[c], s), "samples merged in the finer quotient are separated in the coarser one")
    return table


def _check_open_images(coarse: Covering, fine: QuotientResult, level: int) -> None:
    poset = fine.poset
    for name, m in zip(coarse.names, coarse.masks):
        img = fine.image(m)
        if fine.preimage(img) != m:
            # not a union of fine classes: find a split class
            for cid, members in fine.classes.items():
                inside = [s for s in members if m >> s & 1]
                if inside and len(inside) != len(members):
                    outside = next(s for s in members if not m >> s & 1)
                    raise NotARefinement(level, (inside[0], outside),
                                         f"set {name!r} splits a class of the finer quotient")
        if not is_open(poset, img):
            s = fine.classes[next(iter(img))][0]
            raise NotARefinement(level, (s, s), f"set {name!r} is not open in the finer quotient")


def build_tower(space: SampledSpace, coverings: Sequence[Covering]) -> Tower:
    if not coverings:
        raise LevelOutOfRange("a tower needs at least one covering")
    quots = tuple(quotient(space, c) for c in coverings)
    maps = []
    for i in range(len(quots) - 1):
        _check_open_images(coverings[i], quots[i + 1], i)
        try:
            maps.append(factor_map(quots[i + 1], quots[i]))
        except NotARefinement as e:
            raise NotARefinement(i, e.witness, e.reason) from None
    return Tower(space, tuple(coverings), quots, tuple(maps))


def is_surjective(table: dict, codomain) -> bool:
    return set(table.values()) == set(codomain)


def is_continuous(table: dict, source: Poset, target: Poset) -> bool:
    """Preimages of opens are open; for finite spaces this is monotonicity."""
    for x, y in source.relation:
        if not target.leq(table[x], table[y]):
            return False
    return True


def coherent_sequences(tower: Tower, depth: int) -> list[CoherentSequence]:
    """All depth-n coherent sequences, one per level-n class, sorted by entries."""
    if not 0 <= depth < len(tower):
        raise LevelOutOfRange(f"depth must be in [0, {len(tower) - 1}]")
    out = []
    for c in tower.posets[depth].points:
        seq = [c]
        for k in range(depth - 1, -1, -1):
            seq.append(tower.maps[k][seq[-1]])
        out.append(CoherentSequence(tuple(reversed(seq))))
    return sorted(out, key=lambda s: s.entries)


def fibered_sequences(tower: Tower, depth: int) -> list[CoherentSequence]:
    """Brute-force enumeration over the product of all levels (oracle)."""
    out = []
    levels = [tower.posets[i].points for i in range(depth + 1)]
    for combo in itertools.product(*levels):
        if all(tower.maps[i][combo[i + 1]] == combo[i] for i in range(depth)):
            out.append(CoherentSequence(tuple(combo)))
    return sorted(out, key=lambda s: s.entries)


def limit_order(tower: Tower, a: CoherentSequence, b: CoherentSequence) -> bool:
    if a.depth != b.depth:
        raise DepthMismatch(f"sequences have depths {a.depth} and {b.depth}")
    return all(tower.posets[i].leq(x, y) for i, (x, y) in enumerate(zip(a.entries, b.entries)))


def maximal_points(tower: Tower, depth: int) -> list[CoherentSequence]:
    seqs = coherent_sequences(tower, depth)
    return [a for a in seqs
            if not any(b != a and limit_order(tower, a, b) for b in seqs)]


def refines(coarse: Covering, fine: Covering) -> bool:
    """τ(coarse) ⊆ τ(fine), checked on the generated sample-subset topologies."""
    return generate_topology(coarse).as_sets() <= generate_topology(fine).as_sets()
