"""Finitary quotients of sampled spaces by finite open coverings.

The continuum is modelled by a dense finite sample.  Two samples are
identified when no covering set tells them apart; the classes, with the
quotient topology, form a finite T0 space.  Membership profiles stabilize
once the sampling is finer than every covering-set boundary, so results are
exact for the shipped coverings as long as that holds.

Sample subsets are stored as Python integers used as bit masks (bit ``s``
set iff sample ``s`` is a member).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CoverageGap, EmptyCovering, FormatError
from .topology import FiniteSpace, Poset, order_from_topology

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SampledSpace:
    """Finite stand-in for S¹, an ℝ-window or S².

    ``coords`` has shape ``(n,)`` for the circle and the line and ``(n, 2)``
    holding ``(theta, phi)`` (colatitude, longitude) for the sphere.
    """

    kind: str
    coords: np.ndarray = field(repr=False)
    periodic: bool = False

    def __len__(self) -> int:
        return len(self.coords)

    @classmethod
    def circle(cls, samples: int = 3600) -> "SampledSpace":
        # half-step offset keeps grid points off round-number arc endpoints
        phi = (np.arange(samples) + 0.5) * (TWO_PI / samples)
        return cls("circle", phi, periodic=True)

    @classmethod
    def line(cls, lo: float, hi: float, samples: int = 4000) -> "SampledSpace":
        step = (hi - lo) / samples
        return cls("line", lo + (np.arange(samples) + 0.5) * step)

    @classmethod
    def sphere(cls, n_phi: int = 720, n_theta: int = 360) -> "SampledSpace":
        theta = (np.arange(n_theta) + 0.5) * (math.pi / n_theta)
        phi = (np.arange(n_phi) + 0.5) * (TWO_PI / n_phi)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        return cls("sphere", np.column_stack([tt.ravel(), pp.ravel()]), periodic=True)

    @property
    def all_mask(self) -> int:
        return (1 << len(self)) - 1


def mask_from_bool(flags: np.ndarray) -> int:
    flags = np.asarray(flags, dtype=bool)
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def mask_to_indices(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _in_arc(phi, start, stop):
    length = stop - start
    if length <= 0 or length > TWO_PI:
        length = (stop - start) % TWO_PI or TWO_PI
    off = np.mod(phi - start, TWO_PI)
    return (off > 0) & (off < length)


def _sphere_unit(theta, phi):
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


@dataclass(frozen=True)
class CoverSet:
    """One detector: a named predicate on sample coordinates.

    kinds: ``arc`` (open arc from ``start`` to ``stop`` counter-clockwise,
    circle), ``interval`` (open interval, line), ``cap`` (open spherical cap,
    params ``theta, phi, radius``), ``band`` (open colatitude band),
    ``box`` (open longitude arc times open colatitude interval),
    ``indices`` (explicit sample indices), ``all``.
    """

    name: str
    kind: str
    params: tuple = ()

    def evaluate(self, space: SampledSpace) -> int:
        c = space.coords
        k = self.kind
        if k == "all":
            return space.all_mask
        if k == "indices":
            m = 0
            for i in self.params:
                if not 0 <= i < len(space):
                    raise FormatError(f"sample index {i} out of range in set {self.name!r}")
                m |= 1 << int(i)
            return m
        if k == "arc" and space.kind == "circle":
            return mask_from_bool(_in_arc(c, *self.params))
        if k == "interval" and space.kind == "line":
            lo, hi = self.params
            return mask_from_bool((c > lo) & (c < hi))
        if k == "cap" and space.kind == "sphere":
            th, ph, radius = self.params
            centre = _sphere_unit(np.float64(th), np.float64(ph))
            cosang = _sphere_unit(c[:, 0], c[:, 1]) @ centre
            return mask_from_bool(cosang > math.cos(radius))
        if k == "band" and space.kind == "sphere":
            lo, hi = self.params
            return mask_from_bool((c[:, 0] > lo) & (c[:, 0] < hi))
        if k == "box" and space.kind == "sphere":
            p0, p1, lo, hi = self.params
            return mask_from_bool(_in_arc(c[:, 1], p0, p1) & (c[:, 0] > lo) & (c[:, 0] < hi))
        raise FormatError(f"set kind {k!r} does not apply to a {space.kind} space")


@dataclass(frozen=True)
class Covering:
    """A finite family of open sample subsets."""

    names: tuple[str, ...]
    masks: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.masks)

    @classmethod
    def from_sets(cls, space: SampledSpace, sets: Sequence[CoverSet]) -> "Covering":
        return cls(tuple(s.name for s in sets), tuple(s.evaluate(space) for s in sets))

    @classmethod
    def arcs(cls, space: SampledSpace, arcs: Sequence[tuple[float, float]], prefix="U") -> "Covering":
        return cls.from_sets(space, [CoverSet(f"{prefix}{i + 1}", "arc", a) for i, a in enumerate(arcs)])

    @property
    def union(self) -> int:
        u = 0
        for m in self.masks:
            u |= m
        return u

    def as_sets(self) -> set[int]:
        return set(self.masks)


@dataclass(frozen=True)
class QuotientResult:
    space: FiniteSpace
    classes: dict
    projection: tuple[str, ...]
    covering: Covering

    def class_mask(self, cid: str) -> int:
        m = 0
        for s in self.classes[cid]:
            m |= 1 << s
        return m

    def image(self, mask: int) -> frozenset:
        return frozenset(self.projection[s] for s in mask_to_indices(mask))

    def preimage(self, subset) -> int:
        m = 0
        for cid in subset:
            m |= self.class_mask(cid)
        return m

    @property
    def poset(self) -> Poset:
        return order_from_topology(self.space)


def generate_topology(covering: Covering) -> Covering:
    """Close a covering under unions and intersections (empty set dropped)."""
    if not covering.masks:
        raise EmptyCovering("covering has no sets")
    names = {}
    for n, m in zip(covering.names, covering.masks):
        names.setdefault(m, n)
    # intersections first, then unions of those; together this is the topology
    inter = dict(names)
    frontier = list(inter)
    while frontier:
        new = []
        for a in frontier:
            for b in list(inter):
                c = a & b
                if c and c not in inter:
                    inter[c] = f"({inter[a]}∩{inter[b]})"
                    new.append(c)
        frontier = new
    found = dict(inter)
    frontier = list(found)
    while frontier:
        new = []
        for a in frontier:
            for b in list(found):
                c = a | b
                if c not in found:
                    found[c] = f"({found[a]}∪{found[b]})"
                    new.append(c)
        frontier = new
    ordered = sorted(found, key=lambda m: (m.bit_count() if hasattr(m, "bit_count") else bin(m).count("1"), m))
    return Covering(tuple(found[m] for m in ordered), tuple(ordered))


def membership_profiles(space: SampledSpace, covering: Covering) -> np.ndarray:
    """Boolean matrix ``(samples, sets)``."""
    n = len(space)
    out = np.zeros((n, len(covering)), dtype=bool)
    for j, m in enumerate(covering.masks):
        raw = np.frombuffer(m.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
        out[:, j] = np.unpackbits(raw, bitorder="little")[:n].astype(bool)
    return out


def quotient(space: SampledSpace, covering: Covering) -> QuotientResult:
    if not covering.masks:
        raise EmptyCovering("covering has no sets")
    prof = membership_profiles(space, covering)
    empty = np.flatnonzero(~prof.any(axis=1))
    if empty.size:
        raise CoverageGap(f"{empty.size} samples lie in no covering set (first: {int(empty[0])})")
    keys = np.packbits(prof, axis=1, bitorder="little")
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    # classes named after their smallest sample index, listed in that order
    order = np.argsort(first)
    cid = {int(u): f"s{int(first[u])}" for u in order}
    projection = tuple(cid[int(u)] for u in inverse)
    classes = {cid[int(u)]: [] for u in order}
    for s, c in enumerate(projection):
        classes[c].append(s)
    classes = {c: tuple(v) for c, v in classes.items()}
    points = tuple(classes)
    basis = []
    for j in range(len(covering)):
        members = frozenset(points[k] for k in range(len(points))
                            if prof[classes[points[k]][0], j])
        basis.append(members)
    return QuotientResult(FiniteSpace(points, tuple(basis)), classes, projection, covering)


def quotient_poset(space: SampledSpace, covering: Covering) -> tuple[Poset, tuple[str, ...]]:
    q = quotient(space, covering)
    return q.poset, q.projection


DETECTOR_ARCS = ((-math.pi / 3, 2 * math.pi / 3), (math.pi / 3, 4 * math.pi / 3), (math.pi, 2 * math.pi))
