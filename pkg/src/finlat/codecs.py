"""JSON, DOT and CSV encoders/decoders for the package's value types.

JSON floats are written by the standard library (shortest repr), which
round-trips doubles exactly.  CSV floats use 17 significant digits.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .af import BlockMatrix
from .bratteli import BratteliDiagram, Edge, ValidationReport
from .covering import CoverSet, Covering, SampledSpace
from .errors import FormatError
from .topology import FiniteSpace, Poset, hasse

# helpers


def _need(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return v


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON: {e}") from None


def dumps(doc: Any) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=1) + "\n"


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


# posets and topologies


def poset_to_json(poset: Poset) -> dict:
    return {"points": [{"id": p} for p in poset.points], "hasse": [list(l) for l in poset.hasse_links]}


def poset_from_json(doc: dict) -> Poset:
    pts = _need(doc, "points", list)
    ids = []
    for p in pts:
        ids.append(str(_need(p, "id")) if isinstance(p, dict) else str(p))
    links = _need(doc, "hasse", list) if "hasse" in doc else []
    for l in links:
        if not isinstance(l, list) or len(l) != 2:
            raise FormatError("hasse links must be [lower, upper] pairs")
    return Poset(ids, [(str(a), str(b)) for a, b in links])


def topology_to_json(space: FiniteSpace) -> dict:
    pos = {p: i for i, p in enumerate(space.points)}
    return {"points": list(space.points),
            "basis": [sorted(b, key=pos.__getitem__) for b in space.basis]}


def topology_from_json(doc: dict) -> FiniteSpace:
    pts = [str(p) for p in _need(doc, "points", list)]
    basis = _need(doc, "basis", list)
    return FiniteSpace(tuple(pts), tuple(frozenset(str(x) for x in b) for b in basis))


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def poset_to_dot(poset: Poset, name: str = "poset") -> str:
    """One rank per Hasse level, links drawn upward (bottom-to-top layout)."""
    h = hasse(poset)
    node = {}
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for lv in range(h.height):
        rank = h.rank(lv)
        for i, p in enumerate(rank):
            node[p] = f"L{lv}_{i}"
        ids = " ".join(f"{node[p]} [label={_dot_id(p)}];" for p in rank)
        lines.append(f"  {{ rank=same; {ids} }}")
    for lo, hi in h.links:
        lines.append(f"  {node[lo]} -> {node[hi]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# coverings


@dataclass(frozen=True)
class CoveringSpec:
    """A covering document: the sampled model space plus named sets."""

    kind: str
    samples: int
    sets: tuple[CoverSet, ...]
    lo: float | None = None
    hi: float | None = None
    n_theta: int | None = None

    def space(self) -> SampledSpace:
        if self.kind == "circle":
            return SampledSpace.circle(self.samples)
        if self.kind == "line":
            return SampledSpace.line(self.lo, self.hi, self.samples)
        if self.kind == "sphere":
            return SampledSpace.sphere(self.samples, self.n_theta or max(1, self.samples // 2))
        raise FormatError(f"unknown space kind {self.kind!r}")

    def covering(self, space: SampledSpace | None = None) -> Covering:
        return Covering.from_sets(space or self.space(), self.sets)

    def space_key(self) -> tuple:
        return (self.kind, self.samples, self.lo, self.hi, self.n_theta)


_SET_FIELDS = {
    "arc": ("from", "to"),
    "interval": ("from", "to"),
    "band": ("from", "to"),
    "cap": ("theta", "phi", "radius"),
    "box": ("from", "to", "theta_from", "theta_to"),
}


def covering_from_json(doc: dict) -> CoveringSpec:
    sp = _need(doc, "space", dict)
    kind = _need(sp, "kind", str)
    samples = _need(sp, "samples", int)
    if samples < 1:
        raise FormatError("samples must be positive")
    lo = hi = n_theta = None
    if kind == "line":
        lo, hi = float(_need(sp, "from")), float(_need(sp, "to"))
        if not lo < hi:
            raise FormatError("line window needs from < to")
    elif kind == "sphere":
        n_theta = int(sp.get("samples_theta", max(1, samples // 2)))
    elif kind != "circle":
        raise FormatError(f"unknown space kind {kind!r}")
    sets = []
    for i, s in enumerate(_need(doc, "sets", list)):
        sk = _need(s, "kind", str)
        name = str(s.get("name", f"U{i + 1}"))
        if sk in _SET_FIELDS:
            try:
                params = tuple(float(_need(s, f)) for f in _SET_FIELDS[sk])
            except (TypeError, ValueError):
                raise FormatError(f"set {name!r} has non-numeric parameters") from None
        elif sk == "indices":
            params = tuple(int(x) for x in _need(s, "indices", list))
        elif sk == "all":
            params = ()
        else:
            raise FormatError(f"unknown set kind {sk!r}")
        sets.append(CoverSet(name, sk, params))
    return CoveringSpec(kind, samples, tuple(sets), lo, hi, n_theta)


def covering_to_json(spec: CoveringSpec) -> dict:
    sp: dict = {"kind": spec.kind, "samples": spec.samples}
    if spec.kind == "line":
        sp["from"], sp["to"] = spec.lo, spec.hi
    if spec.kind == "sphere":
        sp["samples_theta"] = spec.n_theta
    sets = []
    for s in spec.sets:
        d = {"name": s.name, "kind": s.kind}
        if s.kind in _SET_FIELDS:
            d.update(zip(_SET_FIELDS[s.kind], s.params))
        elif s.kind == "indices":
            d["indices"] = list(s.params)
        sets.append(d)
    return {"space": sp, "sets": sets}


# Bratteli diagrams


def bratteli_to_json(d: BratteliDiagram) -> dict:
    return {"levels": [[{"dim": x} for x in row] for row in d.dims],
            "edges": [{"from": list(e.src), "to": list(e.dst), "mult": e.mult} for e in d.edges]}


def bratteli_from_json(doc: dict) -> BratteliDiagram:
    levels = _need(doc, "levels", list)
    dims = []
    for row in levels:
        if not isinstance(row, list):
            raise FormatError("each level must be a list of nodes")
        dims.append(tuple(int(_need(n, "dim")) for n in row))
    edges = []
    for e in _need(doc, "edges", list):
        src, dst = _need(e, "from", list), _need(e, "to", list)
        if len(src) != 2 or len(dst) != 2:
            raise FormatError("edge endpoints must be [level, index]")
        edges.append(Edge((int(src[0]), int(src[1])), (int(dst[0]), int(dst[1])), int(e.get("mult", 1))))
    return BratteliDiagram(tuple(dims), tuple(edges))


def bratteli_to_dot(d: BratteliDiagram, name: str = "bratteli") -> str:
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=TB;", "  node [shape=plaintext];"]
    for n, row in enumerate(d.dims):
        ids = " ".join(f"n{n}_{k} [label=\"{x}\"];" for k, x in enumerate(row))
        lines.append(f"  {{ rank=same; {ids} }}")
    for e in d.edges:
        label = f" [label=\"{e.mult}\"]" if e.mult != 1 else ""
        lines.append(f"  n{e.src[0]}_{e.src[1]} -> n{e.dst[0]}_{e.dst[1]}{label};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def report_to_json(r: ValidationReport) -> dict:
    return {"ok": r.ok, "violations": [{"condition": v.condition, "location": _plain(v.location),
                                        "message": v.message} for v in r.violations]}


def _plain(x):
    if isinstance(x, tuple):
        return [_plain(i) for i in x]
    return x


# block matrices


def block_to_json(a: BlockMatrix) -> dict:
    return {"level": a.level,
            "blocks": [[[[float(z.real), float(z.imag)] for z in row] for row in b] for b in a.blocks]}


def block_from_json(doc: dict) -> BlockMatrix:
    level = _need(doc, "level", int)
    blocks = []
    for b in _need(doc, "blocks", list):
        try:
            arr = np.array(b, dtype=float)
        except (TypeError, ValueError):
            raise FormatError("block entries must be [re, im] pairs") from None
        if arr.size == 0:
            arr = np.zeros((0, 0, 2))
        if arr.ndim != 3 or arr.shape[2] != 2:
            raise FormatError("each block must be a square list of [re, im] pairs")
        blocks.append(arr[..., 0] + 1j * arr[..., 1])
    return BlockMatrix(level, tuple(blocks))


# CSV


def csv_text(header: Sequence[str], rows: Sequence[Sequence], comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(",".join(header))
    for r in rows:
        out.append(",".join(fmt17(v) if isinstance(v, float) else str(v) for v in r))
    return "\n".join(out) + "\n"
