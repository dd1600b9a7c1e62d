"""``finlat`` command-line front end.

Exit codes: 0 success, 1 domain error (JSON on stderr, or an invalid
diagram for ``validate``), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path

import numpy as np

from . import af, bratteli, catalog, codecs, theta, tower
from .covering import quotient
from .errors import FinlatError, FormatError
from .topology import order_from_topology, random_poset, topology_from_order


def parse_emit(value: str, allowed) -> tuple[str, str | None]:
    """``--emit`` takes a format name or a file name whose suffix is the format."""
    if value in allowed:
        return value, None
    suffix = Path(value).suffix.lstrip(".")
    if suffix in allowed:
        return suffix, value
    raise FormatError(f"cannot emit {value!r}; use one of {', '.join(allowed)} or a file with that suffix")


def parse_angle(text: str) -> float:
    """Floats or multiples of pi: ``1.0472``, ``pi``, ``-2pi``, ``pi/3``, ``2*pi/3``."""
    s = text.strip().replace(" ", "")
    try:
        return float(s)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?(?:\d+\.?\d*|\.\d+)?)\*?(?:pi|π)(?:/(\d+\.?\d*))?", s)
    if not m:
        raise FormatError(f"cannot parse angle {text!r}")
    coef = m.group(1)
    c = float(coef) if coef not in ("", "+", "-") else (-1.0 if coef == "-" else 1.0)
    d = float(m.group(2)) if m.group(2) else 1.0
    return c * math.pi / d


def parse_complex(text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s in ("i", "+i"):
        return 1j
    if s == "-i":
        return -1j
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise FormatError(f"cannot parse complex number {text!r}") from None


def parse_range(text: str) -> list[int]:
    """``8:256:x2`` (geometric), ``8:64:+8`` (arithmetic) or ``8,16,32``."""
    try:
        if "," in text or ":" not in text:
            return [int(x) for x in text.split(",") if x]
        parts = text.split(":")
        if len(parts) != 3:
            raise FormatError(f"range {text!r} must be start:stop:step")
        lo, hi, step = int(parts[0]), int(parts[1]), parts[2]
        geometric = step.startswith("x")
        inc = int(step[1:] if geometric else step.lstrip("+"))
    except ValueError:
        raise FormatError(f"cannot parse range {text!r}") from None
    if geometric and (inc < 2 or lo < 1):
        raise FormatError("geometric ranges need start >= 1 and step at least x2")
    if not geometric and inc < 1:
        raise FormatError("arithmetic step must be positive")
    out = []
    n = lo
    while n <= hi:
        out.append(n)
        n = n * inc if geometric else n + inc
    return out


def read_json(path: str):
    try:
        return codecs.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from None


def write(text: str, path: str | None, out) -> None:
    if path is None:
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _load_poset(args):
    if getattr(args, "poset", None):
        return codecs.poset_from_json(read_json(args.poset))
    if getattr(args, "name", None):
        return catalog.standard_poset(args.name, window=args.window, n=args.n)
    raise FormatError("give --poset FILE or --name NAME")


def cmd_quotient(args, out):
    spec = codecs.covering_from_json(read_json(args.covering))
    space = spec.space()
    q = quotient(space, spec.covering(space))
    fmt, path = parse_emit(args.emit, ("json", "dot", "topology"))
    if fmt == "dot":
        text = codecs.poset_to_dot(q.poset, "quotient")
    elif fmt == "topology":
        text = codecs.dumps(codecs.topology_to_json(q.space))
    else:
        doc = codecs.poset_to_json(q.poset)
        doc["classes"] = {c: [v[0], v[-1], len(v)] for c, v in q.classes.items()}
        text = codecs.dumps(doc)
    write(text, args.output or path, out)


def cmd_poset(args, out):
    if args.list:
        write("\n".join(catalog.NAMES) + "\n", args.output, out)
        return
    if args.from_topology:
        P = order_from_topology(codecs.topology_from_json(read_json(args.from_topology)))
    elif args.random is not None:
        P = random_poset(args.random, args.seed)
    else:
        P = _load_poset(args)
    fmt, path = parse_emit(args.emit, ("json", "dot", "topology"))
    if fmt == "dot":
        text = codecs.poset_to_dot(P, args.name or "poset")
    elif fmt == "topology":
        text = codecs.dumps(codecs.topology_to_json(topology_from_order(P)))
    else:
        text = codecs.dumps(codecs.poset_to_json(P))
    write(text, args.output or path, out)


def cmd_tower(args, out):
    specs = [codecs.covering_from_json(read_json(p)) for p in args.coverings]
    if len({s.space_key() for s in specs}) != 1:
        raise FormatError("all coverings of a tower must use the same sampled space")
    space = specs[0].space()
    T = tower.build_tower(space, [s.covering(space) for s in specs])
    depth = len(T) - 1 if args.depth is None else args.depth
    fmt, path = parse_emit(args.emit, ("json",)) if args.emit.endswith(".json") else ("json", None)
    which = "maximal" if Path(args.emit).stem.startswith("maximal") else "sequences"
    seqs = tower.maximal_points(T, depth) if which == "maximal" else tower.coherent_sequences(T, depth)
    doc = {"depth": depth, "kind": which, "sequences": [list(s.entries) for s in seqs],
           "levels": [codecs.poset_to_json(p) for p in T.posets[: depth + 1]],
           "maps": [T.maps[i] for i in range(depth)]}
    write(codecs.dumps(doc), args.output or path, out)


def _parse_order(text: str | None):
    """``k3,k1,2`` are positions in the default order; ``x1+x3`` or ``x3`` list points."""
    if not text:
        return None
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if re.fullmatch(r"[kK]?\d+", tok):
            out.append(int(tok.lstrip("kK")))
        elif tok:
            out.append(frozenset(tok.split("+")))
        else:
            raise FormatError(f"empty entry in --order {text!r}")
    return out


def cmd_bratteli(args, out):
    P = _load_poset(args)
    point_order = args.point_order.split(",") if args.point_order else None
    D = bratteli.poset_to_bratteli(P, args.levels, order=_parse_order(args.order), point_order=point_order)
    fmt, path = parse_emit(args.emit, ("json", "dot"))
    if fmt == "dot":
        text = codecs.bratteli_to_dot(D)
    else:
        doc = codecs.bratteli_to_json(D)
        if args.trace:
            doc["trace"] = [{"Y": [sorted(y) for y in p.Y], "F": [sorted(f) for f in p.F], "F_labels": list(p.F_labels)}
                            for p in D.trace]
        text = codecs.dumps(doc)
    write(text, args.output or path, out)


def cmd_af(args, out):
    D = codecs.bratteli_from_json(read_json(args.diagram))
    if args.embed_element:
        a = codecs.block_from_json(read_json(args.embed_element))
    else:
        level = args.random_level if args.random_level is not None else 0
        a = af.random_element(D, level, np.random.default_rng(args.seed))
    to = a.level + 1 if args.to_level is None else args.to_level
    b = af.embed_to(D, a, to)
    doc = codecs.block_to_json(b)
    doc["norm"] = af.block_norm(b)
    doc["source_norm"] = af.block_norm(a)
    write(codecs.dumps(doc), args.output, out)


def _model(args) -> theta.ThetaModel:
    try:
        eps = 2 * math.pi / args.N if args.eps == "auto" else float(args.eps)
    except ValueError:
        raise FormatError(f"--eps must be a number or 'auto', got {args.eps!r}") from None
    return theta.ThetaModel(args.N, eps, parse_angle(args.theta), parse_complex(args.m))


def cmd_theta(args, out):
    model = _model(args)
    rows = theta.spectrum(model, args.method)
    fmt, path = parse_emit(args.emit, ("csv", "json"))
    if fmt == "json":
        doc = {"N": model.N, "eps": model.eps, "theta": model.theta, "m": [model.m.real, model.m.imag],
               "rows": [{"m": r.m, "k": r.k, "lambda_closed": r.closed, "lambda_numeric": r.numeric,
                         "abs_diff": r.abs_diff} for r in rows]}
        text = codecs.dumps(doc)
    else:
        text = codecs.csv_text(["m", "k", "lambda_closed", "lambda_numeric", "abs_diff"],
                               [(r.m, r.k, r.closed, r.numeric, r.abs_diff) for r in rows])
    write(text, args.output or path, out)


def cmd_theta_converge(args, out):
    tab = theta.continuum_convergence(args.mode, parse_angle(args.theta), parse_range(args.N))
    fmt, path = parse_emit(args.emit, ("csv", "json"))
    rows = [(n, 2 * math.pi / n, v, tab.target, e) for n, v, e in zip(tab.Ns, tab.values, tab.errors)]
    order = "none" if tab.order is None else codecs.fmt17(tab.order)
    if fmt == "json":
        doc = {"mode": tab.mode, "theta": tab.theta, "target": tab.target, "order": tab.order,
               "convention": tab.convention,
               "rows": [dict(zip(("N", "eps", "lambda_hat", "target", "abs_err"), r)) for r in rows]}
        text = codecs.dumps(doc)
    else:
        text = codecs.csv_text(["N", "eps", "lambda_hat", "target", "abs_err"], rows,
                               comments=[f"convention: {tab.convention}", f"fitted order: {order}"])
    write(text, args.output or path, out)


def cmd_validate(args, out) -> int:
    if args.diagram:
        rep = bratteli.validate(codecs.bratteli_from_json(read_json(args.diagram)))
        write(codecs.dumps(codecs.report_to_json(rep)), args.output, out)
        return 0 if rep.ok else 1
    if args.poset:
        P = codecs.poset_from_json(read_json(args.poset))
        write(codecs.dumps({"ok": True, "points": len(P), "links": len(P.hasse_links)}), args.output, out)
        return 0
    if args.covering:
        spec = codecs.covering_from_json(read_json(args.covering))
        q = quotient(spec.space(), spec.covering())
        write(codecs.dumps({"ok": True, "classes": len(q.classes)}), args.output, out)
        return 0
    raise FormatError("give --diagram, --poset or --covering")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="finlat", description="Finitary approximations, Bratteli diagrams and θ-lattice spectra.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized utilities")
    sub = p.add_subparsers(dest="command", required=True)

    def with_output(sp):
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        return sp

    def with_poset(sp):
        sp.add_argument("--poset", help="poset JSON file")
        sp.add_argument("--name", choices=catalog.NAMES, help="catalog poset")
        sp.add_argument("--window", type=int, default=1, help="window W for 'line'")
        sp.add_argument("--n", type=int, default=2, help="N for 'circle2n'")

    s = with_output(sub.add_parser("quotient", help="finitary quotient of a covering"))
    s.add_argument("--covering", required=True)
    s.add_argument("--emit", default="json", help="json | dot | topology, or a file name")
    s.set_defaults(func=cmd_quotient)

    s = with_output(sub.add_parser("poset", help="catalog posets and conversions"))
    with_poset(s)
    s.add_argument("--from-topology", help="topology JSON to convert to a poset")
    s.add_argument("--random", type=int, metavar="POINTS", help="random poset (uses --seed)")
    s.add_argument("--list", action="store_true", help="list catalog names")
    s.add_argument("--emit", default="json", help="json | dot | topology, or a file name")
    s.set_defaults(func=cmd_poset)

    s = with_output(sub.add_parser("tower", help="projective tower of coverings"))
    s.add_argument("--coverings", nargs="+", required=True)
    s.add_argument("--depth", type=int)
    s.add_argument("--emit", default="sequences", help="sequences | maximal, optionally as NAME.json")
    s.set_defaults(func=cmd_tower)

    s = with_output(sub.add_parser("bratteli", help="Bratteli diagram of a poset"))
    with_poset(s)
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("--order", help="closed-set order: default-order indices (k3,k1,...) or point sets a+b")
    s.add_argument("--point-order", help="comma-separated points fixing the node order")
    s.add_argument("--trace", action="store_true", help="include the Y/F partitions")
    s.add_argument("--emit", default="json", help="json | dot, or a file name")
    s.set_defaults(func=cmd_bratteli)

    s = with_output(sub.add_parser("af", help="embed a block-matrix element up the tower"))
    s.add_argument("--diagram", required=True)
    s.add_argument("--embed-element", help="BlockMatrix JSON (default: random element, uses --seed)")
    s.add_argument("--random-level", type=int)
    s.add_argument("--to-level", type=int)
    s.set_defaults(func=cmd_af)

    s = with_output(sub.add_parser("theta", help="Laplacian spectrum on the circle lattice"))
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--theta", default="0")
    s.add_argument("--eps", default="1", help="lattice spacing or 'auto' (2π/N)")
    s.add_argument("--m", default="1", help="unit complex number, e.g. 1, i, 0.6+0.8i")
    s.add_argument("--method", choices=("stencil", "bracket", "adjoint"), default="stencil")
    s.add_argument("--emit", default="csv", help="csv | json, or a file name")
    s.set_defaults(func=cmd_theta)

    s = with_output(sub.add_parser("theta-converge", help="continuum convergence of one mode"))
    s.add_argument("--mode", type=int, default=1)
    s.add_argument("--theta", default="0")
    s.add_argument("--N", default="8:256:x2", help="start:stop:xF, start:stop:+D or a comma list")
    s.add_argument("--emit", default="csv", help="csv | json, or a file name")
    s.set_defaults(func=cmd_theta_converge)

    s = with_output(sub.add_parser("validate", help="validate a diagram, poset or covering file"))
    s.add_argument("--diagram")
    s.add_argument("--poset")
    s.add_argument("--covering")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        rc = args.func(args, out)
    except FinlatError as e:
        err.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
        return 1
    except OSError as e:
        err.write(json.dumps({"error": "IOError", "message": str(e)}) + "\n")
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
