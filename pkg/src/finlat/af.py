"""Finite-dimensional algebra towers of Bratteli diagrams, the chain Hilbert
model of a poset, point algebras, and operator-valued functions on the
small example lattices.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .bratteli import BratteliDiagram
from .errors import InvalidSize, LevelOutOfRange, ShapeMismatch, UnknownPoint
from .topology import Poset

TOL = 1e-12


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """Element of ``⊕_k M_{d_k}(ℂ)`` at one level of a diagram."""

    level: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=complex) for b in self.blocks)
        for b in blocks:
            if b.ndim != 2 or b.shape[0] != b.shape[1]:
                raise ShapeMismatch(f"blocks must be square matrices, got shape {b.shape}")
            if not np.all(np.isfinite(b)):
                raise ShapeMismatch("block entries must be finite")
        object.__setattr__(self, "blocks", blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    def _same(self, other: "BlockMatrix"):
        if self.level != other.level or self.sizes != other.sizes:
            raise ShapeMismatch(f"levels/sizes differ: {self.level}{self.sizes} vs {other.level}{other.sizes}")

    def __add__(self, other):
        self._same(other)
        return BlockMatrix(self.level, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other):
        self._same(other)
        return BlockMatrix(self.level, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, other):
        if isinstance(other, BlockMatrix):
            self._same(other)
            return BlockMatrix(self.level, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))
        return BlockMatrix(self.level, tuple(a * other for a in self.blocks))

    __rmul__ = __mul__

    @property
    def H(self) -> "BlockMatrix":
        return BlockMatrix(self.level, tuple(b.conj().T for b in self.blocks))

    def dense(self) -> np.ndarray:
        n = sum(self.sizes)
        out = np.zeros((n, n), dtype=complex)
        i = 0
        for b in self.blocks:
            d = b.shape[0]
            out[i:i + d, i:i + d] = b
            i += d
        return out

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(b))) for b in self.blocks if b.size), default=0.0)

    def allclose(self, other, tol: float = TOL) -> bool:
        self._same(other)
        return (self - other).max_abs() <= tol

    def __eq__(self, other):
        if not isinstance(other, BlockMatrix):
            return NotImplemented
        return (self.level == other.level and self.sizes == other.sizes
                and all(np.array_equal(a, b) for a, b in zip(self.blocks, other.blocks)))


def level_algebra(diagram: BratteliDiagram, n: int) -> tuple[int, ...]:
    if not 0 <= n < diagram.depth:
        raise LevelOutOfRange(f"level {n} not in diagram with {diagram.depth} levels")
    return diagram.dims[n]


def _block_diag(mats: Sequence[np.ndarray]) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n), dtype=complex)
    i = 0
    for m in mats:
        d = m.shape[0]
        out[i:i + d, i:i + d] = m
        i += d
    return out


def embed(diagram: BratteliDiagram, a: BlockMatrix) -> BlockMatrix:
    """Partial embeddings into the next level; copies grouped by source block."""
    n = a.level
    if a.sizes != level_algebra(diagram, n):
        raise ShapeMismatch(f"element sizes {a.sizes} do not match level {n} dims {diagram.dims[n]}")
    level_algebra(diagram, n + 1)
    mult = diagram.multiplicity(n)
    blocks = []
    for j, d in enumerate(diagram.dims[n + 1]):
        parts = []
        for k in range(len(a.blocks)):
            parts += [a.blocks[k]] * mult.get((k, j), 0)
        b = _block_diag(parts)
        if b.shape[0] != d:
            raise ShapeMismatch(f"target block ({n + 1},{j}) has size {d} but receives {b.shape[0]}")
        blocks.append(b)
    return BlockMatrix(n + 1, tuple(blocks))


def embed_to(diagram: BratteliDiagram, a: BlockMatrix, level: int) -> BlockMatrix:
    if level < a.level:
        raise LevelOutOfRange(f"cannot embed level {a.level} into lower level {level}")
    while a.level < level:
        a = embed(diagram, a)
    return a


def block_norm(a: BlockMatrix) -> float:
    return max((float(np.linalg.norm(b, 2)) for b in a.blocks if b.size), default=0.0)


def power_norm(m: np.ndarray, iters: int = 500, seed: int = 0) -> float:
    """Largest singular value by power iteration on ``m^H m`` (cross-check)."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    g = m.conj().T @ m
    lam = 0.0
    for _ in range(iters):
        w = g @ v
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        lam = nw
    return float(np.sqrt(lam))


def identity(diagram: BratteliDiagram, n: int) -> BlockMatrix:
    return BlockMatrix(n, tuple(np.eye(d) for d in level_algebra(diagram, n)))


def zeros(diagram: BratteliDiagram, n: int) -> BlockMatrix:
    return BlockMatrix(n, tuple(np.zeros((d, d)) for d in level_algebra(diagram, n)))


def random_element(diagram: BratteliDiagram, n: int, rng: np.random.Generator) -> BlockMatrix:
    return BlockMatrix(n, tuple(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                                for d in level_algebra(diagram, n)))


# chain Hilbert model

def maximal_chains(poset: Poset) -> list[tuple[str, ...]]:
    """Saturated chains from a maximal point down to a minimal point, top first."""
    out = []

    def walk(chain):
        below = poset.lower_covers(chain[-1])
        if not below:
            out.append(tuple(chain))
        for b in below:
            walk(chain + [b])

    for top in poset.maximal:
        walk([top])
    return out


@dataclass(frozen=True)
class ChainModel:
    poset: Poset
    t: int
    chains: tuple[tuple[str, ...], ...]

    @cached_property
    def dims(self) -> dict:
        return {c: self.t ** (len(c) - 1) for c in self.chains}

    @cached_property
    def offsets(self) -> dict:
        out, i = {}, 0
        for c in self.chains:
            out[c] = i
            i += self.dims[c]
        return out

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    def split(self, x: str) -> tuple[list, list]:
        """Upper chains (maximal point down to x) and lower chains (x down to minimal)."""
        self.poset.index(x)
        ups = sorted({c[: c.index(x) + 1] for c in self.chains if x in c}, key=self._chain_key)
        downs = sorted({c[c.index(x):] for c in self.chains if x in c}, key=self._chain_key)
        return ups, downs

    def _chain_key(self, c):
        return tuple(self.poset.index(p) for p in c)

    def point_dims(self, x: str) -> tuple[int, int]:
        ups, downs = self.split(x)
        return (sum(self.t ** (len(u) - 1) for u in ups), sum(self.t ** (len(d) - 1) for d in downs))

    def isometry(self, x: str) -> np.ndarray:
        """``V_x``: ``H(x)^u ⊗ H(x)^d -> H(P)``, upper index major."""
        ups, downs = self.split(x)
        du = [self.t ** (len(u) - 1) for u in ups]
        dd = [self.t ** (len(d) - 1) for d in downs]
        ou = np.concatenate([[0], np.cumsum(du)]).astype(int)
        od = np.concatenate([[0], np.cumsum(dd)]).astype(int)
        nu, nd = int(ou[-1]), int(od[-1])
        V = np.zeros((self.dim, nu * nd))
        for a, u in enumerate(ups):
            for b, d in enumerate(downs):
                chain = u + d[1:]
                base = self.offsets[chain]
                for i in range(du[a]):
                    for j in range(dd[b]):
                        V[base + i * dd[b] + j, (ou[a] + i) * nd + od[b] + j] = 1.0
        return V


def chain_model(poset: Poset, t: int = 2) -> ChainModel:
    if t < 1:
        raise InvalidSize("truncation t must be at least 1")
    return ChainModel(poset, t, tuple(maximal_chains(poset)))


@dataclass(frozen=True, eq=False)
class PointAlgebra:
    point: str
    V: np.ndarray  # isometry H(x)^u ⊗ H(x)^d -> H(P)
    nu: int
    nd: int

    @cached_property
    def basis(self) -> tuple:
        """Matrix units ``E_ij ⊗ I`` carried into ``H(P)``."""
        out = []
        eye_d = np.eye(self.nd)
        for i in range(self.nu):
            for j in range(self.nu):
                e = np.zeros((self.nu, self.nu))
                e[i, j] = 1.0
                out.append(self.V @ np.kron(e, eye_d) @ self.V.T)
        return tuple(out)

    @property
    def support(self) -> np.ndarray:
        return self.V @ self.V.T

    def element(self, a: np.ndarray) -> np.ndarray:
        return self.V @ np.kron(a, np.eye(self.nd)) @ self.V.T

    def project(self, m: np.ndarray) -> np.ndarray:
        """Frobenius-orthogonal projection onto the span of ``basis``."""
        c = (self.V.T @ m @ self.V).reshape(self.nu, self.nd, self.nu, self.nd)
        a = np.einsum("ikjk->ij", c) / self.nd
        return self.element(a)

    def contains(self, m: np.ndarray, tol: float = TOL) -> tuple[bool, float]:
        rest = np.asarray(m, dtype=complex) - self.project(m)
        r = float(np.max(np.abs(rest))) if rest.size else 0.0
        return r <= tol, r


def point_algebra(model: ChainModel, x: str) -> PointAlgebra:
    if x not in model.poset:
        raise UnknownPoint(f"unknown point {x!r}")
    nu, nd = model.point_dims(x)
    return PointAlgebra(x, model.isometry(x), nu, nd)


# operator-valued functions on the example lattices

@dataclass(frozen=True, eq=False)
class VeeElement:
    """``λ1 P1 + k + λ2 P2`` on ``H1 ⊕ H2`` (each of dimension t)."""

    lam1: complex
    k: np.ndarray
    lam2: complex

    @property
    def t(self) -> int:
        return np.asarray(self.k).shape[0] // 2

    def matrix(self) -> np.ndarray:
        t = self.t
        return np.diag([self.lam1] * t + [self.lam2] * t).astype(complex) + np.asarray(self.k, dtype=complex)

    def evaluate(self, point: str):
        # catalog ∨: x1 is the bottom point, x2 and x3 the top ones
        if point == "x1":
            return self.matrix()
        if point == "x2":
            return complex(self.lam1)
        if point == "x3":
            return complex(self.lam2)
        raise UnknownPoint(f"point {point!r} is not in the ∨ lattice")


@dataclass(frozen=True, eq=False)
class CircleElement:
    """``λ P_{3,12} + k1 + k2 + μ P_{4,12}`` on ``H31 ⊕ H32 ⊕ H41 ⊕ H42``.

    ``k1`` acts on ``H31 ⊕ H41``, ``k2`` on ``H32 ⊕ H42`` (each ``2t × 2t``).
    """

    lam: complex
    k1: np.ndarray
    k2: np.ndarray
    mu: complex

    @property
    def t(self) -> int:
        return np.asarray(self.k1).shape[0] // 2

    def _rep(self, k):
        t = self.t
        return np.diag([self.lam] * t + [self.mu] * t).astype(complex) + np.asarray(k, dtype=complex)

    def evaluate(self, point: str):
        # catalog circle4: x1, x2 open (bottom), x3, x4 closed (top)
        if point == "x1":
            return self._rep(self.k1)
        if point == "x2":
            return self._rep(self.k2)
        if point == "x3":
            return complex(self.lam)
        if point == "x4":
            return complex(self.mu)
        raise UnknownPoint(f"point {point!r} is not in the 4-point circle")


@dataclass(frozen=True, eq=False)
class CommutativeElement:
    """``c = (λ_1..λ_N)`` evaluated on the 2N-point circle poset."""

    lams: tuple

    def evaluate(self, point: str):
        n = len(self.lams)
        try:
            i = int(point[1:])
        except ValueError:
            i = 0
        if not point.startswith("x") or not 1 <= i <= 2 * n:
            raise UnknownPoint(f"point {point!r} is not in the {2 * n}-point circle")
        if i <= n:
            return complex(self.lams[i - 1])
        i -= n
        return np.diag([self.lams[i - 1], self.lams[i % n]]).astype(complex)


def evaluate_at(a, point: str):
    return a.evaluate(point)


def _vee_components(t):
    k = np.zeros((2 * t, 2 * t))
    k[0, -1] = 1.0
    return {"P1": VeeElement(1, np.zeros((2 * t, 2 * t)), 0),
            "k": VeeElement(0, k, 0),
            "P2": VeeElement(0, np.zeros((2 * t, 2 * t)), 1)}


def _circle_components(t):
    z = np.zeros((2 * t, 2 * t))
    k = z.copy()
    k[0, -1] = 1.0
    return {"P3": CircleElement(1, z, z, 0), "k1": CircleElement(0, k, z, 0),
            "k2": CircleElement(0, z, k, 0), "P4": CircleElement(0, z, z, 1)}


def kernel_support(components: dict, point: str) -> frozenset:
    """Names of the generating components annihilated at ``point``."""
    return frozenset(name for name, c in components.items()
                     if np.max(np.abs(np.atleast_1d(c.evaluate(point)))) == 0)


def kernel_order(example: str, t: int = 2) -> Poset:
    """Order of points by inclusion of representation kernels."""
    if example == "vee":
        comps, pts = _vee_components(t), ["x2", "x1", "x3"]
    elif example == "circle4":
        comps, pts = _circle_components(t), ["x1", "x2", "x3", "x4"]
    else:
        raise UnknownPoint(f"no kernel model for {example!r}")
    ker = {p: kernel_support(comps, p) for p in pts}
    return Poset(pts, [(p, q) for p in pts for q in pts if p != q and ker[p] <= ker[q]])
