"""θ-quantization of a particle on the 2N-point circle lattice.

Module elements and algebra elements are length-N complex vectors, realized
as diagonal N×N matrices when they meet the Dirac matrix.  Indices are
cyclic, 0-based in code.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EigensolverFailure, InvalidParameter, InvalidSize, LengthMismatch, NotGaugeTrivial


@dataclass(frozen=True)
class ThetaModel:
    N: int
    eps: float = 1.0
    theta: float = 0.0
    m: complex = 1.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 3:
            raise InvalidSize(f"N must be an integer >= 3, got {self.N}")
        if not self.eps > 0:
            raise InvalidParameter(f"eps must be positive, got {self.eps}")
        if abs(abs(self.m) - 1) > 1e-14:
            raise InvalidParameter(f"|m| must be 1, got {abs(self.m)}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "m", complex(self.m))

    @property
    def sigma(self) -> complex:
        return cmath.exp(-1j * self.theta / self.N) - 1

    def _hop(self, up: complex) -> np.ndarray:
        # up on (i, i+1), conj(up) on (i+1, i)
        n = self.N
        M = np.zeros((n, n), dtype=complex)
        i = np.arange(n)
        M[i, (i + 1) % n] = up
        M[(i + 1) % n, i] = np.conj(up)
        return M / (math.sqrt(2) * self.eps)


def _vec(eta, n=None) -> np.ndarray:
    v = np.asarray(eta, dtype=complex).reshape(-1)
    if n is not None and v.shape[0] != n:
        raise LengthMismatch(f"expected {n} components, got {v.shape[0]}")
    return v


def dirac(model: ThetaModel) -> np.ndarray:
    return model._hop(np.conj(model.m))


def connection(model: ThetaModel) -> np.ndarray:
    return model._hop(np.conj(model.sigma) * np.conj(model.m))


def laplacian_matrix(model: ThetaModel, method: str = "stencil") -> np.ndarray:
    """The N×N matrix of Δ_θ.  ``method``: ``stencil``, ``bracket`` or ``adjoint``."""
    n = model.N
    if method == "stencil":
        L = np.zeros((n, n), dtype=complex)
        i = np.arange(n)
        L[i, i] = -2.0
        L[i, (i - 1) % n] = cmath.exp(-1j * model.theta / n)
        L[i, (i + 1) % n] = cmath.exp(1j * model.theta / n)
        return L / model.eps ** 2
    if method == "bracket":
        return _bracket_diag(model, np.eye(n, dtype=complex))
    if method == "adjoint":
        return laplacian_adjoint_form(model)
    raise InvalidParameter(f"unknown Laplacian method {method!r}")


def laplacian_closed_form(model: ThetaModel, eta) -> np.ndarray:
    v = _vec(eta, model.N)
    ph = cmath.exp(1j * model.theta / model.N)
    return (np.roll(v, 1) / ph - 2 * v + ph * np.roll(v, -1)) / model.eps ** 2


def _bracket_diag(model: ThetaModel, V: np.ndarray) -> np.ndarray:
    """Bracket form applied to every column of ``V`` (shape ``(N, B)``).

    Only diagonal entries of the outer products are formed:
    ``[D,η]_ij = D_ij (η_j - η_i)`` and ``(AB)_ii = Σ_k A_ik B_ki``.
    """
    D, rho = dirac(model), connection(model)
    c1 = D[:, :, None] * (V[None, :, :] - V[:, None, :])
    dd = np.einsum("ik,kib->ib", D, c1) - np.einsum("ikb,ki->ib", c1, D)
    rc = np.einsum("ik,kib->ib", rho, c1)
    rr = np.einsum("ik,ki->i", rho, rho)
    return -dd - 2 * rc - rr[:, None] * V


def laplacian_bracket_form(model: ThetaModel, eta) -> np.ndarray:
    """Diagonal of ``-[D,[D,η]] - 2ρ[D,η] - ρ²η`` with η diagonal."""
    v = _vec(eta, model.N)
    return _bracket_diag(model, v[:, None])[:, 0]


def _bracket_form_dense(model: ThetaModel, eta) -> np.ndarray:
    # reference: full matrix products, used to cross-check the diagonal-only form
    v = _vec(eta, model.N)
    D, rho, E = dirac(model), connection(model), np.diag(v)
    c1 = D @ E - E @ D
    c2 = D @ c1 - c1 @ D
    return np.diag(-c2 - 2 * rho @ c1 - rho @ rho @ E).copy()


def covariant_derivative(model: ThetaModel, eta) -> np.ndarray:
    E = np.diag(_vec(eta, model.N))
    D = dirac(model)
    return D @ E - E @ D + connection(model) @ E


def nabla_operator(model: ThetaModel) -> np.ndarray:
    """∇_θ as an ``(N², N)`` matrix from the module into row-major matrix space."""
    return np.column_stack([covariant_derivative(model, e).reshape(-1) for e in np.eye(model.N)])


def laplacian_adjoint_form(model: ThetaModel) -> np.ndarray:
    """``-∇*∇`` with the trace pairing on matrices and the module scalar product."""
    G = nabla_operator(model)
    return -(G.conj().T @ G)


def q_project(M) -> np.ndarray:
    """Orthogonal projector onto diagonal matrices: keeps ``M_ii``."""
    M = np.asarray(M)
    return np.diag(np.diag(M))


def closed_form_eigenvalues(model: ThetaModel) -> np.ndarray:
    ms = np.arange(1, model.N + 1)
    return (2 / model.eps ** 2) * (np.cos(2 * np.pi * ms / model.N + model.theta / model.N) - 1)


def eigenmode(model: ThetaModel, mode: int) -> np.ndarray:
    k = 2 * np.pi * mode / model.N
    return np.exp(1j * k * np.arange(1, model.N + 1))


@dataclass(frozen=True)
class SpectrumRow:
    m: int
    k: float
    closed: float
    numeric: float

    @property
    def abs_diff(self) -> float:
        return abs(self.closed - self.numeric)


def spectrum(model: ThetaModel, method: str = "stencil") -> list[SpectrumRow]:
    """Closed-form modes m=1..N paired with numerical eigenvalues.

    The two lists are matched by rank (both sorted), then reported in mode order.
    """
    closed = closed_form_eigenvalues(model)
    try:
        numeric = np.linalg.eigvalsh(laplacian_matrix(model, method))
    except np.linalg.LinAlgError as e:
        raise EigensolverFailure(f"Hermitian eigensolver did not converge: {e}") from None
    paired = np.empty(model.N)
    paired[np.argsort(closed, kind="stable")] = np.sort(numeric)
    return [SpectrumRow(i + 1, 2 * math.pi * (i + 1) / model.N, float(closed[i]), float(paired[i]))
            for i in range(model.N)]


def gauge_integer(theta: float, tol: float = 1e-9) -> int:
    k = theta / (2 * math.pi)
    r = round(k)
    if abs(k - r) > tol:
        raise NotGaugeTrivial(f"θ/2π = {k} is not an integer")
    return int(r)


@dataclass(frozen=True, eq=False)
class GaugeWitness:
    k: int
    c: np.ndarray
    residual: float


def pure_gauge_witness(model: ThetaModel, lam: complex = 1.0) -> GaugeWitness:
    k = gauge_integer(model.theta)
    n = model.N
    c = lam * np.exp(1j * 2 * np.pi * k * np.arange(n) / n)
    C = np.diag(c)
    D = dirac(model)
    pure = np.diag(1 / c) @ (D @ C - C @ D)
    res = float(np.max(np.abs(connection(model) - pure)))
    return GaugeWitness(k, c, res)


@dataclass(frozen=True)
class ConvergenceTable:
    mode: int
    theta: float
    Ns: tuple[int, ...]
    values: tuple[float, ...]
    target: float
    errors: tuple[float, ...]
    order: float | None
    convention: str = field(default="eps = 2*pi/N; target -(m + theta/2pi)^2")


def continuum_convergence(mode: int, theta: float, Ns: Sequence[int]) -> ConvergenceTable:
    Ns = tuple(int(n) for n in Ns)
    vals = []
    for n in Ns:
        eps = 2 * math.pi / n
        vals.append((2 / eps ** 2) * (math.cos(2 * math.pi * mode / n + theta / n) - 1))
    target = -(mode + theta / (2 * math.pi)) ** 2
    errs = tuple(abs(v - target) for v in vals)
    pts = [(math.log(n), math.log(e)) for n, e in zip(Ns, errs) if e > 0]
    order = None
    if len(pts) >= 2:
        x, y = np.array(pts).T
        slope = np.polyfit(x, y, 1)[0]
        order = float(-slope)
    return ConvergenceTable(mode, theta, Ns, tuple(vals), target, errs, order)


def hermitian_structure(eta1, eta2) -> np.ndarray:
    a, b = _vec(eta1), _vec(eta2)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths {a.shape[0]} and {b.shape[0]} differ")
    return np.conj(a) * b


def scalar_product(eta1, eta2) -> complex:
    return complex(np.sum(hermitian_structure(eta1, eta2)))


def act(eta, c) -> np.ndarray:
    """Right module action ``η c`` (componentwise)."""
    a, b = _vec(eta), _vec(c)
    if a.shape != b.shape:
        raise LengthMismatch(f"lengths {a.shape[0]} and {b.shape[0]} differ")
    return a * b
