"""Acceptance criteria 1-11.  Each test prints one PASS/FAIL line; the lines are
also collected into a summary section at the end of the pytest run.

Run alone with ``pytest tests/test_acceptance.py -v`` (or ``python3
tests/test_acceptance.py`` for just the lines).
"""
import cmath
import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from finlat import catalog  # noqa: E402
from finlat.af import block_norm, chain_model, embed, identity, point_algebra, random_element  # noqa: E402
from finlat.bratteli import closed_sets, level_partition, poset_to_bratteli, stable_tail, validate  # noqa: E402
from finlat.covering import SampledSpace, quotient  # noqa: E402
from finlat.theta import (ThetaModel, closed_form_eigenvalues, continuum_convergence, laplacian_bracket_form,  # noqa: E402
                          laplacian_closed_form, laplacian_matrix, pure_gauge_witness)
from finlat.topology import (FiniteSpace, closure, order_from_topology, random_poset,  # noqa: E402
                            topology_from_order)
from finlat.tower import build_tower, coherent_sequences, is_continuous, is_surjective, maximal_points  # noqa: E402

from circle_covers import DETECTORS, EIGHT_POINT, FOUR_POINT, cover, label_map  # noqa: E402

RESULTS: dict = {}
TOL = 1e-12
fs = frozenset


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


# 1


TOP6 = {fs({"α"}), fs({"β"}), fs({"γ"}), fs({"α", "a", "β"}), fs({"β", "b", "γ"}), fs({"α", "c", "γ"})}


def test_criterion_01_detector_quotient():
    t0 = time.perf_counter()
    space = SampledSpace.circle(3600)
    q = quotient(space, cover(space, DETECTORS))
    P = q.poset
    dt = time.perf_counter() - t0
    names = label_map(space, q)
    minimal_opens = {fs(names[c] for c in P.down(x)) for x in P.points}
    ok = (len(q.classes) == 6 and minimal_opens == TOP6
          and P.relabel(names) == catalog.circle6() and dt < 1.0)
    report(1, ok, f"{len(q.classes)} classes, basis matches: {minimal_opens == TOP6}, {dt:.3f} s")


# 2


def test_criterion_02_round_trip():
    posets = [catalog.circle4(), catalog.circle6(), catalog.sphere6(), catalog.vee(), catalog.ypsilon(),
              catalog.line(1), catalog.line(2)]
    rng = np.random.default_rng(2)
    posets += [random_poset(int(rng.integers(1, 9)), int(rng.integers(0, 2 ** 31)), float(rng.uniform(0.1, 0.8)))
               for _ in range(200)]
    bad = 0
    for P in posets:
        S = topology_from_order(P)
        back = order_from_topology(S)
        again = topology_from_order(back)
        # a different basis for the same topology must also give the same order
        S2 = FiniteSpace(S.points, tuple(S.opens - {fs()}))
        if back != P or again.opens != S.opens or order_from_topology(S2) != P:
            bad += 1
    report(2, bad == 0, f"{len(posets)} posets, {bad} mismatches")


# 3

P4_ORDER = [{"x1", "x2", "x3", "x4"}, {"x1", "x3", "x4"}, {"x3"}, {"x4"}, {"x2", "x3", "x4"}, {"x3", "x4"}]
P4_POINTS = ["x3", "x2", "x1", "x4"]
VEE_ORDER = [{"x1", "x2", "x3"}, {"x2"}, {"x3"}, {"x2", "x3"}]
VEE_TABLE = {
    0: ([{"x1", "x2", "x3"}], ["K0"]),
    1: ([{"x2"}, {"x1", "x3"}], ["K1", "K0"]),
    2: ([{"x2"}, {"x1"}, {"x3"}], ["K1", "K0", "K2"]),
    3: ([{"x2"}, {"x1"}, {"x3"}], ["K1", "K0", "K2"]),
}
P4_TABLE = {
    0: ([{"x1", "x2", "x3", "x4"}], ["K0"]),
    1: ([{"x1", "x3", "x4"}, {"x2"}], ["K1", "K0"]),
    2: ([{"x3"}, {"x2"}, {"x1", "x4"}], ["K2", "K0", "K1"]),
    3: ([{"x3"}, {"x2"}, {"x1"}, {"x4"}], ["K2", "K0", "K1", "K3"]),
    4: ([{"x3"}, {"x2"}, {"x1"}, {"x4"}], ["K2", "K4", "K1", "K3"]),
    5: ([{"x3"}, {"x2"}, {"x1"}, {"x4"}], ["K2", "K4", "K1", "K3"]),
}


def _table_ok(P, table, **kw):
    for n, (Y, F) in table.items():
        lp = level_partition(P, n, **kw)
        if list(lp.Y) != [fs(y) for y in Y] or list(lp.F_labels) != F:
            return False
    return True


def test_criterion_03_golden_tables():
    vee_ok = _table_ok(catalog.vee(), VEE_TABLE, order=VEE_ORDER)
    p4_ok = _table_ok(catalog.circle4(), P4_TABLE, order=P4_ORDER, point_order=P4_POINTS)
    dv = poset_to_bratteli(catalog.vee(), 9).dims
    dp = poset_to_bratteli(catalog.circle4(), 9, order=P4_ORDER, point_order=P4_POINTS).dims
    vee_dims = dv[:2] == ((1,), (1, 1)) and all(dv[n] == (1, 2 * n - 2, 1) for n in range(2, 9))
    p4_dims = dp[:3] == ((1,), (1, 1), (1, 2, 1)) and all(dp[n] == (1, 2 * n - 2, 2 * n - 4, 1) for n in range(3, 9))
    ok = vee_ok and p4_ok and vee_dims and p4_dims
    report(3, ok, f"tables ∨ {vee_ok}, P4 {p4_ok}; dims to level 8 ∨ {vee_dims}, P4 {p4_dims}")


# 4


def test_criterion_04_diagram_validity():
    names = ["circle4", "circle6", "sphere6", "vee", "Y", "interval", "point"]
    posets = [catalog.standard_poset(n) for n in names] + [catalog.line(1), catalog.circle2n(4)]
    rng = np.random.default_rng(4)
    posets += [random_poset(int(rng.integers(1, 7)), int(rng.integers(0, 2 ** 31))) for _ in range(50)]
    invalid = tail_bad = 0
    for P in posets:
        levels = len(closed_sets(P)) + 3
        d = poset_to_bratteli(P, levels)
        if not validate(d).ok:
            invalid += 1
        tail = stable_tail(P)
        for n in range(len(P) + 1, levels - 1):
            if d.trace[n].Y != tail.Y or d.trace[n].F != tail.F or d.links(n) != tail.links:
                tail_bad += 1
                break
    report(4, invalid == 0 and tail_bad == 0,
           f"{len(posets)} posets, {invalid} invalid diagrams, {tail_bad} stable-tail mismatches")


# 5


def _homomorphism_failures(d, rng, count):
    fails = 0
    for i in range(count):
        n = i % 6
        a, b = random_element(d, n, rng), random_element(d, n, rng)
        ea, eb = embed(d, a), embed(d, b)
        z = complex(*rng.standard_normal(2))
        checks = [
            embed(d, a + b).allclose(ea + eb, TOL),
            embed(d, a * b).allclose(ea * eb, 1e-11 * max(1.0, block_norm(a) * block_norm(b))),
            embed(d, a.H).allclose(ea.H, TOL),
            embed(d, z * a).allclose(z * ea, TOL),
            embed(d, identity(d, n)) == identity(d, n + 1),
            ea.max_abs() > 0,
            block_norm(ea) <= block_norm(a) + TOL,
        ]
        fails += not all(checks)
    # injectivity: every source block is copied into some target block
    for n in range(6):
        used = {k for k, _ in d.multiplicity(n)}
        fails += used != set(range(len(d.dims[n])))
    return fails


def test_criterion_05_embedding_homomorphism():
    rng = np.random.default_rng(5)
    vee = poset_to_bratteli(catalog.vee(), 7)
    p4 = poset_to_bratteli(catalog.circle4(), 7, order=P4_ORDER, point_order=P4_POINTS)
    fv, fp = _homomorphism_failures(vee, rng, 100), _homomorphism_failures(p4, rng, 100)
    report(5, fv == 0 and fp == 0, f"100 random elements per tower to level 6: ∨ {fv} failures, P4 {fp} failures")


# 6


def test_criterion_06_point_algebra_orthogonality():
    worst_zero, worst_span, pairs = 0.0, 0.0, 0
    for name in ("vee", "Y", "circle4"):
        P = catalog.standard_poset(name)
        m = chain_model(P, t=2)
        algs = {x: point_algebra(m, x) for x in P.points}
        for x, y in itertools.product(P.points, repeat=2):
            if not P.comparable(x, y):
                for a in algs[x].basis:
                    for b in algs[y].basis:
                        worst_zero = max(worst_zero, float(np.max(np.abs(a @ b))))
                        pairs += 1
            elif P.leq(x, y):
                for a in algs[x].basis:
                    for b in algs[y].basis:
                        worst_span = max(worst_span, algs[x].contains(a @ b)[1], algs[x].contains(b @ a)[1])
                        pairs += 1
    ok = worst_zero == 0.0 and worst_span <= TOL
    report(6, ok, f"{pairs} basis products; incomparable max |AB| = {worst_zero}, x⪯y span residual {worst_span:.1e}")


# 7


def test_criterion_07_theta_spectrum():
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for N in range(3, 65):
        for theta in (0.0, math.pi / 3, math.pi, 2 * math.pi - 0.1):
            for eps in (0.5, 1.0):
                for m in (1, 1j):
                    model = ThetaModel(N, eps, theta, m)
                    closed = np.sort(closed_form_eigenvalues(model))
                    for method in ("stencil", "bracket"):
                        num = np.sort(np.linalg.eigvalsh(laplacian_matrix(model, method)))
                        worst = max(worst, float(np.max(np.abs(num - closed))))
                        count += 1
    dt = time.perf_counter() - t0
    report(7, worst <= 1e-9 and dt < 5.0, f"{count} spectra, max |Δλ| = {worst:.1e}, {dt:.2f} s")


# 8


def test_criterion_08_bracket_identity():
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(500):
        N = int(rng.integers(3, 33))
        theta = float(rng.uniform(-4 * math.pi, 4 * math.pi))
        eps = float(rng.uniform(0.5, 2.0))
        m = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        eta = rng.standard_normal(N) + 1j * rng.standard_normal(N)
        model = ThetaModel(N, eps, theta, m)
        diff = laplacian_bracket_form(model, eta) - laplacian_closed_form(model, eta)
        worst = max(worst, float(np.max(np.abs(diff))))
    report(8, worst <= 1e-10, f"500 random (N, θ, η), max difference {worst:.1e}")


# 9


def test_criterion_09_pure_gauge():
    worst = 0.0
    for k in (0, 1, 2):
        for N in range(4, 13):
            w = pure_gauge_witness(ThetaModel(N, theta=2 * math.pi * k))
            expected_c = np.exp(1j * 2 * math.pi * k * np.arange(N) / N)
            if not np.allclose(w.c, expected_c, atol=1e-15):
                worst = math.inf
            worst = max(worst, w.residual)
    report(9, worst <= 1e-12, f"k in 0..2, N in 4..12, max residual {worst:.1e}")


# 10


def test_criterion_10_continuum_convergence():
    t0 = time.perf_counter()
    Ns = [8 * 2 ** i for i in range(6)]
    tables = [continuum_convergence(1, theta, Ns) for theta in (0.0, math.pi)]
    dt = time.perf_counter() - t0
    ok = dt < 2.0
    for t in tables:
        ok &= all(a > b for a, b in zip(t.errors, t.errors[1:]))
        ok &= abs(t.order - 2.0) <= 0.1
        ok &= t.target == -(1 + t.theta / (2 * math.pi)) ** 2
    orders = ", ".join(f"θ={t.theta:.4g}: {t.order:.3f}" for t in tables)
    report(10, ok, f"fitted orders {orders}; {dt:.3f} s")


# 11


def test_criterion_11_tower_compatibility():
    space = SampledSpace.circle(3600)
    T = build_tower(space, [cover(space, a) for a in (FOUR_POINT, DETECTORS, EIGHT_POINT)])
    ok = True
    for i in range(3):
        for j in range(i, 3):
            pi = T.map(i, j)
            ok &= is_surjective(pi, T.posets[i].points) and is_continuous(pi, T.posets[j], T.posets[i])
            for k in range(j, 3):
                pjk, pik = T.map(j, k), T.map(i, k)
                ok &= all(pi[pjk[c]] == pik[c] for c in T.posets[k].points)
    P2 = T.posets[2]
    closed_pts = {c for c in P2.points if closure(P2, {c}) == {c}}
    tops = [s[2] for s in maximal_points(T, 2)]
    bij = len(tops) == len(set(tops)) and set(tops) == closed_pts
    ok &= bij and len(coherent_sequences(T, 2)) == len(P2)
    report(11, ok, f"levels {[len(P) for P in T.posets]}, {len(tops)} maximal sequences vs "
                   f"{len(closed_pts)} closed classes")


if __name__ == "__main__":
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_criterion")):
        try:
            fn()
        except AssertionError:
            pass
