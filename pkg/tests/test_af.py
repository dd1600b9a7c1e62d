import itertools

import numpy as np
import pytest

from finlat import catalog
from finlat.af import (BlockMatrix, CircleElement, CommutativeElement, VeeElement, block_norm, chain_model,
                       embed, embed_to, evaluate_at, identity, kernel_order, level_algebra, maximal_chains,
                       point_algebra, power_norm, random_element, zeros)
from finlat.bratteli import poset_to_bratteli
from finlat.errors import InvalidSize, LevelOutOfRange, ShapeMismatch, UnknownPoint
from finlat.topology import Poset

import oracles

P4_ORDER = [{"x1", "x2", "x3", "x4"}, {"x1", "x3", "x4"}, {"x3"}, {"x4"}, {"x2", "x3", "x4"}, {"x3", "x4"}]
P4_POINTS = ["x3", "x2", "x1", "x4"]


@pytest.fixture(scope="module")
def vee():
    return poset_to_bratteli(catalog.vee(), 8)


@pytest.fixture(scope="module")
def circ():
    return poset_to_bratteli(catalog.circle4(), 8, order=P4_ORDER, point_order=P4_POINTS)


def test_level_algebra(vee, circ):
    assert level_algebra(vee, 3) == (1, 4, 1)
    assert level_algebra(vee, 0) == (1,)
    assert level_algebra(circ, 4) == (1, 6, 4, 1)
    with pytest.raises(LevelOutOfRange):
        level_algebra(vee, 8)


def test_embed_vee_pattern(vee):
    rng = np.random.default_rng(1)
    B = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    a = BlockMatrix(3, (np.array([[2.0]]), B, np.array([[-5.0]])))
    b = embed(vee, a)
    assert b.sizes == (1, 6, 1)
    mid = np.zeros((6, 6), dtype=complex)
    mid[0, 0], mid[1:5, 1:5], mid[5, 5] = 2, B, -5
    assert b == BlockMatrix(4, (np.array([[2.0]]), mid, np.array([[-5.0]])))


def test_embed_circle_pattern(circ):
    rng = np.random.default_rng(2)
    B = rng.standard_normal((4, 4))
    C = rng.standard_normal((2, 2))
    a = BlockMatrix(3, (np.array([[1.5]]), B, C, np.array([[7.0]])))
    b = embed(circ, a)
    assert b.sizes == (1, 6, 4, 1)
    m1 = np.zeros((6, 6))
    m1[0, 0], m1[1:5, 1:5], m1[5, 5] = 1.5, B, 7
    m2 = np.zeros((4, 4))
    m2[0, 0], m2[1:3, 1:3], m2[3, 3] = 1.5, C, 7
    assert b == BlockMatrix(4, (np.array([[1.5]]), m1, m2, np.array([[7.0]])))


def test_embed_errors(vee):
    with pytest.raises(ShapeMismatch):
        embed(vee, BlockMatrix(3, (np.eye(1), np.eye(3), np.eye(1))))
    with pytest.raises(LevelOutOfRange):
        embed(vee, identity(vee, 7))
    with pytest.raises(LevelOutOfRange):
        embed_to(vee, identity(vee, 3), 2)
    with pytest.raises(ShapeMismatch):
        BlockMatrix(0, (np.ones((1, 2)),))
    with pytest.raises(ShapeMismatch):
        BlockMatrix(0, (np.array([[np.nan]]),))


def test_unital_and_zero(vee, circ):
    for d in (vee, circ):
        for n in range(7):
            assert embed(d, identity(d, n)) == identity(d, n + 1)
            assert embed(d, zeros(d, n)) == zeros(d, n + 1)
    assert block_norm(zeros(vee, 4)) == 0.0


def test_block_norm_direct_sum(vee):
    a = BlockMatrix(2, (np.array([[1.0]]), np.diag([3.0, 0.5]), np.array([[-2.0]])))
    assert block_norm(a) == pytest.approx(3.0, abs=1e-14)
    assert block_norm(embed(vee, a)) == pytest.approx(3.0, abs=1e-14)


def test_norm_cross_check(circ):
    rng = np.random.default_rng(3)
    for n in range(1, 7):
        a = random_element(circ, n, rng)
        dense = np.linalg.norm(a.dense(), 2)
        assert block_norm(a) == pytest.approx(dense, rel=1e-12)
        assert block_norm(a) == pytest.approx(power_norm(a.dense(), iters=3000), rel=1e-6)


@pytest.mark.parametrize("which", ["vee", "circ"])
def test_embedding_is_injective_star_homomorphism(which, vee, circ):
    d = vee if which == "vee" else circ
    rng = np.random.default_rng(4)
    for n in range(6):
        for _ in range(5):
            a, b = random_element(d, n, rng), random_element(d, n, rng)
            ea, eb = embed(d, a), embed(d, b)
            assert embed(d, a + b).allclose(ea + eb)
            assert embed(d, a * b).allclose(ea * eb)
            assert embed(d, a.H).allclose(ea.H)
            assert embed(d, 2.5j * a).allclose(2.5j * ea)
            assert block_norm(ea) <= block_norm(a) + 1e-12
            # every multiplicity is one and every source block is used: isometric
            assert block_norm(ea) == pytest.approx(block_norm(a), rel=1e-12)


def test_embed_to_composes(vee):
    rng = np.random.default_rng(5)
    a = random_element(vee, 1, rng)
    assert embed_to(vee, a, 5) == embed(vee, embed(vee, embed(vee, embed(vee, a))))
    assert embed_to(vee, a, 1) is a


# chain model


def test_chain_model_circle4_t1():
    m = chain_model(catalog.circle4(), t=1)
    assert len(m.chains) == 4 and m.dim == 4
    assert {frozenset(c) for c in m.chains} == set(oracles.all_chains(catalog.circle4()))


def test_chain_model_y_t2():
    m = chain_model(catalog.ypsilon(), t=2)
    assert len(m.chains) == 2
    assert all(len(c) == 3 for c in m.chains)
    assert m.dim == 8


def test_chain_model_point():
    m = chain_model(catalog.point(), t=3)
    assert m.dim == 1 and len(m.chains) == 1


def test_chain_model_bad_t():
    with pytest.raises(InvalidSize):
        chain_model(catalog.vee(), t=0)


@pytest.mark.parametrize("name", ["vee", "circle4", "circle6", "sphere6", "Y", "interval"])
def test_maximal_chains_match_oracle(name):
    P = catalog.standard_poset(name)
    chains = maximal_chains(P)
    assert sorted(map(frozenset, chains), key=sorted) == sorted(oracles.all_chains(P), key=sorted)
    for c in chains:
        assert c[0] in P.maximal and c[-1] in P.minimal


@pytest.mark.parametrize("name", ["vee", "circle4", "Y", "sphere6"])
def test_point_dims_factor(name):
    m = chain_model(catalog.standard_poset(name), t=2)
    for x in m.poset.points:
        nu, nd = m.point_dims(x)
        V = m.isometry(x)
        assert V.shape == (m.dim, nu * nd)
        assert np.array_equal(V.T @ V, np.eye(nu * nd))


def test_point_algebra_vee_minimal():
    m = chain_model(catalog.vee(), t=2)
    B = point_algebra(m, "x1")
    # x1 is the bottom: H(x)^d is scalar and the algebra is the full matrix algebra on H(P)
    assert (B.nu, B.nd) == (4, 1)
    assert np.array_equal(B.support, np.eye(4))
    assert len(B.basis) == 16


def test_point_algebra_vee_maximal():
    m = chain_model(catalog.vee(), t=2)
    B = point_algebra(m, "x2")
    assert B.nu == 1 and B.nd == 2
    assert len(B.basis) == 1
    assert np.array_equal(B.basis[0], B.support)
    assert np.trace(B.support) == 2


def test_point_algebra_isolated_point():
    m = chain_model(Poset(["p", "q"]), t=2)
    B = point_algebra(m, "p")
    assert (B.nu, B.nd) == (1, 1) and m.dim == 2


def test_point_algebra_unknown():
    with pytest.raises(UnknownPoint):
        point_algebra(chain_model(catalog.vee()), "zz")


@pytest.mark.parametrize("name", ["vee", "Y", "circle4"])
def test_point_algebras_closed_and_supported(name):
    m = chain_model(catalog.standard_poset(name), t=2)
    for x in m.poset.points:
        B = point_algebra(m, x)
        S = B.support
        for e in B.basis:
            assert np.array_equal(S @ e @ S, e)
        for e, f in itertools.product(B.basis[:6], repeat=2):
            assert B.contains(e @ f)[0]
            assert B.contains(e.conj().T)[0]


@pytest.mark.parametrize("name", ["vee", "Y", "circle4", "circle6", "sphere6"])
def test_point_algebra_products(name):
    P = catalog.standard_poset(name)
    m = chain_model(P, t=2)
    algs = {x: point_algebra(m, x) for x in P.points}
    rng = np.random.default_rng(6)
    for x, y in itertools.product(P.points, repeat=2):
        a = algs[x].element(rng.standard_normal((algs[x].nu,) * 2))
        b = algs[y].element(rng.standard_normal((algs[y].nu,) * 2))
        if not P.comparable(x, y):
            assert not np.any(a @ b) and not np.any(b @ a)
        elif P.leq(x, y):
            assert algs[x].contains(a @ b)[1] <= 1e-12
            assert algs[x].contains(b @ a)[1] <= 1e-12


# operator-valued functions


def test_vee_element_values():
    rng = np.random.default_rng(7)
    k = rng.standard_normal((4, 4))
    a = VeeElement(2.0, k, -1.0)
    assert evaluate_at(a, "x2") == 2.0 and evaluate_at(a, "x3") == -1.0
    assert np.array_equal(evaluate_at(a, "x1"), np.diag([2, 2, -1, -1]) + k)
    with pytest.raises(UnknownPoint):
        evaluate_at(a, "x4")


def test_vee_element_zero():
    z = VeeElement(0, np.zeros((4, 4)), 0)
    assert all(not np.any(evaluate_at(z, p)) for p in catalog.vee().points)


def test_circle_element_values():
    k1, k2 = np.ones((4, 4)), 2 * np.ones((4, 4))
    a = CircleElement(3.0, k1, k2, 4.0)
    assert evaluate_at(a, "x3") == 3.0 and evaluate_at(a, "x4") == 4.0
    assert np.array_equal(evaluate_at(a, "x1"), np.diag([3, 3, 4, 4]) + k1)
    assert np.array_equal(evaluate_at(a, "x2"), np.diag([3, 3, 4, 4]) + k2)
    # the two bottom values differ by a compact block only
    diff = evaluate_at(a, "x1") - evaluate_at(a, "x2")
    assert np.array_equal(diff, k1 - k2)


def test_commutative_element_values():
    c = CommutativeElement((1.0, 2.0, 3.0, 4.0))
    assert evaluate_at(c, "x2") == 2.0
    assert np.array_equal(evaluate_at(c, "x5"), np.diag([1.0, 2.0]))
    assert np.array_equal(evaluate_at(c, "x8"), np.diag([4.0, 1.0]))
    with pytest.raises(UnknownPoint):
        evaluate_at(c, "x9")
    with pytest.raises(UnknownPoint):
        evaluate_at(c, "y1")


def test_kernel_order():
    assert kernel_order("vee") == catalog.vee()
    assert kernel_order("circle4") == catalog.circle4()
    with pytest.raises(UnknownPoint):
        kernel_order("torus")
