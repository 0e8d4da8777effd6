"""Spin operators, Berezin kernels and lowering functors."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ck_algebra.exact_scalars import ONE, CyclotomicScalar
from ck_algebra.grassmann import GrassmannElement, Operator, graded_indices
from ck_algebra.relcat import NULL, LinearRelation, compose, random_D_morphism, random_lagrangian, standard_object
from ck_algebra.repkit import (
    TooLarge, affine_product, berezin_operator, check_projective, clifford_action,
    end_generators_A, exterior_power_matrix, exterior_power_rep, extension_type,
    fundamental_GA, is_generalized_berezin, parity_blocks, kernel_from_product, kernel_to_operator,
    lowering_functor, operator_to_kernel, parity_split, self_rep_A, spin_B, spin_B_matrix,
    spin_matrix, spin_operator, subordinate,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
coef = st.integers(-2, 2).map(CyclotomicScalar)


def vectors(dim):
    return st.lists(coef, min_size=dim, max_size=dim).map(
        lambda xs: {k: c for k, c in enumerate(xs) if c})


@pytest.mark.parametrize("cat,rank", [("GD", 2), ("B", 1), ("B", 2)])
@given(data=st.data())
def test_clifford_relations(cat, rank, data):
    V = standard_object(cat, rank)
    v, w = data.draw(vectors(V.dim)), data.draw(vectors(V.dim))
    av, aw = clifford_action(V, v), clifford_action(V, w)
    side = 1 << V.rank
    expected = Operator.identity(side).scale(V.form(v, w))
    assert av @ aw + aw @ av == expected


def test_identity_kernel_is_the_identity_operator():
    # exp(sum xi_k etabar_k) with xi first
    n = 3
    N = 2 * n
    g = [GrassmannElement.generator(N, i) for i in range(N)]
    K = GrassmannElement.one(N)
    for k in range(n):
        K = K * (GrassmannElement.one(N) + g[k] * g[n + k])
    assert kernel_to_operator(K, n, n) == Operator.identity(1 << n)


@pytest.mark.parametrize("cat", ["GD", "D"])
def test_spin_of_identity(cat):
    V = standard_object(cat, 2)
    S = spin_operator(LinearRelation.identity(V.dim), V, V)
    assert S.matrix == Operator.identity(4)
    assert S.solution_dim == 1
    assert spin_operator(NULL, V, V) is None


@given(seeds)
def test_spin_is_projectively_multiplicative(seed):
    rng = random.Random(seed)
    V = standard_object("GD", 2)
    P = random_lagrangian(rng, V, V, zero_prob=0.5)
    Q = random_lagrangian(rng, V, V, zero_prob=0.5)
    assert check_projective("GD", Q, P, V, V, V).ok


@given(seeds)
def test_spin_kernels_have_berezin_form(seed):
    rng = random.Random(seed)
    V = standard_object("GD", 2)
    P = random_lagrangian(rng, V, V)
    K = operator_to_kernel(spin_matrix(P, V, V))
    assert is_generalized_berezin(K)
    assert kernel_to_operator(K, 2, 2) == spin_matrix(P, V, V)


@given(seeds)
def test_D_morphisms_preserve_parity(seed):
    rng = random.Random(seed)
    V = standard_object("D", 2)
    S = spin_matrix(random_D_morphism(rng, V, V), V, V)
    same, flip = parity_split(S)
    assert same and not flip
    even, odd = parity_blocks(S)
    nnz = lambda op: sum(len(c) for c in op.data.values())  # noqa: E731
    assert nnz(even) + nnz(odd) == nnz(S)


@given(seeds)
def test_spin_B_is_projective(seed):
    rng = random.Random(seed)
    V = standard_object("B", 1)
    P = random_lagrangian(rng, V, V, zero_prob=0.5)
    Q = random_lagrangian(rng, V, V, zero_prob=0.5)
    assert check_projective("B", Q, P, V, V, V, functor=spin_B_matrix).ok
    assert spin_B(P, V, V).shape == (2, 2)


@given(st.lists(st.lists(coef, min_size=4, max_size=4), min_size=1, max_size=3))
def test_kernel_from_product_matches_the_product(rows):
    m = n = 2
    factors = [GrassmannElement.linear(r, constant=1) for r in rows]
    bk = kernel_from_product(factors, m, n)
    assert bk.kernel() == affine_product(factors)
    assert berezin_operator(bk) == kernel_to_operator(affine_product(factors), n, m)


def test_non_berezin_element():
    g = [GrassmannElement.generator(4, i) for i in range(4)]
    # 1 + xi0 xi1 xi2 xi3 + xi0 xi1 is not a Gaussian times linear factors
    x = GrassmannElement.one(4) + g[0] * g[1] * g[2] * g[3] + g[0] * g[1] + g[2] * g[3] * 3
    assert not is_generalized_berezin(x)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_fundamental_rep_restricts_to_exterior_powers(A):
    op = fundamental_GA(LinearRelation.graph(A))
    c = op.entry(0, 0)
    for k in range(4):
        idx = graded_indices(3, k)
        assert op.restrict(idx, idx) == exterior_power_matrix(A, k).scale(c), k


def test_size_cap(monkeypatch):
    monkeypatch.setenv("CK_ALGEBRA_MAX_DIM", "4")
    V = standard_object("GD", 3)
    with pytest.raises(TooLarge):
        clifford_action(V, {0: ONE})
    monkeypatch.setenv("CK_ALGEBRA_MAX_DIM", "nope")
    with pytest.raises(ValueError):
        clifford_action(V, {0: ONE})


@pytest.mark.parametrize("k,beta,alpha,kind", [(2, 3, 2, "maximal"), (1, 2, 1, "maximal"), (3, 3, 2, "zero")])
def test_lowering_exterior_powers(k, beta, alpha, kind):
    # Lambda^k at rank alpha is the top power when k = alpha + 1, and theta kills it
    rep = exterior_power_rep(self_rep_A(), k)
    low = lowering_functor(rep, beta, alpha)
    assert low.dim == min(rep.dim(alpha), rep.dim(beta))
    assert extension_type(low) == kind


def test_top_power_lowers_to_zero():
    rep = exterior_power_rep(self_rep_A(), 4)
    low = lowering_functor(rep, 3, 2)
    assert low.dim == 0
    assert extension_type(low) == "empty"


def test_subordinate_is_a_semigroup_rep():
    rep = subordinate(exterior_power_rep(self_rep_A(), 2), 2)
    gens = end_generators_A(2)
    for P in gens:
        for Q in gens[:3]:
            assert rep.act(compose("A", Q, P)) == rep.act(Q) @ rep.act(P)
