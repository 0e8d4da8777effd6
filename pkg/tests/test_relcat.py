"""Linear relations: composition laws against a dimension-count oracle."""

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ck_algebra.exact_scalars import ONE
from ck_algebra.relcat import (
    NULL, Category, LinearRelation, NullMorphism, Parity, Subspace, adjoint_relation, compose,
    compose_chain, difference_form, dual_relation, end_embedding, grassmann_component,
    is_D_morphism, is_maximal_isotropic, is_morphism, lam, mu, random_endomorphism,
    random_lagrangian, random_relation, rel_domain, rel_image, rel_indef, rel_kernel,
    relation_from_json, relation_to_json, standard_object, theta,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def fibre_product(Q, P):
    """{(v, y) : (v, w) in P, (w, y) in Q} via an intersection in K^(a+b+c)."""
    a, b, c = P.source_dim, P.target_dim, Q.target_dim
    n = a + b + c
    free_c = [{a + b + k: ONE} for k in range(c)]
    free_a = [{k: ONE} for k in range(a)]
    Pbig = Subspace(n, [v for v in P.space.basis()] + free_c)
    Qbig = Subspace(n, [{a + k: x for k, x in v.items()} for v in Q.space.basis()] + free_a)
    meet = Pbig.intersect(Qbig)
    out = []
    for v in meet.basis():
        out.append({(k if k < a else k - b): x for k, x in v.items() if k < a or k >= a + b})
    return LinearRelation(a, c, Subspace(a + c, out))


@given(seeds)
def test_gd_composition_is_the_set_product(seed):
    rng = random.Random(seed)
    a, b, c = (rng.randint(1, 3) for _ in range(3))
    P = random_relation(rng, a, b, zero_prob=0.5)
    Q = random_relation(rng, b, c, zero_prob=0.5)
    QP = compose("GD", Q, P)
    if QP is NULL:
        assert rel_kernel(Q).intersect(rel_indef(P)).dim > 0
        return
    assert QP == fibre_product(Q, P)
    # the fibre over (0, 0) is trivial, so only the middle constraint costs dimension
    assert QP.dim == P.dim + Q.dim - (rel_image(P) + rel_domain(Q)).dim


@given(seeds)
def test_associativity_with_null(seed):
    rng = random.Random(seed)
    dims = [rng.randint(1, 3) for _ in range(4)]
    P, Q, R = (random_relation(rng, dims[k], dims[k + 1], zero_prob=0.6) for k in range(3))
    for cat in ("GA", "GD"):
        left = compose(cat, R, compose(cat, Q, P))
        right = compose(cat, compose(cat, R, Q), P)
        assert left == right, cat


@given(seeds)
def test_identity_is_a_unit(seed):
    rng = random.Random(seed)
    P = random_relation(rng, 2, 3)
    for cat in ("GA", "GD"):
        assert compose(cat, P, LinearRelation.identity(2)) == P
        assert compose(cat, LinearRelation.identity(3), P) == P


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2),
       st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2))
def test_graphs_of_maps_compose_as_matrices(A, B):
    BA = [[sum(B[i][k] * A[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    got = compose("GD", LinearRelation.graph(B), LinearRelation.graph(A))
    assert got == LinearRelation.graph(BA)


@given(seeds)
def test_dual_and_adjoint_are_involutions(seed):
    rng = random.Random(seed)
    P = random_relation(rng, 2, 3)
    assert dual_relation(dual_relation(P)) == P
    assert adjoint_relation(adjoint_relation(P)) == P
    assert dual_relation(NULL) is NULL


def test_kernel_indef_domain_image_of_a_projection():
    P = LinearRelation.graph([[1, 0, 0], [0, 1, 0]])
    assert rel_kernel(P).dim == 1
    assert rel_indef(P).dim == 0
    assert rel_domain(P).dim == 3
    assert rel_image(P).dim == 2
    with pytest.raises(NullMorphism):
        rel_kernel(NULL)


@pytest.mark.parametrize("cat", ["B", "C", "D", "GD"])
@given(seed=seeds)
def test_lagrangian_morphisms_compose_to_morphisms(cat, seed):
    rng = random.Random(seed)
    V = standard_object(cat, 2)
    P = random_endomorphism(rng, cat, 2)
    Q = random_endomorphism(rng, cat, 2)
    assert is_morphism(cat, P, V, V)
    QP = compose(cat, Q, P)
    assert is_morphism(cat, QP, V, V)
    if QP is not NULL:
        assert is_maximal_isotropic(QP.space, difference_form(V, V))


@given(seeds)
def test_D_components_add(seed):
    rng = random.Random(seed)
    V = standard_object("GD", 2)
    F = difference_form(V, V)
    H = [random_lagrangian(rng, V, V).space for _ in range(3)]
    p01, p12, p02 = (grassmann_component(H[i], H[j], F) for i, j in ((0, 1), (1, 2), (0, 2)))
    assert p01 + p12 is p02
    assert grassmann_component(H[0], H[0], F) is Parity.EVEN


def test_identity_is_a_D_morphism():
    V = standard_object("D", 2)
    assert is_D_morphism(LinearRelation.identity(V.dim), V, V)


@pytest.mark.parametrize("cat", ["A", "B", "C", "D"])
def test_ordered_structure(cat):
    assert compose(cat, mu(cat, 1, 0), lam(cat, 0, 1)) == LinearRelation.identity(standard_object(cat, 0).dim)
    t = theta(cat, 2, 1)
    assert compose(cat, t, t) == t
    # U is multiplicative on composable endomorphisms
    rng = random.Random(7)
    P = random_endomorphism(rng, cat, 1)
    Q = random_endomorphism(rng, cat, 1)
    lhs = end_embedding(cat, compose(cat, Q, P), 1, 2)
    rhs = compose(cat, end_embedding(cat, Q, 1, 2), end_embedding(cat, P, 1, 2))
    assert lhs == rhs


def test_json_round_trip():
    rng = random.Random(3)
    P = random_relation(rng, 2, 2)
    assert relation_from_json(relation_to_json(P)) == P
    assert relation_from_json("null") is NULL
    assert relation_to_json(NULL) == "null"


def test_chain_checks_dimensions():
    with pytest.raises(ValueError):
        compose_chain("GA", LinearRelation.identity(2), LinearRelation.identity(3))
    assert Category("GD").isotropic and not Category("GA").isotropic
