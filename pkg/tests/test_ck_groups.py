import pytest
from hypothesis import given
from hypothesis import strategies as st

from ck_algebra.ck_groups import (
    PMatrix, antidiagonal, check_j_orthogonality, check_symplectic, ck_quadratic_form,
    exp_nilpotent, family_form, form_compatible, general_element, invariant_subforms,
    lambda_index, so_generators, sp_chevalley_basis, sp_generators, symplectic_D_matrix,
    symplectic_form, u_generators,
)
from ck_algebra.exact_scalars import I
from ck_algebra.pimenov import JValuation, JValue, PimenovElement

from strategies import pimenov_elements, small_q

ALL3 = (JValue.ONE, JValue.IOTA, JValue.IMAG)


def valuations(n):
    return list(JValuation.all(n, ALL3))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_so_generators_preserve_the_weighted_form(n):
    for v in valuations(n):
        gens = so_generators(n, v)
        assert len(gens) == n * (n + 1) // 2
        F = family_form(gens.kind, n, v)
        for lab, G in gens.generators:
            assert form_compatible(G, F), (str(v), lab)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("special", [False, True])
def test_unitary_generators_are_antihermitian_for_the_form(n, special):
    for v in valuations(n):
        gens = u_generators(n, v, special=special)
        assert len(gens) == (n + 1) ** 2 - (1 if special else 0)
        F = family_form(gens.kind, n, v)
        for lab, G in gens.generators:
            assert form_compatible(G, F, hermitian=True), (str(v), lab)
            if special:
                assert G.trace().is_zero(), lab


@pytest.mark.parametrize("n", [1, 2, 3])
def test_symplectic_generators(n):
    C0 = symplectic_form(n)
    for v in valuations(n):
        gens = sp_generators(n, v)
        assert len(gens) == n * (2 * n + 1)
        for lab, G in gens.generators:
            assert form_compatible(G, C0), (str(v), lab)
        assert len(sp_chevalley_basis(n, v)) == 3 * n


def test_symplectic_form_shape():
    C0 = symplectic_form(2)
    assert C0.transpose() == C0.scale(-1)
    assert C0.matmul(C0) == PMatrix.identity(4, 2).scale(-1)


@given(st.lists(small_q, min_size=3, max_size=3), st.lists(small_q, min_size=3, max_size=3),
       st.lists(small_q, min_size=2, max_size=2), st.sampled_from(valuations(2)))
def test_general_element_lies_in_the_unitary_algebra(r, s, w, v):
    # real coordinates r, s, w
    Z = general_element(r, s, w, v)
    assert form_compatible(Z, family_form(u_generators(2, v).kind, 2, v), hermitian=True)
    assert Z.trace().is_zero()


def test_lambda_index_enumerates_pairs():
    n = 4
    got = [lambda_index(mu, nu, n) for mu in range(n + 1) for nu in range(mu + 1, n + 1)]
    assert got == list(range(1, n * (n + 1) // 2 + 1))


def test_exp_of_a_contracted_generator_is_a_group_element():
    v = JValuation.parse("iota,1")
    X = so_generators(2, v)["X0,1"]
    g = exp_nilpotent(X)
    F = family_form(so_generators(2, v).kind, 2, v)
    assert g.transpose().matmul(F).matmul(g) == F
    assert g.matmul(exp_nilpotent(X.scale(-1))) == PMatrix.identity(3, 2)


def test_exp_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        exp_nilpotent(so_generators(1, JValuation.parse("1"))["X0,1"])


def test_orthogonality_check():
    P = PMatrix.from_rows([[0, 1, 0], [1, 0, 0], [0, 0, -1]], 2)
    assert check_j_orthogonality(P)
    assert not check_j_orthogonality(P.scale(2))
    assert not check_j_orthogonality(PMatrix.zeros(2, 3, 2))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_D_sigma_maps_orthogonal_to_symplectic_type(N):
    ar = N - 1
    sigma = list(range(N, 0, -1))
    D = symplectic_D_matrix(N, sigma, ar)
    C0 = antidiagonal(N, ar)
    Dinv = D.transpose().matmul(C0)
    assert D.matmul(Dinv) == PMatrix.identity(N, ar)
    # a signed permutation is orthogonal; its conjugate preserves C0
    A = PMatrix(N, N, ar, {(i, (i + 1) % N): (1 if i else -1) for i in range(N)})
    assert check_j_orthogonality(A)
    B = D.matmul(A).matmul(Dinv)
    assert B.transpose().matmul(C0).matmul(B) == C0


def test_D_sigma_rejects_bad_permutations():
    with pytest.raises(ValueError):
        symplectic_D_matrix(3, [1, 1, 2])


def test_check_symplectic_on_exponentials():
    v = JValuation.parse("1,iota")
    g = exp_nilpotent(sp_generators(2, v)["u1,1"])
    assert check_symplectic(g)


@given(st.lists(pimenov_elements(2), min_size=3, max_size=3), st.sampled_from(valuations(2)))
def test_quadratic_form_splits_into_fibre_forms(z, v):
    total = ck_quadratic_form(z, v)
    parts = invariant_subforms(z, v)
    ks = [0] + list(v.iota_indices())
    assert len(parts) == len(ks)
    acc = PimenovElement.zero(2)
    for k, part in zip(ks, parts):
        weight = PimenovElement.one(2)
        for m in range(1, k + 1):
            weight = weight * v.j(m) * v.j(m)
        acc = acc + part * weight
    assert acc == total


def test_json_round_trip():
    v = JValuation.parse("i,iota")
    for _, G in u_generators(2, v).generators:
        assert PMatrix.from_json(G.to_json()) == G
    assert u_generators(2, v)["D0"] == PMatrix(3, 3, 2, {(0, 0): I})
