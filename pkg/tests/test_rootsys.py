"""Closed-form Cartan-Weyl brackets against direct matrix commutators."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ck_algebra.pimenov import JValuation, JValue
from ck_algebra.rootsys import (
    KINDS, algebra_basis, algebra_dim, basis_labels, cartan_matrix, cartan_matrix_properties,
    dynkin_diagram, int_det, parse_label, predicted_terms, rank_of, root_system, verify_cartan_weyl,
)

ALL3 = (JValue.ONE, JValue.IOTA, JValue.IMAG)
SMALL = [("so", 2), ("so", 3), ("so", 4), ("u", 1), ("u", 2), ("su", 2), ("sl", 2), ("sp", 1), ("sp", 2)]


@pytest.mark.parametrize("kind,n", SMALL)
def test_basis_size_and_rank(kind, n):
    labels = basis_labels(kind, n)
    assert len(labels) == algebra_dim(kind, n)
    assert len(labels) == len(set(labels))
    assert len(root_system(kind, n)) == algebra_dim(kind, n) - rank_of(kind, n)


@pytest.mark.parametrize("kind,n", SMALL)
@given(data=st.data())
def test_closed_forms_match_commutators(kind, n, data):
    v = JValuation(tuple(data.draw(st.sampled_from(ALL3)) for _ in range(n)))
    rep = verify_cartan_weyl(kind, n, v)
    assert rep.passed, rep.mismatches[:1]
    d = algebra_dim(kind, n)
    assert rep.pairs_checked == d * (d - 1) // 2


def test_basis_is_linearly_independent_under_full_contraction():
    # iota everywhere still gives a basis of the right size
    v = JValuation((JValue.IOTA,) * 3)
    assert len(algebra_basis("so", 3, v)) == 6


def test_corrupted_table_is_reported():
    def bad(kind, x, y, n):
        terms = predicted_terms(kind, x, y, n)
        if terms:
            c, mono, lab = terms[0]
            return [(-c, mono, lab)] + list(terms[1:])
        return terms

    rep = verify_cartan_weyl("su", 2, JValuation.parse("1,1"), predictor=bad)
    assert not rep.passed
    m = rep.mismatches[0]
    assert m.computed != m.predicted
    assert set(m.to_json()) == {"x", "y", "formula", "computed", "predicted"}


def test_parse_label_round_trip():
    for kind, n in SMALL:
        for lab in basis_labels(kind, n):
            assert parse_label(kind, n, str(lab)) == lab


# classical facts: det of the Cartan matrix is n+1, 2, 2, 4 for A, B, C, D
@pytest.mark.parametrize("series,n,det", [
    ("A", 1, 2), ("A", 3, 4), ("A", 5, 6), ("B", 2, 2), ("B", 4, 2),
    ("C", 3, 2), ("C", 5, 2), ("D", 4, 4), ("D", 5, 4),
])
def test_cartan_determinants(series, n, det):
    A = cartan_matrix(series, n)
    assert int_det(A) == det
    assert all(cartan_matrix_properties(A).values())


def test_B_and_C_are_transposes():
    B, C = cartan_matrix("B", 4), cartan_matrix("C", 4)
    assert C == [list(r) for r in zip(*B)]


def test_dynkin_bonds():
    d = dynkin_diagram("C", 3)
    assert d.edges == [(1, 2, 1), (2, 3, 2)]
    assert d.weights == [1, 1, 2]
    assert "===" in d.ascii()
    d4 = dynkin_diagram("D", 4)
    assert sorted(e[:2] for e in d4.edges) == [(1, 2), (2, 3), (2, 4)]


def test_kinds():
    assert set(KINDS) == {"so", "u", "su", "sl", "sp"}
    with pytest.raises(ValueError):
        cartan_matrix("so", 3)
