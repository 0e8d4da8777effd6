"""Pimenov algebra: checked against commuting nilpotent matrices on (C^2)^(x n)."""

import itertools

import pytest
from hypothesis import given

from ck_algebra.exact_scalars import I, ONE
from ck_algebra.pimenov import JValuation, JValue, PimenovElement, parse_pimenov

from strategies import embed, pimenov_elements

ARITY = 3
DIM = 1 << ARITY


def realize(x: PimenovElement):
    # iota_k acts as the shift e_s -> e_{s | bit k} when bit k of s is clear
    mat = [[0j] * DIM for _ in range(DIM)]
    for mask, c in x.terms.items():
        for s in range(DIM):
            if not s & mask:
                mat[s | mask][s] += embed(c)
    return mat


def matmul(a, b):
    return [[sum(a[r][k] * b[k][c] for k in range(DIM)) for c in range(DIM)] for r in range(DIM)]


def close(a, b):
    return all(abs(a[r][c] - b[r][c]) < 1e-8 for r in range(DIM) for c in range(DIM))


@given(pimenov_elements(ARITY), pimenov_elements(ARITY))
def test_product_matches_the_matrix_realization(x, y):
    assert close(realize(x * y), matmul(realize(x), realize(y)))


@given(pimenov_elements(ARITY), pimenov_elements(ARITY), pimenov_elements(ARITY))
def test_commutative_associative(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_generators_square_to_zero_but_distinct_products_survive():
    a, b = PimenovElement.iota(1, ARITY), PimenovElement.iota(2, ARITY)
    assert (a * a).is_zero()
    prod = a * b
    assert prod.coefficient((1, 2)) == ONE
    assert prod.monomials() == [(1, 2)]


@given(pimenov_elements(ARITY, unit=True))
def test_units_invert(x):
    assert x * x.inv() == PimenovElement.one(ARITY)


def test_pure_nilpotent_is_not_invertible():
    with pytest.raises(ZeroDivisionError):
        PimenovElement.iota(1, ARITY).inv()


@given(pimenov_elements(ARITY))
def test_nilpotent_part_vanishes_at_power_arity_plus_one(x):
    nil = x - PimenovElement.const(x.unit_part(), ARITY)
    assert (nil ** (ARITY + 1)).is_zero()


@given(pimenov_elements(ARITY))
def test_parse_round_trip(x):
    assert parse_pimenov(str(x), ARITY) == x


def test_iota_outside_arity():
    with pytest.raises(ValueError):
        PimenovElement.iota(4, ARITY)


def test_conj_fixes_iota():
    x = PimenovElement({(): I, (2,): 1}, ARITY)
    assert x.conj() == PimenovElement({(): -I, (2,): 1}, ARITY)


def test_valuation_parsing_and_access():
    v = JValuation.parse("1, iota, i")
    assert v[1] is JValue.ONE and v[2] is JValue.IOTA and v[3] is JValue.IMAG
    assert v.iota_indices() == (2,)
    assert str(v) == "1,iota,i"
    assert JValuation.parse("ι") == JValuation((JValue.IOTA,))
    with pytest.raises(ValueError):
        JValuation.parse("2")
    with pytest.raises(IndexError):
        v[0]


def test_valuation_enumeration():
    vals = list(JValuation.all(3, (JValue.ONE, JValue.IOTA, JValue.IMAG)))
    assert len(vals) == 27
    assert len(set(vals)) == 27
    assert set(JValuation.all(2)) == {JValuation(p) for p in itertools.product((JValue.ONE, JValue.IOTA), repeat=2)}


def test_j_evaluation():
    v = JValuation.parse("i,iota,1")
    assert v.j(1) == PimenovElement.const(I, v.arity)
    assert v.j(3) == PimenovElement.one(v.arity)
    assert v.j(2) == PimenovElement.iota(2, v.arity)
