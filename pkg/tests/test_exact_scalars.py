"""Q(i, sqrt2) arithmetic, checked against a floating-point complex embedding."""

import pytest
from hypothesis import given

from ck_algebra.exact_scalars import I, ONE, SQRT2, ZERO, CyclotomicScalar, parse_scalar, scalar

from strategies import embed, float_close, scalars


def test_generators_satisfy_their_minimal_polynomials():
    assert I * I == -ONE
    assert SQRT2 * SQRT2 == scalar(2)
    assert (I * SQRT2) * (I * SQRT2) == scalar(-2)


@given(scalars(), scalars())
def test_mul_and_add_match_the_complex_embedding(x, y):
    assert float_close(embed(x * y), embed(x) * embed(y))
    assert float_close(embed(x + y), embed(x) + embed(y))


@given(scalars(), scalars(), scalars())
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(scalars(nonzero=True))
def test_inverse(x):
    assert x * x.inv() == ONE


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        ZERO.inv()


@given(scalars(), scalars())
def test_conj_is_a_field_automorphism(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x
    assert embed(x.conj()) == pytest.approx(embed(x).conjugate())


@given(scalars())
def test_str_round_trips_through_the_parser(x):
    assert parse_scalar(str(x)) == x


@pytest.mark.parametrize("text,expected", [
    ("0", ZERO),
    ("-i", -I),
    ("1/2*s2 + 3", CyclotomicScalar(3, 0, "1/2", 0)),
    ("2*i*s2 - 1", CyclotomicScalar(-1, 0, 0, 2)),
    ("s2*i", CyclotomicScalar(0, 0, 0, 1)),
])
def test_parse_examples(text, expected):
    assert parse_scalar(text) == expected


@pytest.mark.parametrize("bad", ["", "1++i", "x", "2*j", "1/0*i"])
def test_parse_rejects_garbage(bad):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_scalar(bad)


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.a = 3
