"""Hypothesis strategies and float oracles shared by the tests."""

import math

from hypothesis import strategies as st

from ck_algebra.exact_scalars import CyclotomicScalar
from ck_algebra.pimenov import PimenovElement

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def scalars(draw, nonzero=False):
    x = CyclotomicScalar(draw(small_q), draw(small_q), draw(small_q), draw(small_q))
    if nonzero and not x:
        x = CyclotomicScalar(1)
    return x


@st.composite
def pimenov_elements(draw, arity=3, unit=False):
    terms = {}
    for mask in range(1 << arity):
        if draw(st.booleans()):
            terms[mask] = draw(scalars())
    if unit and not terms.get(0):
        terms[0] = draw(scalars(nonzero=True))
    return PimenovElement(terms, arity)


def embed(x: CyclotomicScalar) -> complex:
    """Floating-point image of x under i -> 1j, sqrt2 -> 1.414..."""
    r2 = math.sqrt(2)
    return complex(float(x.a) + float(x.c) * r2, float(x.b) + float(x.d) * r2)


def float_close(a: complex, b: complex, tol: float = 1e-9) -> bool:
    return abs(a - b) <= tol * (1 + abs(a) + abs(b))
