import pytest
from hypothesis import given
from hypothesis import strategies as st

from ck_algebra.contraction import (
    ContractionSpec, InadmissibleSpec, admissible_indices, all_specs, gamma_table,
    predicted_decomposition, radical_block_structure, verify_decomposition,
)
from ck_algebra.pimenov import JValue
from ck_algebra.rootsys import algebra_dim

GRID = [("so", 3), ("so", 4), ("u", 2), ("su", 2), ("sp", 2), ("sp", 3)]
SPECS = [s for kind, n in GRID for s in all_specs(kind, n, (JValue.ONE, JValue.IMAG))]


def test_admissible_indices():
    assert admissible_indices("so", 4) == (2, 4)
    assert admissible_indices("so", 5) == (2, 4)
    assert admissible_indices("sp", 3) == (2, 3)
    assert admissible_indices("u", 3) == (1, 2, 3)


@pytest.mark.parametrize("kind,n,iota", [("so", 4, (3,)), ("so", 4, (1,)), ("sp", 3, (1,)), ("u", 2, (3,))])
def test_inadmissible_specs_raise(kind, n, iota):
    with pytest.raises(InadmissibleSpec):
        ContractionSpec.make(kind, n, iota)


def test_residual_cannot_be_iota():
    from ck_algebra.pimenov import JValuation
    with pytest.raises(InadmissibleSpec):
        ContractionSpec.make("u", 2, (1,), JValuation.parse("1,iota"))


@given(st.sampled_from(SPECS))
def test_radical_and_blocks_partition_the_basis(spec):
    lm = predicted_decomposition(spec.kind, spec.n, spec)
    labels = lm.radical + lm.semisimple_labels
    assert len(labels) == len(set(labels)) == algebra_dim(spec.kind, spec.n)
    for b in lm.blocks:
        assert b.dim == b.expected_dim()


@given(st.sampled_from(SPECS))
def test_every_structural_check_passes(spec):
    lm = predicted_decomposition(spec.kind, spec.n, spec)
    rep = verify_decomposition(spec.kind, spec.n, spec, lm)
    assert rep.passed, [c.to_json() for c in rep.checks if c.passed is False]


@pytest.mark.parametrize("kind,n", GRID)
def test_gamma_zero_cells_are_the_radical(kind, n):
    for spec in all_specs(kind, n):
        g = gamma_table(kind, n, spec.valuation)
        lm = predicted_decomposition(kind, n, spec)
        assert set(g.zero_labels()) == set(lm.radical), str(spec)


def test_so5_single_contraction():
    spec = ContractionSpec.make("so", 4, (2,))
    lm = predicted_decomposition("so", 4, spec)
    assert lm.formula() == "T6 ∔ (H1 ⊕ so(3;j3,j4))"
    assert {str(x) for x in lm.radical} == {"e1", "-e1", "e1+e2", "e1-e2", "-e1+e2", "-e1-e2"}
    rep = verify_decomposition("so", 4, spec, lm)
    assert rep.radical_abelian is True
    assert [c.name for c in rep.checks] == [
        "closure", "i_TT_in_T", "ii_MT_in_T", "iii_MM_in_M", "iv_complement",
        "v_T_nilpotent", "vi_M_reductive", "vii_blocks"]


def test_uncontracted_has_no_radical():
    spec = ContractionSpec.make("su", 2, ())
    lm = predicted_decomposition("su", 2, spec)
    assert lm.radical == []
    assert lm.formula() == "su(3;j1,j2)"


def test_ordered_radical_depends_on_order():
    a = radical_block_structure("so", 4, (2, 4))
    b = radical_block_structure("so", 4, (4, 2))
    assert sum(len(x.labels) for x in a.blocks) == sum(len(x.labels) for x in b.blocks) == 8
    assert a.relation != b.relation
