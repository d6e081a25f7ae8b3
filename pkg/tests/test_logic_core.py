from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pbitq.models.enums import CrispOp, ImplVariant
from pbitq.models.values import ALL_PBITS, BOTH, FALSE, NEITHER, TRUE, Evidence, PBit, TruthPair
from pbitq.schemas.families import TNormFamily
from pbitq.services import logic_core
from pbitq.services.logic_core import NonCrispValue

PAIRS = list(itertools.product(ALL_PBITS, ALL_PBITS))

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
truth_pairs = st.builds(TruthPair, unit, unit)
families = st.sampled_from(
    [
        TNormFamily.min_max(),
        TNormFamily.product(),
        TNormFamily.schweizer_sklar(-1.0),
        TNormFamily.schweizer_sklar(-8.0),
        TNormFamily.schweizer_sklar(0.5),
    ]
)


def _assert_pair_close(a: TruthPair, b: TruthPair, tol: float) -> None:
    assert abs(a.w_plus - b.w_plus) <= tol
    assert abs(a.w_minus - b.w_minus) <= tol


@pytest.mark.parametrize(("a", "b"), PAIRS)
def test_crisp_operations_follow_coordinate_rules(a: PBit, b: PBit) -> None:
    assert logic_core.cd_meet(a, b) == PBit(int(a.t and b.t), int(a.f or b.f))
    assert logic_core.cd_join(a, b) == PBit(int(a.t or b.t), int(a.f and b.f))
    assert logic_core.cd_impl(a, b, ImplVariant.printed) == PBit(
        int((not a.t) or b.t), int(a.f and b.f)
    )
    assert logic_core.cd_impl(a, b, ImplVariant.standard) == PBit(
        int((not a.t) or b.t), int(a.t and b.f)
    )


def test_negation_swaps_coordinates() -> None:
    assert [logic_core.cd_neg(a) for a in ALL_PBITS] == [FALSE, TRUE, BOTH, NEITHER]


def test_crisp_examples() -> None:
    assert logic_core.cd_meet(TRUE, BOTH) == BOTH
    assert logic_core.cd_neg(logic_core.cd_join(BOTH, NEITHER)) == FALSE
    assert logic_core.cd_impl(BOTH, FALSE) == FALSE


def test_crisp_operations_reject_fuzzy_input() -> None:
    with pytest.raises(NonCrispValue):
        logic_core.cd_meet(TRUE, TruthPair(0.5, 0.5))  # type: ignore[arg-type]


def test_truth_table_sizes() -> None:
    assert len(logic_core.truth_table(CrispOp.meet)) == 16
    assert len(logic_core.truth_table(CrispOp.impl, ImplVariant.standard)) == 16
    neg = logic_core.truth_table(CrispOp.neg)
    assert [(a.symbol, b, r.symbol) for a, b, r in neg] == [
        ("T", None, "F"),
        ("F", None, "T"),
        ("B", None, "B"),
        ("N", None, "N"),
    ]


def test_aggregate_counts_both_on_each_side() -> None:
    assert logic_core.aggregate([TRUE, FALSE, BOTH]) == Evidence(2, 2, 3)
    assert logic_core.aggregate([NEITHER, NEITHER]) == Evidence(0, 0, 2)


def test_aggregate_rejects_empty_input() -> None:
    with pytest.raises(ValueError, match="at least one"):
        logic_core.aggregate([])


def test_normalize_divides_by_total() -> None:
    assert logic_core.normalize(Evidence(8, 1, 10)) == TruthPair(0.8, 0.1)


@pytest.mark.parametrize("a", ALL_PBITS)
def test_to_crisp_inverts_embedding(a: PBit) -> None:
    assert logic_core.to_crisp(logic_core.embed_crisp(a)) == a


def test_to_crisp_rejects_fractional_pairs() -> None:
    with pytest.raises(NonCrispValue):
        logic_core.to_crisp(TruthPair(0.5, 0.0))


@pytest.mark.parametrize(("a", "b"), PAIRS)
def test_embedding_is_a_homomorphism(
    a: PBit, b: PBit, lattice_families: list[TNormFamily]
) -> None:
    ea, eb = logic_core.embed_crisp(a), logic_core.embed_crisp(b)
    for fam in lattice_families:
        _assert_pair_close(
            logic_core.fuzzy_meet(ea, eb, fam),
            logic_core.embed_crisp(logic_core.cd_meet(a, b)),
            1e-12,
        )
        _assert_pair_close(
            logic_core.fuzzy_join(ea, eb, fam),
            logic_core.embed_crisp(logic_core.cd_join(a, b)),
            1e-12,
        )
        for variant in ImplVariant:
            _assert_pair_close(
                logic_core.fuzzy_impl(ea, eb, fam, variant),
                logic_core.embed_crisp(logic_core.cd_impl(a, b, variant)),
                1e-12,
            )


def test_fuzzy_neg_is_the_swap() -> None:
    assert logic_core.fuzzy_neg(TruthPair(0.3, 0.9)) == TruthPair(0.9, 0.3)


def test_coord_neg_differs_from_cd_negation_on_both() -> None:
    both = logic_core.embed_crisp(BOTH)
    assert logic_core.coord_neg(both) == TruthPair(0.0, 0.0)
    assert logic_core.fuzzy_neg(both) == both


@given(truth_pairs, truth_pairs, families)
def test_demorgan_swap_laws(a: TruthPair, b: TruthPair, fam: TNormFamily) -> None:
    neg = logic_core.fuzzy_neg
    _assert_pair_close(
        neg(logic_core.fuzzy_join(a, b, fam)),
        logic_core.fuzzy_meet(neg(a), neg(b), fam),
        1e-12,
    )
    _assert_pair_close(
        neg(logic_core.fuzzy_meet(a, b, fam)),
        logic_core.fuzzy_join(neg(a), neg(b), fam),
        1e-12,
    )


@given(truth_pairs, truth_pairs)
def test_min_max_meet_is_componentwise(a: TruthPair, b: TruthPair) -> None:
    met = logic_core.fuzzy_meet(a, b, TNormFamily.min_max())
    assert met == TruthPair(min(a.w_plus, b.w_plus), max(a.w_minus, b.w_minus))
