import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzydea.dea_core import Dataset, DmuRecord, build_crisp_sbm, peak_dataset, solve_sbm
from fuzzydea.errors import AnalysisError, DomainError
from fuzzydea.fuzzy import TriangularFuzzyNumber as TFN
from fuzzydea.fuzzy_dea import (
    Approach,
    ApproachConfig,
    ConstraintForm,
    EfficiencyResult,
    alphacut_interval,
    alphacut_solutions,
    bound_dataset,
    build_cut_sbm,
    credibility_efficiency,
    crisp_peak_solution,
    evaluate,
    possibility_efficiency,
    rank,
)
from fuzzydea.lp import Relation

GRID = (0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def lp_rows(lp):
    return [(tuple(c.coeffs), c.relation, c.rhs) for c in lp.constraints]


@pytest.mark.parametrize("group", ["large", "small"])
def test_peak_cut_matches_crisp_builder(oil, group):
    ds = oil[group]
    peak = peak_dataset(ds)
    for z in range(ds.r_dmus):
        cut = build_cut_sbm(ds, z, 1.0)
        crisp = build_crisp_sbm(peak, z)
        np.testing.assert_array_equal(cut.objective, crisp.objective)
        # each crisp equality appears as an identical <= / >= pair
        rows = lp_rows(cut)
        assert rows[0] == lp_rows(crisp)[0]
        paired = rows[1:]
        for k, (coeffs, relation, rhs) in enumerate(lp_rows(crisp)[1:]):
            assert relation is Relation.EQ
            assert paired[2 * k] == (coeffs, Relation.LE, rhs)
            assert paired[2 * k + 1] == (coeffs, Relation.GE, rhs)


def test_crisp_dataset_pairs_coincide():
    ds = Dataset(
        (
            DmuRecord("a", "g", (2.0, 3.0), (1.0,)),
            DmuRecord("b", "g", (4.0, 1.0), (2.0,)),
        )
    )
    lp = build_cut_sbm(ds, 0, 0.3)
    rows = lp_rows(lp)[1:]
    for le, ge in zip(rows[::2], rows[1::2]):
        assert le[0] == ge[0] and le[1] is Relation.LE and ge[1] is Relation.GE


def test_cut_builder_layout(small):
    lp = build_cut_sbm(small, 0, 0.4)
    r, m, n = small.r_dmus, small.m, small.n
    assert lp.num_vars == 1 + r + m + n
    assert len(lp.constraints) == 1 + 2 * (m + n)


def test_cut_builder_errors(small):
    with pytest.raises(DomainError):
        build_cut_sbm(small, 0, 1.5)
    with pytest.raises(DomainError):
        build_cut_sbm(small, 9, 0.5)


def test_collapse_identity(oil):
    for ds in oil.values():
        for z in range(ds.r_dmus):
            peak = crisp_peak_solution(ds, z).efficiency
            assert credibility_efficiency(ds, z, 0.5) == pytest.approx(peak, abs=1e-7)
            assert possibility_efficiency(ds, z, 1.0) == pytest.approx(peak, abs=1e-7)
            lo, hi = alphacut_interval(ds, z, 1.0)
            assert lo == pytest.approx(peak, abs=1e-7)
            assert hi == pytest.approx(peak, abs=1e-7)


@pytest.mark.parametrize("alpha", np.linspace(0, 1, 11))
def test_beta_mapping(oil, alpha):
    for ds in oil.values():
        for z in range(ds.r_dmus):
            assert possibility_efficiency(ds, z, alpha) == pytest.approx(
                credibility_efficiency(ds, z, 1 - alpha / 2), abs=1e-9
            )


@pytest.mark.parametrize("group", ["large", "small"])
def test_interval_nesting(oil, group):
    ds = oil[group]
    for z in range(ds.r_dmus):
        previous = None
        for alpha in np.linspace(0, 1, 11):
            lo, hi = alphacut_interval(ds, z, alpha)
            assert lo <= hi + 1e-9
            if previous is not None:
                assert lo >= previous[0] - 1e-8
                assert hi <= previous[1] + 1e-8
            previous = (lo, hi)


def test_bound_dataset_assignment(small):
    z = small.index("CPCL")
    opt = bound_dataset(small, z, 0.5, optimistic=True)
    pes = bound_dataset(small, z, 0.5, optimistic=False)
    # CPCL's NCI (6,7,8) at cut 0.5 is [6.5, 7.5]
    assert opt.records[z].outputs[0] == 7.5
    assert pes.records[z].outputs[0] == 6.5
    nrl = small.index("NRL")
    assert opt.records[nrl].outputs[0] == 7.5  # (7,8,9) at its lower cut bound
    assert pes.records[nrl].outputs[0] == 8.5
    assert opt.is_crisp and pes.is_crisp


def test_alphacut_details_are_pessimistic_first(small):
    z = small.index("CPCL")
    low, high = alphacut_solutions(small, z, 0.5)
    assert low.efficiency <= high.efficiency


def test_chance_form_is_infeasible_for_fuzzy_units(oil):
    # the own-term swap asks a fuzzy quantity of positive width to sit on both
    # ends of its cut interval at once
    ds = oil["large"]
    z = ds.index("BPCL")
    with pytest.raises(AnalysisError, match="infeasible"):
        credibility_efficiency(ds, z, 0.6, form=ConstraintForm.CHANCE)
    # at the peak (credibility 0.5) the two forms agree
    assert credibility_efficiency(ds, z, 0.5, form=ConstraintForm.CHANCE) == pytest.approx(
        credibility_efficiency(ds, z, 0.5), abs=1e-9
    )


# --- crisp degeneration and stability --------------------------------------

positive = st.floats(0.5, 20.0)


@st.composite
def fuzzy_datasets(draw, fuzzy=True, crisp_inputs=False):
    r = draw(st.integers(2, 4))
    m = draw(st.integers(1, 2))
    n = draw(st.integers(1, 2))

    def value(crisp=False):
        s = draw(positive)
        if crisp or not fuzzy:
            return s
        left = draw(st.floats(0, 0.4)) * s
        right = draw(st.floats(0, 0.4)) * s
        return TFN(s - left, s, s + right)

    records = [
        DmuRecord(
            f"d{k}",
            "g",
            tuple(value(crisp_inputs) for _ in range(m)),
            tuple(value() for _ in range(n)),
        )
        for k in range(r)
    ]
    return Dataset(tuple(records))


@settings(max_examples=30, deadline=None)
@given(fuzzy_datasets(fuzzy=False), st.floats(0, 1))
def test_crisp_degeneration(ds, alpha):
    for z in range(ds.r_dmus):
        base = solve_sbm(ds, z).efficiency
        assert possibility_efficiency(ds, z, alpha) == pytest.approx(base, abs=1e-9)
        assert credibility_efficiency(ds, z, 0.5 + alpha / 2) == pytest.approx(base, abs=1e-9)
        lo, hi = alphacut_interval(ds, z, alpha)
        assert lo == pytest.approx(base, abs=1e-9)
        assert hi == pytest.approx(base, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(fuzzy_datasets())
def test_efficient_unit_stays_efficient(ds):
    for z in range(ds.r_dmus):
        peak = crisp_peak_solution(ds, z)
        if peak.efficiency < 1 - 1e-9:
            continue
        for alpha in (0.0, 0.3, 0.7):
            assert alphacut_interval(ds, z, alpha)[1] == pytest.approx(1.0, abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(fuzzy_datasets(), st.floats(0, 1), st.floats(0, 1))
def test_nesting_on_random_data(ds, a1, a2):
    a1, a2 = sorted((a1, a2))
    for z in range(ds.r_dmus):
        lo1, hi1 = alphacut_interval(ds, z, a1)
        lo2, hi2 = alphacut_interval(ds, z, a2)
        assert lo1 <= lo2 + 1e-8 and hi2 <= hi1 + 1e-8


@settings(max_examples=30, deadline=None)
@given(fuzzy_datasets(crisp_inputs=True), st.floats(0, 1))
def test_scores_in_range(ds, beta):
    for z in range(ds.r_dmus):
        f = possibility_efficiency(ds, z, beta)
        assert 0 < f <= 1 + 1e-9


def test_wide_fuzzy_input_can_push_score_below_zero(caplog):
    # slack is divided by the own lower bound but may reach t times the own
    # upper bound, so a wide input spread leaves the (0, 1] range
    ds = Dataset(
        (
            DmuRecord("wide", "g", (TFN(3.75, 5.0, 5.0),), (1.0,)),
            DmuRecord("peer", "g", (1.0,), (1.0,)),
        )
    )
    with caplog.at_level("WARNING", logger="fuzzydea"):
        f = possibility_efficiency(ds, 0, 0.0)
    assert f == pytest.approx(1 - 4 / 3.75, abs=1e-9)
    assert "outside (0, 1]" in caplog.text


# --- configuration and ranking ---------------------------------------------


def test_config_validation():
    assert ApproachConfig("credibility", [0.5, 1]).alphas == (0.5, 1.0)
    with pytest.raises(DomainError, match="empty"):
        ApproachConfig(Approach.POSSIBILITY, [])
    with pytest.raises(DomainError, match="increasing"):
        ApproachConfig(Approach.ALPHACUT, [0.5, 0.5])
    with pytest.raises(DomainError, match=r"\[0.5, 1\]"):
        ApproachConfig(Approach.CREDIBILITY, [0.4, 0.6])
    with pytest.raises(DomainError):
        ApproachConfig(Approach.POSSIBILITY, [1.2])
    with pytest.raises(ValueError):
        ApproachConfig("fuzzyranking", [0.5])


def test_credibility_level_range(small):
    with pytest.raises(DomainError):
        credibility_efficiency(small, 0, 0.4)


def result(name, scores, approach=Approach.CREDIBILITY, alphas=None):
    alphas = alphas or tuple(GRID[: len(scores)])
    return EfficiencyResult(name, "g", approach, alphas, tuple(scores))


def test_rank_printed_example():
    table = {
        "BPCL": (0.8571, 0.8484, 0.8387, 0.8275, 0.8148, 0.8),
        "ONGC+MRPL": (1,) * 6,
        "HPCL": (1,) * 6,
        "IOCL": (0.7595, 1, 1, 1, 1, 1),
        "RIL": (0.6655, 0.6937, 0.701, 0.7014, 0.7025, 0.7029),
    }
    ranked = rank([result(k, v) for k, v in table.items()])
    assert {r.dmu: r.rank for r in ranked} == {
        "BPCL": 3,
        "ONGC+MRPL": 1,
        "HPCL": 1,
        "IOCL": 2,
        "RIL": 4,
    }


def test_rank_total_tie():
    ranked = rank([result(k, (0.7, 0.8)) for k in "abc"])
    assert [r.rank for r in ranked] == [1, 1, 1]


def test_rank_is_dense_after_ties():
    ranked = rank([result("a", (1, 1)), result("b", (1, 1)), result("c", (0.5, 0.6))])
    assert [r.rank for r in ranked] == [1, 1, 2]


def test_rank_intervals_use_midpoints_and_upper_ends():
    ac = Approach.ALPHACUT
    ranked = rank(
        [
            result("a", ((0.4, 1.0),), ac),
            result("b", ((0.9, 0.95),), ac),
            result("c", ((0.5, 0.7),), ac),
        ]
    )
    assert [r.rank for r in ranked] == [1, 2, 3]


def test_rank_rejects_mixed_inputs():
    with pytest.raises(DomainError, match="approaches"):
        rank([result("a", (1,)), result("b", (1,), Approach.POSSIBILITY)])
    with pytest.raises(DomainError, match="grids"):
        rank([result("a", (1,)), result("b", (1, 1))])
    assert rank([]) == []


def test_evaluate_keeps_order_and_details(small):
    results = evaluate(small, ApproachConfig(Approach.ALPHACUT, (0.5, 1.0)))
    assert [r.dmu for r in results] == small.names
    for res in results:
        assert len(res.details) == 2 and len(res.details[0]) == 2
        for lo, hi in res.scores:
            assert 0 < lo <= hi + 1e-12 <= 1 + 1e-9
        assert res.rank >= 1


def test_evaluate_crisp_repeats_peak_score(small):
    results = evaluate(small, ApproachConfig(Approach.CRISP, (1.0,)))
    for z, res in enumerate(results):
        assert res.scores[0] == pytest.approx(crisp_peak_solution(small, z).efficiency)


def test_efficient_units_have_zero_slacks(oil):
    for ds in oil.values():
        for res in evaluate(ds, ApproachConfig(Approach.CREDIBILITY, GRID)):
            for score, sol in zip(res.scores, res.details):
                if score >= 1 - 1e-9:
                    np.testing.assert_allclose(sol.input_slacks, 0, atol=1e-6)
                    np.testing.assert_allclose(sol.output_slacks, 0, atol=1e-6)
