import math

import numpy as np
import pytest

from fuplab import (
    BudgetError,
    InputError,
    SchottkyData,
    enumerate_words,
    estimate_dimension,
    mobius_apply,
    refine,
    three_funnel_schottky,
    validate_schottky,
    word_count,
)


def _dummy_data(r):
    """Shape-valid Schottky data (word combinatorics only)."""
    iv = np.array([[2.0 * i, 2.0 * i + 1.0] for i in range(2 * r)])
    gens = np.broadcast_to(np.eye(2), (2 * r, 2, 2)).copy()
    return SchottkyData(r=r, intervals=iv, generators=gens)


# ---------------------------------------------------------------------------
# Mobius maps
# ---------------------------------------------------------------------------

def test_mobius_identity():
    for x in (-3.0, 0.0, 7.5, math.inf):
        assert mobius_apply(np.eye(2), x) == x


def test_mobius_fig_values(sch1):
    g1 = sch1.generators[0]
    assert mobius_apply(g1, 0.0) == pytest.approx(-3.0)
    assert mobius_apply(g1, 1.0) == pytest.approx(-4.0)
    assert mobius_apply(g1, math.inf) == pytest.approx(-3.5)


def test_mobius_pole_and_infinity():
    g = np.array([[2.0, 1.0], [1.0, 1.0]])  # det 1, pole at x = -1
    assert mobius_apply(g, -1.0) == math.inf
    assert mobius_apply(g, math.inf) == pytest.approx(2.0)
    upper = np.array([[2.0, 1.0], [0.0, 0.5]])
    assert mobius_apply(upper, math.inf) == math.inf


def test_mobius_inverse_composition(rng, sch1):
    g1 = sch1.generators[0]
    g1i = sch1.generators[2]
    for x in rng.uniform(-10, 10, 100):
        assert mobius_apply(g1i, mobius_apply(g1, x)) == pytest.approx(x, abs=1e-12)


def test_mobius_rejects_bad_determinant():
    with pytest.raises(InputError):
        mobius_apply(np.array([[2.0, 0.0], [0.0, 2.0]]), 1.0)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validate_fig_sch1(sch1):
    report = validate_schottky(sch1)
    assert report["ok"], report["violations"]


def test_validate_overlapping_intervals(sch1):
    iv = sch1.intervals.copy()
    iv[1] = [-3.5, -1.0]
    bad = SchottkyData(r=2, intervals=iv, generators=sch1.generators)
    report = validate_schottky(bad)
    assert not report["ok"]
    assert any("disjoint" in v for v in report["violations"])


def test_validate_bad_determinant(sch1):
    gens = sch1.generators.copy()
    gens[1, 1, :] *= -1.0  # negated second row: determinant -1
    bad = SchottkyData(r=2, intervals=sch1.intervals, generators=gens)
    report = validate_schottky(bad)
    assert not report["ok"]
    assert any("determinant" in v for v in report["violations"])


def test_validate_broken_pairing(sch1):
    gens = sch1.generators.copy()
    gens[3] = gens[2]
    bad = SchottkyData(r=2, intervals=sch1.intervals, generators=gens)
    report = validate_schottky(bad)
    assert not report["ok"]


def test_json_roundtrip(sch1):
    back = SchottkyData.from_json(sch1.to_json())
    assert back.r == sch1.r
    assert np.array_equal(back.intervals, sch1.intervals)
    assert np.array_equal(back.generators, sch1.generators)


# ---------------------------------------------------------------------------
# words
# ---------------------------------------------------------------------------

def test_word_counts(sch1):
    assert len(enumerate_words(sch1, 1)) == 4
    assert len(enumerate_words(sch1, 3)) == 36
    assert word_count(3, 4) == 6 * 5 ** 3
    assert len(enumerate_words(_dummy_data(3), 4)) == 750


def test_word_count_formula_deep(sch1):
    for n in range(1, 11):
        assert word_count(2, n) == 4 * 3 ** (n - 1)
    assert len(enumerate_words(sch1, 8)) == word_count(2, 8)


def test_words_reduced_and_sorted(sch1):
    words = enumerate_words(sch1, 4)
    bar = (words[:, :-1].astype(int) + 2) % 4
    assert np.all(words[:, 1:].astype(int) != bar)
    keys = [tuple(w) for w in words.tolist()]
    assert keys == sorted(keys)


def test_word_budget(sch1):
    with pytest.raises(BudgetError):
        enumerate_words(sch1, 20)


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------

def test_refine_depth_one_is_base(sch1):
    tree = refine(sch1, 1)
    assert np.allclose(tree.intervals, sch1.intervals)


def test_refine_depth3_nested_disjoint(sch1):
    tree2 = refine(sch1, 2)
    tree3 = refine(sch1, 3)
    assert len(tree3.lengths) == 36
    # disjoint
    order = np.argsort(tree3.intervals[:, 0])
    s = tree3.intervals[order]
    assert np.all(s[1:, 0] > s[:-1, 1])
    # nested in the depth-2 parent, found by word prefix
    parents = {tuple(w): iv for w, iv in zip(map(tuple, tree2.words.tolist()), tree2.intervals)}
    for w, iv in zip(map(tuple, tree3.words.tolist()), tree3.intervals):
        par = parents[w[:2]]
        assert iv[0] >= par[0] - 1e-12 and iv[1] <= par[1] + 1e-12


def test_refine_total_length_decreasing(sch1):
    totals = [refine(sch1, n).lengths.sum() for n in range(1, 9)]
    assert all(a > b for a, b in zip(totals, totals[1:]))


def test_refine_lengths_match_endpoints(sch1):
    tree = refine(sch1, 5)
    direct = tree.intervals[:, 1] - tree.intervals[:, 0]
    assert np.allclose(tree.lengths, direct, rtol=1e-9)


# ---------------------------------------------------------------------------
# dimension
# ---------------------------------------------------------------------------

def test_dimension_fig_sch1(sch1):
    result = estimate_dimension(sch1)
    assert result["converged"]
    assert result["delta"] == pytest.approx(0.31038, abs=2e-3)


def test_dimension_conjugation_invariance(sch1):
    # conjugate everything by x -> 2x + 1
    t = np.array([[math.sqrt(2.0), 1.0 / math.sqrt(2.0)], [0.0, 1.0 / math.sqrt(2.0)]])
    t_inv = np.array([[1.0 / math.sqrt(2.0), -1.0 / math.sqrt(2.0)], [0.0, math.sqrt(2.0)]])
    gens = np.stack([t @ g @ t_inv for g in sch1.generators])
    ivals = 2.0 * sch1.intervals + 1.0
    conj = SchottkyData(r=2, intervals=ivals, generators=gens)
    assert validate_schottky(conj)["ok"]
    d0 = estimate_dimension(sch1)["delta"]
    d1 = estimate_dimension(conj)["delta"]
    assert d1 == pytest.approx(d0, abs=1e-6)


def test_dimension_diagnostics_shrink(sch1):
    result = estimate_dimension(sch1, tol=1e-9, n_max=9)
    deltas = [lv["delta_n"] for lv in result["levels"]]
    diffs = [abs(a - b) for a, b in zip(deltas, deltas[1:])]
    assert all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))


def test_dimension_rejects_invalid_data(sch1):
    bad = SchottkyData(
        r=2, intervals=sch1.intervals, generators=np.broadcast_to(np.eye(2), (4, 2, 2)).copy()
    )
    with pytest.raises(InputError):
        estimate_dimension(bad)


# ---------------------------------------------------------------------------
# three-funnel construction
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def funnel233():
    return three_funnel_schottky(2.0, 3.0, 3.0)


def test_three_funnel_traces(funnel233):
    g1, g2 = funnel233.generators[0], funnel233.generators[1]
    g2_inv = funnel233.generators[3]
    assert abs(np.trace(g1)) == pytest.approx(2.0 * math.cosh(1.0), abs=1e-10)
    assert abs(np.trace(g2)) == pytest.approx(2.0 * math.cosh(1.5), abs=1e-10)
    assert abs(np.trace(g1 @ g2_inv)) == pytest.approx(2.0 * math.cosh(1.5), abs=1e-9)


def test_three_funnel_validates(funnel233):
    report = validate_schottky(funnel233)
    assert report["ok"], report["violations"]


def test_three_funnel_dimension(funnel233):
    result = estimate_dimension(funnel233)
    assert result["delta"] == pytest.approx(0.46932, abs=2e-3)


def test_three_funnel_rejects_nonpositive():
    with pytest.raises(InputError):
        three_funnel_schottky(0.0, 3.0, 3.0)
