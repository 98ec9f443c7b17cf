from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from oracles import brute_match, occupancy
from partfn.enumerate import enumerate_regular
from partfn.graph import Graph, cl_dn, cycle, k_dd, make_named, prism
from partfn.observables import (DEFAULT_GRID, edge_occupancy_bound_check, free_volume, local_view_distribution,
                                mean_size, occupancy_fraction, partition_value, size_distribution,
                                tune_lambda, tune_lambda_bracket)
from partfn.polys import coeffs, h_dn_coeffs, ind_coeffs, match_coeffs, potts_coeffs
from partfn.views import certify_realizable, kdd_potts_views, kdd_views

K33 = k_dd(3)
lams = st.fractions(min_value=F(1, 50), max_value=50, max_denominator=50)


def test_occupancy_examples():
    c = match_coeffs(K33)
    assert occupancy_fraction(c, (6, 9), 1) == F(7, 34)
    assert occupancy_fraction(c, (6, 9), 0) == 0
    assert occupancy_fraction(ind_coeffs(K33), (6, 9), 0) == 0


@pytest.mark.parametrize("q", [2, 3, 4])
def test_potts_energy_at_one(q):
    for g in enumerate_regular(3, 8):
        assert occupancy_fraction(potts_coeffs(g, q), (g.n, g.m), 1) == F(1, q)


def test_size_distribution_examples():
    sd = size_distribution(match_coeffs(K33), 1)
    assert sd.probs == [F(1, 34), F(9, 34), F(18, 34), F(6, 34)]
    assert size_distribution(match_coeffs(K33), 0).probs == [1, 0, 0, 0]
    big = size_distribution(ind_coeffs(k_dd(3)), 10 ** 6)
    assert big.prob(3) > F(999, 1000)


@given(lams)
def test_size_distribution_consistent_with_occupancy(lam):
    for g, kind, denom in ((prism(), "match", 9), (prism(), "ind", 6), (cycle(7), "match", 7)):
        c = coeffs(g, kind)
        sd = size_distribution(c, lam)
        assert sum(sd.probs) == 1
        assert sd.mean() / denom == occupancy_fraction(c, (g.n, g.m), lam) == occupancy(c.coeffs, denom, lam)


def test_tune_lambda_examples():
    c = match_coeffs(K33)
    assert tune_lambda(c, F(63, 34)) == 1
    assert tune_lambda(h_dn_coeffs(3, 12, "match"), 2 * F(63, 34)) == 1
    assert tune_lambda(c, F(1, 10 ** 6)) < F(1, 10 ** 5)
    with pytest.raises(ValueError):
        tune_lambda(c, 3)
    with pytest.raises(ValueError):
        tune_lambda(c, 0)


@given(st.fractions(min_value=F(1, 100), max_value=F(299, 100)))
def test_tune_lambda_bracket(target):
    c = match_coeffs(K33)
    lo, hi, lam = tune_lambda_bracket(c, target)
    assert mean_size(c, lo) <= target <= mean_size(c, hi)
    assert abs(mean_size(c, lam) - target) <= F(1, 10 ** 9)


def test_free_volume_examples():
    assert free_volume(ind_coeffs(K33), 1) == 2
    assert free_volume(ind_coeffs(cl_dn(3, 8)), 0) == 8
    assert free_volume(ind_coeffs(K33), 3) == 0
    with pytest.raises(ValueError):
        free_volume(ind_coeffs(K33), 5)


def test_monotone_occupancy():
    grid = sorted(DEFAULT_GRID)
    for g in enumerate_regular(3, 8):
        for kind in ("match", "ind"):
            vals = [occupancy_fraction(coeffs(g, kind), (g.n, g.m), x) for x in grid]
            assert all(a < b for a, b in zip(vals, vals[1:]))


def test_edge_bound_examples():
    c4 = cycle(4)
    # matchings of C_4 containing a fixed edge: {e} and {e, e'}, out of 7
    es = c4.edge_list()
    e = es[0]
    containing = sum(1 for r in range(3) for ms in combinations(es, r)
                     if e in ms and len({x for f in ms for x in f}) == 2 * r)
    assert F(containing, sum(brute_match(c4))) == F(2, 7) <= F(1, 2)
    assert edge_occupancy_bound_check(c4, 1)
    assert edge_occupancy_bound_check(c4, 0)
    assert edge_occupancy_bound_check(Graph(2, [(0, 1)]), F(3, 7))


@pytest.mark.parametrize("d,n", [(2, 6), (2, 8), (2, 10), (3, 6), (3, 8), (3, 10)])
def test_fact_bound_on_enumerated(d, n):
    for g in enumerate_regular(d, n):
        for lam in (F(1, 4), F(1, 2), 1, 2, 4):
            assert edge_occupancy_bound_check(g, lam, "match")
            assert edge_occupancy_bound_check(g, lam, "ind")


def test_local_view_distribution_kdd_supports():
    for d in (2, 3):
        ind = local_view_distribution(k_dd(d), "ind", 1)
        assert ind.total() == 1
        assert set(ind.support()) <= set(kdd_views(d, "ind"))
        m = local_view_distribution(k_dd(d), "match", 1)
        assert set(m.support()) <= set(kdd_views(d, "match"))
        for lv in m.support():
            a, b, c = lv.data
            assert a == b and c == 0


def test_prism_has_triangle_view():
    dist = local_view_distribution(prism(), "match", 1)
    assert dist.total() == 1
    assert any(lv.data[2] > 0 and p > 0 for lv, p in dist.probs.items())


@pytest.mark.parametrize("kind", ["match", "ind"])
def test_view_distribution_sums_and_realizable(kind):
    for g in enumerate_regular(3, 8):
        dist = local_view_distribution(g, kind, F(1, 2))
        assert dist.total() == 1
        for lv in dist.support():
            assert certify_realizable(lv, 3) is not None


def test_view_distribution_recovers_occupancy():
    # the probability the root is occupied, averaged over views, is the occupancy fraction
    from partfn.views import ind_view_quantities, match_view_quantities
    for g in enumerate_regular(3, 8):
        for lam in (F(1, 2), 2):
            dm = local_view_distribution(g, "match", lam)
            est = sum(p * match_view_quantities(lv, 3, lam)["root"] for lv, p in dm.probs.items())
            assert est == occupancy_fraction(match_coeffs(g), (g.n, g.m), lam)
            di = local_view_distribution(g, "ind", lam)
            est = sum(p * ind_view_quantities(lv, 3, lam)["root"] for lv, p in di.probs.items())
            assert est == occupancy_fraction(ind_coeffs(g), (g.n, g.m), lam)


def test_potts_views_of_kdd():
    dist = local_view_distribution(K33, "potts", 1, q=3)
    assert dist.total() == 1
    assert {lv.cert for lv in dist.support()} <= kdd_potts_views(3, 3)
    other = local_view_distribution(prism(), "potts", 1, q=3)
    assert any(lv.cert not in kdd_potts_views(3, 3) for lv in other.support())


def test_local_view_json():
    obj = local_view_distribution(K33, "ind", 1).to_json()
    assert obj["lambda"] == "1"
    assert sum(F(v) for v in obj["probs"].values()) == 1
