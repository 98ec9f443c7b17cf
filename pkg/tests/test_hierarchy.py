import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from partfn.enumerate import enumerate_regular
from partfn.exact import RatPoly, poly_eval
from partfn.graph import cl_dn, disjoint_union, k_dd, make_named, prism
from partfn.hierarchy import (FLAGS, IMPLICATIONS, cutler_radcliffe_check, cutler_radcliffe_detail,
                              dominance, fv_holds, has_internal_zero, hierarchy_consistency,
                              rk_coefficients)
from partfn.polys import disjoint_union_coeffs, h_dn_coeffs, match_coeffs


def test_count_max_incomparable():
    g, h = [1, 5, 2], [1, 2, 3]
    r = dominance(g, h)
    assert r.flags["COUNT"] and not r.flags["MAX"]
    rev = dominance(h, g)
    assert rev.flags["MAX"] and not rev.flags["COUNT"]
    assert r.consistent and rev.consistent


def test_coef_without_occ():
    r = dominance([1, 3, 1], [1, 2, 1])
    assert r.flags["COEF"] and not r.flags["OCC"]
    lam = F(r.witnesses["OCC"]["lambda"])
    zg, zh = RatPoly([1, 3, 1]), RatPoly([1, 2, 1])
    assert lam * zg.derivative()(lam) / zg(lam) < lam * zh.derivative()(lam) / zh(lam)


def test_occ_without_coef():
    r = dominance([1, 5, 5, 5], [1, 4, 6, 1])
    assert r.flags["OCC"] and not r.flags["COEF"]
    assert r.witnesses["COEF"] == {"k": 2}
    assert r.consistent


def test_equal_vectors_all_true():
    r = dominance([1, 4, 2], [1, 4, 2])
    assert all(r.flags[f] for f in FLAGS)
    assert all(x == 0 for x in rk_coefficients([1, 4, 2], [1, 4, 2]))


def test_part_witness_is_genuine():
    r = dominance([1, 5, 2], [1, 2, 3])
    lam = F(r.witnesses["PART"]["lambda"])
    assert poly_eval(RatPoly([1, 5, 2]), lam) < poly_eval(RatPoly([1, 2, 3]), lam)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        dominance([2, 1], [1, 1])
    with pytest.raises(ValueError):
        dominance([1, -1], [1, 1])


def test_rk_examples():
    a, b = [1, 5, 2], [1, 2, 3]
    rs = rk_coefficients(a, b)
    assert rs[0] == a[1] * b[0] - b[1] * a[0]


def test_fv_pair_from_graphs():
    zh = h_dn_coeffs(3, 12, "match")
    zg = disjoint_union_coeffs(match_coeffs(prism()), match_coeffs(k_dd(3)))
    r = dominance(zh, zg)
    assert r.flags["FV"] and r.consistent
    assert all(x >= 0 for x in rk_coefficients(zh, zg))


def contiguous_pair(rng):
    n = rng.randint(1, 6)
    c0 = rng.randint(1, 3)
    a = [c0] + [rng.randint(0, 5) for _ in range(n)]
    top = rng.randint(0, n)
    b = [c0] + [rng.randint(1, 5) for _ in range(top)] + [0] * (n - top)
    return a, b


def test_meta_invariant_ten_thousand_pairs():
    rng = random.Random(20240607)
    for _ in range(10 ** 4):
        a, b = contiguous_pair(rng)
        ok, bad = hierarchy_consistency(a, b)
        assert ok, (a, b, bad)


@given(st.integers(1, 3), st.lists(st.integers(0, 6), min_size=1, max_size=6),
       st.lists(st.integers(1, 6), max_size=6))
def test_meta_invariant_property(c0, tail_g, tail_h):
    a = [c0] + tail_g
    b = [c0] + tail_h
    rep = dominance(a, b)
    assert rep.consistent
    if rep.flags["FV"]:
        assert rep.flags["COEF"] and rep.rk_nonneg


def test_fv_zero_convention():
    # H ratio after a zero of H is -infinity: vacuous
    assert fv_holds([1, 1, 0], [1, 1, 0])[0]
    # a zero of G fails only when H's ratio there is positive
    assert fv_holds([1, 0, 0], [1, 1, 0]) == (False, 0)
    assert fv_holds([1, 2, 0], [1, 1, 0])[0]


def test_internal_zero_in_h_is_outside_the_lattice():
    # FV holds vacuously past H's zero, yet G loses coefficient 2
    a, b = [3, 0, 2], [3, 0, 3]
    assert has_internal_zero(b)
    rep = dominance(a, b)
    assert rep.flags["FV"] and not rep.flags["COEF"]
    assert rep.consistent and rep.notes


def test_cutler_radcliffe_examples():
    assert cutler_radcliffe_check(cl_dn(3, 8), 3, 8)
    d = cutler_radcliffe_detail(make_named("H_dn(3,12)"), 3, 12)
    assert d.ok and not d.fv_failures
    with pytest.raises(ValueError):
        cutler_radcliffe_check(prism(), 3, 6)


@pytest.mark.parametrize("n", [8, 12])
def test_cutler_radcliffe_enumerated(n):
    assert all(cutler_radcliffe_check(g, 3, n) for g in enumerate_regular(3, n))


def test_report_json():
    js = dominance([1, 5, 2], [1, 2, 3]).to_json()
    assert js["flags"]["COUNT"] is True and js["flags"]["MAX"] is False
    assert set(js["flags"]) == set(FLAGS)
    assert len(IMPLICATIONS) == 6
