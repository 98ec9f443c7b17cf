"""The ten acceptance criteria, one test each.

Each test records a PASS/FAIL line (printed at the end of the session by
conftest, and to stdout when the file is run directly).  Criteria that cannot
hold at the stated parameters raise Unattainable and are marked as strict
expected failures: the check itself is never loosened.
"""
import random
import sys
import time
from fractions import Fraction as F

import pytest

from oracles import brute_ind, brute_match, brute_potts, occupancy, random_graph
from partfn.graph import disjoint_union, heawood, k_dd, prism
from partfn.hierarchy import dominance
from partfn.llt import gnedenko_deviation, ratio_lemma_check
from partfn.lp import alpha_kdd, build_lp, f_constant, solve_lp, stability_constant
from partfn.observables import DEFAULT_GRID, local_view_distribution, size_distribution
from partfn.polys import (disjoint_union_coeffs, ind_coeffs, kdd_match_coeffs, match_coeffs,
                          potts_coeffs)
from partfn.verifier import (brute_ind_coeffs, potts_k_range, verify_coefficient_dominance,
                             verify_girth5, verify_stability, verify_view_feasibility)

RESULTS: dict[int, tuple[bool, str]] = {}


class Unattainable(Exception):
    """The criterion is false at the stated parameters."""


def record(num, ok, detail):
    RESULTS[num] = (ok, detail)
    print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def test_1_hierarchy_fidelity():
    t = time.perf_counter()
    a, b = [1, 5, 2], [1, 2, 3]
    r1, r2 = dominance(a, b), dominance(b, a)
    r3 = dominance([1, 3, 1], [1, 2, 1])
    r4 = dominance([1, 5, 5, 5], [1, 4, 6, 1])
    ok = (r1.flags["COUNT"] and not r1.flags["MAX"] and r2.flags["MAX"] and not r2.flags["COUNT"]
          and r3.flags["COEF"] and not r3.flags["OCC"] and r4.flags["OCC"] and not r4.flags["COEF"]
          and all(r.consistent for r in (r1, r2, r3, r4)))
    dt = time.perf_counter() - t
    record(1, ok and dt < 1, f"COUNT/MAX incomparable, COEF without OCC, OCC without COEF ({dt:.2f}s)")
    assert ok and dt < 1


def test_2_lp_tightness():
    cases = [(d, "match") for d in (2, 3)] + [(d, "ind") for d in (2, 3, 4)]
    bad = []
    for d, kind in cases:
        for lam in (F(1, 4), F(1, 2), 1, 2):
            opt = solve_lp(build_lp(d, kind, lam, check=False)).optimum
            kc = match_coeffs(k_dd(d)) if kind == "match" else ind_coeffs(k_dd(d))
            ref = occupancy(kc.coeffs, d * d if kind == "match" else 2 * d, F(lam))
            if opt != ref:
                bad.append((d, kind, lam))
    d3 = solve_lp(build_lp(3, "match", 1, check=False)).optimum
    ok = not bad and d3 == F(7, 34)
    record(2, ok, f"20 (d, kind, lambda) cases exact; d=3 match lambda=1 optimum {d3}")
    assert ok, bad


def test_3_slackness_and_stability_constant():
    problems = []
    for d, kind in [(2, "match"), (3, "match"), (2, "ind"), (3, "ind"), (4, "ind")]:
        for lam in (F(1, 4), F(1, 2), 1, 2):
            lp = build_lp(d, kind, lam, check=False)
            sol = solve_lp(lp)
            zero = set(sol.dual.zero_slack())
            support = set(local_view_distribution(k_dd(d), kind, lam).support())
            if not support <= zero:
                problems.append(("slack", d, kind, lam))
            if stability_constant(d, kind, lam).theta_star <= 0:
                problems.append(("theta", d, kind, lam))
    f = f_constant(3, "ind", 1)
    ok = not problems and f == F(1, 128)
    record(3, ok, f"K_dd support inside zero-slack set, theta* > 0 everywhere, f(3, 1) = {f}")
    assert ok, problems


def test_4_feasibility_of_graph_distributions():
    t = time.perf_counter()
    counted, failed = 0, []
    for d, ns in ((2, range(3, 11)), (3, (4, 6, 8, 10))):
        for n in ns:
            for kind in ("match", "ind"):
                v = verify_view_feasibility(d, n, kind, DEFAULT_GRID)
                counted += len(v.results)
                failed += [(d, n, kind, r.graph6, r.witness) for r in v.failures]
    dt = time.perf_counter() - t
    record(4, not failed and dt < 600, f"{counted} (graph, kind) pairs over the grid, {len(failed)} violations ({dt:.1f}s)")
    assert not failed


def test_5_stability_inequality():
    t = time.perf_counter()
    counted, failed, upper_failed = 0, [], set()
    for n in (4, 6, 8, 10, 12):
        for kind in ("match", "ind"):
            v = verify_stability(3, n, kind, DEFAULT_GRID, delta="exact")
            counted += len(v.results)
            failed += [(n, kind, r.graph6) for r in v.failures]
    # the truncated upper bound form, reported alongside
    for n in (6, 12):
        u = verify_stability(3, n, "match", DEFAULT_GRID, delta="upper")
        upper_failed |= {r.graph6 for r in u.failures}
    dt = time.perf_counter() - t
    record(5, not failed and dt < 1800,
           f"{counted} (graph, kind) pairs with exact delta: {len(failed)} violations; the truncated "
           f"upper bound fails only on {len(upper_failed)} graphs with the profile of K_33 ({dt:.1f}s)")
    assert not failed
    from partfn.sampling import sampling_distance_exact
    from partfn.graph import Graph
    assert all(sampling_distance_exact(Graph.from_graph6(g6), k_dd(3)) == 0 for g6 in upper_failed)


def test_6_coefficient_dominance():
    t = time.perf_counter()
    counted, failed = 0, []
    for d, ns in ((2, (8, 12, 16)), (3, (6, 12))):
        for n in ns:
            for kind in ("match", "ind"):
                v = verify_coefficient_dominance(d, n, kind)
                counted += len(v.results)
                failed += [(d, n, kind, r.witness) for r in v.failures]
    dt = time.perf_counter() - t
    record(6, not failed, f"{counted} (graph, kind) pairs, {len(failed)} conjecture counterexamples ({dt:.1f}s)")
    assert not failed, failed


@pytest.mark.xfail(raises=Unattainable, strict=True,
                   reason="the prism beats K_33 at one monochromatic edge for q = 3 and q = 4")
def test_7_potts_range():
    lines, ok = [], True
    for q in (3, 4):
        ks = potts_k_range(3, 6, q)
        cp, ck = potts_coeffs(prism(), q), potts_coeffs(k_dd(3), q)
        holds = [cp[k] <= ck[k] for k in range(len(cp.coeffs))]
        largest = max(range(-1, ks.stop), key=lambda k: k if all(holds[:k + 1]) else -2)
        covered = largest >= ks.stop - 1
        ok &= covered
        first_bad = next(k for k, h in enumerate(holds) if not h) if not all(holds) else None
        lines.append(f"q={q}: range k<={ks.stop - 1}, dominance holds up to k={largest}"
                     + (f" (k={first_bad}: {cp[first_bad]} > {ck[first_bad]})" if first_bad is not None else ""))
    record(7, ok, "; ".join(lines))
    if not ok:
        raise Unattainable("; ".join(lines))


@pytest.mark.xfail(raises=Unattainable, strict=True,
                   reason="the sandwich needs n far beyond 120 at r <= 6 and delta = 1/10")
def test_8_gnedenko_and_sandwich():
    t = time.perf_counter()
    base = size_distribution(kdd_match_coeffs(3), 1)
    scaled = [gnedenko_deviation(base, K).scaled for K in (25, 100, 400)]
    gned = all(b <= a * 1.05 for a, b in zip(scaled, scaled[1:]))
    chk = ratio_lemma_check(3, 120, 30, 6, F(1, 10))
    worst = max(abs(r - 1) for r in chk.ratios)
    dt = time.perf_counter() - t
    record(8, gned and chk.ok,
           f"deviation*sqrt(K) = {', '.join(f'{float(s):.5f}' for s in scaled)}; sandwich at n=120: "
           f"{'holds' if chk.ok else f'fails, max |ratio - 1| = {float(worst):.3f}'} ({dt:.2f}s)")
    assert gned      # a genuine regression, never an expected failure
    if not chk.ok:
        raise Unattainable(f"ratios {[float(r) for r in chk.ratios]}")


def test_9_girth5():
    t = time.perf_counter()
    oracle = brute_ind_coeffs(heawood())
    v = verify_girth5(14)
    ok = v.ok and list(ind_coeffs(heawood()).coeffs) == oracle
    dt = time.perf_counter() - t
    record(9, ok, f"{len(v.results)} cubic girth >= 5 graphs on 14 vertices, {len(v.failures)} "
                  f"out-of-range observations; Heawood from the 2^14 scan ({dt:.1f}s)")
    assert ok


def trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def test_10_cross_oracle():
    t = time.perf_counter()
    rng = random.Random(1729)
    mism = []
    graphs = []
    for i in range(200):
        n = rng.randint(1, 9)
        g = random_graph(rng, n, rng.choice((0.2, 0.4, 0.6)))
        graphs.append(g)
        if list(match_coeffs(g).coeffs) != brute_match(g):
            mism.append(("match", i))
        if list(ind_coeffs(g).coeffs) != brute_ind(g):
            mism.append(("ind", i))
        q = 2 + i % 2
        if list(potts_coeffs(g, q).coeffs) != brute_potts(g, q):
            mism.append(("potts", i))
    for i in range(0, 40, 2):
        a, b = graphs[i], graphs[i + 1]
        if a.n + b.n > 12:
            continue
        u = disjoint_union(a, b)
        conv = disjoint_union_coeffs(match_coeffs(a), match_coeffs(b)).coeffs
        if trim(conv) != trim(brute_match(u)) or trim(conv) != trim(match_coeffs(u).coeffs):
            mism.append(("union match", i))
        if trim(disjoint_union_coeffs(ind_coeffs(a), ind_coeffs(b)).coeffs) != trim(brute_ind(u)):
            mism.append(("union ind", i))
        if a.n + b.n <= 9 and trim(disjoint_union_coeffs(potts_coeffs(a, 3), potts_coeffs(b, 3)).coeffs) \
                != trim(brute_potts(u, 3)):
            mism.append(("union potts", i))
    dt = time.perf_counter() - t
    record(10, not mism and dt < 300, f"200 random graphs x 3 engines plus unions, {len(mism)} mismatches ({dt:.1f}s)")
    assert not mism, mism


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
