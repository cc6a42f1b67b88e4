"""Acceptance criteria 1-10, each at its stated tolerance and time limit."""

import math
import time
from fractions import Fraction
from itertools import product

from grlab.bounds import bound_gr_fixed, bound_gr_flexible, elementary_symmetric, flex_report
from grlab.core import (ColorDistribution, EdgeColoring, SmallGraph, falling_product, iter_pairs,
                        pairs, stream)
from grlab.exact import exact_gr, verify_ramsey_claim
from grlab.gallai import (find_gallai_partition, naive_rainbow_triangle, reduced_coloring,
                          sample_gallai_coloring, validate_gallai_partition)
from grlab.lll import (MODE_NUMBER, check_lll_xform, check_lll_yform, maximize_n_two_class,
                       recheck_certificate)
from grlab.probability import (UnsupportedRegime, best_n_by_union_bound, brute_dependency_counts,
                               dependency_counts, pr_mono_clique_skewed_upper,
                               pr_mono_clique_uniform, pr_rainbow_clique_skewed_upper,
                               pr_rainbow_clique_uniform, union_bound_decision)
from grlab.search import moser_tardos, restart_sample
from grlab.verify import verify_claim


def _enumerated(size, k):
    """(Pr[rainbow], Pr[mono]) of K_size under uniform k-colorings, by full enumeration."""
    m = pairs(size)
    rainbow = mono = 0
    for cols in product(range(k), repeat=m):
        distinct = len(set(cols))
        rainbow += distinct == m
        mono += distinct <= 1
    total = k ** m
    return Fraction(rainbow, total), Fraction(mono, total)


def test_1_probability_exactness(acceptance_line):
    start = time.perf_counter()
    bad = []
    for size in (2, 3, 4):
        for k in range(1, 5):
            rb, mono = _enumerated(size, k)
            if pr_rainbow_clique_uniform(size, k, exact=True) != rb:
                bad.append(("rainbow", size, k))
            if pr_mono_clique_uniform(size, k, exact=True) != mono:
                bad.append(("mono", size, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 10
    acceptance_line(1, "uniform probabilities equal enumeration", ok,
                    f"{len(bad)} mismatches, {elapsed:.2f}s")
    assert not bad
    assert elapsed < 10


def test_2_union_bound_certification(acceptance_line):
    start = time.perf_counter()
    worst = 0.0
    mismatched = []
    for k in range(1, 11):
        probs = [Fraction(1, k)] * k
        for s in range(2, 6):
            for t in range(2, 6):
                for n in range(1, 51):
                    flex = bound_gr_flexible(n, s, t, k, probs)
                    ub = union_bound_decision(n, s, t, k)
                    rel = abs(flex.lhs - ub.value) / max(abs(ub.value), 1e-300)
                    worst = max(worst, rel)
                    if flex.concludes != ub.concludes:
                        mismatched.append((n, s, t, k))
    report = flex_report(5, 3, 4, 2, [Fraction(1, 2)] * 2)
    certifies = report.intermediates["concludes"] and report.lower_bound_int == 5
    ramsey = exact_gr(3, 4, 2)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and not mismatched and certifies and ramsey.value == 9 and elapsed < 60
    acceptance_line(2, "gr-flex equals union bound; GR_2(3,4) > 5 and R(3,4) = 9", ok,
                    f"max rel err {worst:.2e}, R(3,4)={ramsey.value}, {elapsed:.1f}s")
    assert worst <= 1e-9
    assert not mismatched
    assert certifies
    assert ramsey.value == 9
    assert elapsed < 60


def test_3_closed_form_dominated_by_scan(acceptance_line):
    start = time.perf_counter()
    violations = []
    for s in (3, 4, 5):
        for t in (3, 4, 5):
            for k in range(pairs(s), 21):
                closed = bound_gr_fixed(s, t, k).lower_bound_real
                scan = best_n_by_union_bound(s, t, k, 100_000).n
                if closed > scan + 1:
                    violations.append((s, t, k, closed, scan))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 30
    acceptance_line(3, "closed form <= union-bound scan + 1", ok,
                    f"{len(violations)} violations, {elapsed:.1f}s")
    assert not violations
    assert elapsed < 30


def test_4_exact_small_ramsey_values(acceptance_line):
    start = time.perf_counter()
    r33 = exact_gr(3, 3, 2)
    t33 = time.perf_counter() - start
    r34 = exact_gr(3, 4, 2)
    t34 = time.perf_counter() - start - t33
    rechecked = all(
        res.extremal is not None
        and res.extremal.coloring.n == res.value - 1
        and verify_ramsey_claim(res.extremal.coloring, res.s, res.t)
        for res in (r33, r34))
    ok = r33.value == 6 and t33 < 10 and r34.value == 9 and t34 < 1800 and rechecked
    acceptance_line(4, "exact R(3,3) = 6 and R(3,4) = 9 with re-verified witnesses", ok,
                    f"{t33:.2f}s and {t34:.1f}s")
    assert r33.value == 6 and t33 < 10
    assert r34.value == 9 and t34 < 1800
    assert rechecked


def test_5_constructive_witnesses_deterministic(acceptance_line):
    start = time.perf_counter()
    cases = [
        (5, 2, 3, 3, ColorDistribution.uniform(2), ColorDistribution.uniform(2)),
        (8, 3, 3, 4, ColorDistribution.uniform(3), ColorDistribution.skewed(3, 0.3)),
    ]
    texts = {}
    all_verified = True
    for run in range(2):
        for workers in (1, 4, 8):
            for n, k, s, t, mt_dist, rs_dist in cases:
                for algo, fn, dist in (("mt", moser_tardos, mt_dist),
                                       ("restart", restart_sample, rs_dist)):
                    wit = fn(n, k, (s, t), dist, seed=42, workers=workers)
                    ok = getattr(wit, "verified", False) and bool(
                        verify_claim(wit.coloring, (s, t)))
                    all_verified &= ok
                    texts.setdefault((n, algo), set()).add(wit.to_text() if ok else None)
    identical = all(len(v) == 1 and None not in v for v in texts.values())
    elapsed = time.perf_counter() - start
    ok = all_verified and identical and elapsed < 10
    acceptance_line(5, "seeded witnesses verified and byte-identical over workers 1/4/8", ok,
                    f"{elapsed:.2f}s")
    assert all_verified
    assert identical
    assert elapsed < 10


def test_6_dependency_counts_brute_force(acceptance_line):
    start = time.perf_counter()
    bad = []
    for n in range(1, 14):
        for s in range(1, 6):
            for t in range(1, 6):
                d = dependency_counts(n, s, t)
                if (d.n_aa_plus1, d.n_ab, d.n_ba, d.n_bb_plus1) != brute_dependency_counts(n, s, t):
                    bad.append((n, s, t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    acceptance_line(6, "dependency counts equal brute force", ok,
                    f"{len(bad)} mismatches, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


def test_7_skewed_bound_chains(acceptance_line):
    start = time.perf_counter()
    broken = []
    checked = 0
    for i in range(1, 50):
        p = Fraction(i, 100)
        for k in range(2, 13):
            dist = ColorDistribution.skewed(k, p)
            for size in range(3, 7):
                for fn in (pr_rainbow_clique_skewed_upper, pr_mono_clique_skewed_upper):
                    try:
                        exact, bound = fn(size, dist)
                    except UnsupportedRegime:
                        continue
                    checked += 1
                    if not exact <= bound:
                        broken.append((fn.__name__, p, k, size))
    half = ColorDistribution.skewed(2, Fraction(1, 2))
    coincide = all(
        pr_mono_clique_skewed_upper(t, half).exact == pr_mono_clique_uniform(t, 2, exact=True)
        for t in range(2, 7)) and (
        pr_rainbow_clique_skewed_upper(2, half).exact == pr_rainbow_clique_uniform(2, 2, exact=True))
    elapsed = time.perf_counter() - start
    ok = not broken and coincide and elapsed < 5
    acceptance_line(7, "skewed exact <= bound; k=2, p=1/2 equals uniform", ok,
                    f"{checked} checks, {elapsed:.2f}s")
    assert not broken
    assert coincide
    assert elapsed < 5


def test_8_lll_certifiers(acceptance_line):
    start = time.perf_counter()
    iso = [[False, False], [False, False]]
    cycle = [[abs(i - j) in (1, 3) for j in range(4)] for i in range(4)]
    pair = [[False, True], [True, False]]
    hand = [
        (check_lll_xform([0.5, 0.5], iso, [0.6, 0.6]), 0.1),
        (check_lll_xform([0.1] * 4, cycle, [0.25] * 4), 0.25 * 0.75 ** 2 - 0.1),
        (check_lll_yform([0.05, 0.05], pair, [1.5, 1.5]), math.log(1.5) - 1.5 * 0.05),
    ]
    hand_ok = all(valid and abs(margin - want) <= 1e-12 for (valid, margin), want in hand)
    runs = [maximize_n_two_class(6, 6, k) for k in (15, 20, 30, 40)]
    runs.append(maximize_n_two_class(6, 6, 15, exact_deps=True))
    runs.append(maximize_n_two_class(5, 8, 10, MODE_NUMBER, graph=SmallGraph.complete(5)))
    runs.append(maximize_n_two_class(4, 5, 6))
    revalidated = []
    for res in runs:
        assert res.n_best >= res.baseline
        if res.cert is not None:
            valid, margin = recheck_certificate(res.cert)
            revalidated.append(valid and margin > 0)
    elapsed = time.perf_counter() - start
    ok = hand_ok and revalidated and all(revalidated) and elapsed < 60
    acceptance_line(8, "hand LLL instances and maximize certificates re-validate", ok,
                    f"{sum(revalidated)}/{len(revalidated)} certificates, {elapsed:.1f}s")
    assert hand_ok
    assert revalidated and all(revalidated)
    assert elapsed < 60


def _gallai_round_trip(col):
    part = find_gallai_partition(col)
    valid, _ = validate_gallai_partition(col, part)
    red = reduced_coloring(col, part)
    return valid and len(red.used_colors()) <= 2


def test_9_gallai_structure(acceptance_line):
    start = time.perf_counter()
    edges = list(iter_pairs(5))
    exhaustive = all(_gallai_round_trip(EdgeColoring(5, 2, list(cols)))
                     for cols in product((1, 2), repeat=len(edges)))
    rng = stream(42)
    sampled_ok = 0
    for _ in range(10_000):
        col = sample_gallai_coloring(8, 3, rng)
        if naive_rainbow_triangle(col) is None and _gallai_round_trip(col):
            sampled_ok += 1
    elapsed = time.perf_counter() - start
    ok = exhaustive and sampled_ok == 10_000 and elapsed < 120
    acceptance_line(9, "Gallai partitions found, validated, reduced to <= 2 colors", ok,
                    f"2^10 K_5 colorings, {sampled_ok}/10000 K_8 samples, {elapsed:.1f}s")
    assert exhaustive
    assert sampled_ok == 10_000
    assert elapsed < 120


def test_10_elementary_symmetric_identity(acceptance_line):
    start = time.perf_counter()
    worst = 0.0
    for m in (pairs(s) for s in range(2, 7)):
        for k in range(1, 21):
            lhs = math.factorial(m) * elementary_symmetric([1.0 / k] * k, m)
            rhs = falling_product(k, m) / k ** m
            if rhs == 0:
                assert lhs == 0
                continue
            worst = max(worst, abs(lhs - rhs) / rhs)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 1
    acceptance_line(10, "m! e_m(1/k,...,1/k) = falling(k,m)/k^m", ok,
                    f"max rel err {worst:.2e}, {elapsed * 1000:.0f}ms")
    assert worst <= 1e-12
    assert elapsed < 1
