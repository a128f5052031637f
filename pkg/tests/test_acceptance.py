"""The ten acceptance criteria, each at its stated tolerance and time limit.

Each test records one PASS/FAIL line, printed in the terminal summary.
Criteria 7 and 10 are expected to fail; see the notes on those tests.
"""

import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from divcontract.classification import (
    basket_value,
    coprime_candidates,
    row,
    symbolic_value,
    table3,
)
from divcontract.cli import baskets_report, covers_report, load_golden
from divcontract.covering import (
    c_term,
    cover_attempts,
    d_cover,
    local_class_search,
    table4_instances,
    table5_report,
)
from divcontract.exact_arith import a_term, b_term
from divcontract.lattice_dim import admissible_grid, check_grid
from divcontract.riemann_roch import consistent_assignments, d, d_difference
from divcontract.toric_blowup import chart, same_type
from divcontract.verifier import (
    cAn_germ,
    cAn_printed_charts,
    cAn_weights,
    corpus,
    corpus_instances,
    mutation_study,
    random_cAn,
    verify_example,
)


def record(k, ok, text):
    ACCEPTANCE[k] = (bool(ok), text)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {text}")
    return ok


def test_criterion_01_table3():
    t0 = time.perf_counter()
    doc, code = baskets_report(64)
    dt = time.perf_counter() - t0
    problems = []
    if [t["no"] for t in doc["types"]] != list(range(1, 18)):
        problems.append("row numbering")
    for t in doc["types"]:
        pat = row(t["no"])
        if not t["baskets"]:
            problems.append(f"No {t['no']} empty")
        for b in t["baskets"]:
            J = [tuple(x) for x in b["J"]]
            binding = pat.bind(J)
            # printed value, evaluated from the row's value text
            if binding is None or Fraction(b["value"]) != symbolic_value(pat, **binding):
                problems.append(f"No {t['no']} {J}")
    by_no = {t["no"]: t for t in doc["types"]}
    spot = (
        by_no[1]["baskets"] == [{"J": [[6, 3]], "value": "1/2"}]
        and {"J": [[2, 1], [5, 2]], "value": "3/10"} in by_no[5]["baskets"]
        and {"J": [[9, 1]], "value": "10/9"} in by_no[16]["baskets"]
        and by_no[17]["baskets"] == [{"J": [], "value": 2}]
    )
    golden = doc == load_golden("table3")
    ok = not problems and spot and golden and code == 0 and dt < 5
    record(1, ok, f"{doc['count']} baskets in 17 rows, {len(problems)} value mismatches, "
                  f"golden {'same' if golden else 'DIFFERS'}, {dt:.2f}s (< 5s)")
    assert ok


def test_criterion_02_table4():
    t0 = time.perf_counter()
    doc, code = covers_report(64)
    dt = time.perf_counter() - t0
    printed = [r.as_dict() for r in table4_instances(64)]
    same = doc["rows"] == printed
    rej = doc["rejections"][0]
    rejected = rej["source_no"] == 1 and rej["p"] == 2 and not rej["accepted"]
    rejected = rejected and all(t is None for t, _ in cover_attempts(row(1).instantiate(), 2).values())
    golden = doc == load_golden("table4")
    ok = same and rejected and golden and dt < 10
    record(2, ok, f"{len(doc['rows'])} cover rows vs {len(printed)} printed instances, "
                  f"No 1/p=2 rejected: {rejected}, golden {'same' if golden else 'DIFFERS'}, {dt:.2f}s (< 10s)")
    assert ok


def test_criterion_03_table5():
    rep = table5_report(12, 24)
    mism = sum(len(v["mismatches"]) for v in rep.values())
    hits = {f"No {no}": v["hits"] for (no, _), v in rep.items()}
    realized = all(rep[k]["realized"] for k in [(4, 2), (8, 2), (10, 2)])
    vacuous = sum(len(v["printed"]) - len({(r, i, dd) for r, i, dd in v["printed"] if (r, i, dd) in v["realized"]})
                  for v in rep.values())
    ok = mism == 0 and realized
    record(3, ok, f"{mism} mismatches over exhaustive (b,e) search, hits {hits}, "
                  f"{vacuous} printed tuples never realised (vacuous)")
    assert ok


def test_criterion_04_c_constants():
    found = {}
    for no in (4, 10):
        vals = set()
        for h in local_class_search(no, 2, 12, 24):
            vals.add(tuple(c_term(q, h.a, h.n, 2) for q in sorted(h.basket, key=lambda q: q.rv, reverse=True)))
        found[no] = vals
    # No 4 entries ordered (4,2) then (r,1); No 10 as (r,1),(2,1),(2,1) or sorted
    no4 = all(sorted(v, reverse=True) == [Fraction(1, 2), 0] for v in found[4]) and found[4]
    no10 = all(sorted(v) == [0, Fraction(1, 4), Fraction(1, 4)] for v in found[10]) and found[10]
    # No 12 is never realised; evaluate c at each point with the printed classes (1, 0, 2)
    seen = {0: set(), 1: set(), 2: set()}
    for a in range(2, 25, 2):
        for n in range(2, 25, 2):
            for idx, ((r, v), dd) in enumerate(zip([(2, 1), (3, 1), (4, 1)], (1, 0, 2))):
                for q in consistent_assignments(r, v, a, n):
                    if d_cover(q, a, n, 2) == dd:
                        seen[idx].add(c_term(q, a, n, 2))
    no12 = seen == {0: {Fraction(1, 4)}, 1: {Fraction(0)}, 2: {Fraction(0), Fraction(1, 2)}}
    ok = bool(no4) and bool(no10) and no12
    record(4, ok, f"No 4 (1/2,0): {bool(no4)}, No 10 (1/4,1/4,0): {bool(no10)}, "
                  f"No 12 (1/4,0)&{{0,1/2}}: {no12}")
    assert ok


def test_criterion_05_candidates():
    got = {
        (14, "pre"): sorted(coprime_candidates(14, "pre")),
        (14, "post"): sorted(coprime_candidates(14, "post")),
        (15, "pre"): sorted(coprime_candidates(15, "pre")),
        (15, "post"): sorted(coprime_candidates(15, "post")),
    }
    want = {
        (14, "pre"): [(2, 2), (2, 4), (2, 8), (4, 2)],
        (14, "post"): [(2, 2), (4, 2)],
        (15, "pre"): [(2, 2), (2, 4), (4, 2)],
        (15, "post"): [(2, 2), (4, 2)],
    }
    ok = got == want
    record(5, ok, "; ".join(f"No {k[0]} {k[1]} {v}" for k, v in got.items()))
    assert ok


PRINTED_DISCREPANCY = {
    "5.4": lambda i: 1, "5.5": lambda i: 1, "5.6(1)": lambda i: 1, "5.6(2)": lambda i: 1,
    "5.7(1)": lambda i: 2, "5.7(2)": lambda i: 2,
    "7.1(1)": lambda i: Fraction(i.a, 2), "7.1(2)": lambda i: Fraction(i.a, 2),
    "E(1)": lambda i: i.a, "E(2)": lambda i: i.a,
}


def test_criterion_06_corpus():
    t0 = time.perf_counter()
    reports = [verify_example(rec) for rec in corpus()]
    dt = time.perf_counter() - t0
    passed = sum(r["verdict"] == "pass" for r in reports)
    counts_ok = all(len(rec.instances()) == (1 if rec.id in ("5.4", "5.6(1)") else 3) for rec in corpus())
    printed_ok = all(
        inst.claimed_discrepancy == PRINTED_DISCREPANCY[rec.id](inst)
        for rec in corpus() for inst in rec.instances()
    )
    ok = passed == 10 and counts_ok and printed_ok and dt < 10
    record(6, ok, f"{passed}/10 records pass ({sum(len(r['instances']) for r in reports)} instances), "
                  f"printed discrepancies used: {printed_ok}, {dt:.2f}s (< 10s)")
    assert ok


def test_criterion_07_chart_oracle():
    """Closed forms as printed, U4 = 1/n(1,-1,a,0) included.

    Expected to fail: the fourth chart is the original quotient 1/n(1,-1,b,0),
    which agrees with the printed form only when a = b mod n.
    """
    rng = random.Random(1)
    bad = {1: 0, 2: 0, 3: 0, 4: 0}
    for _ in range(50):
        n, b, a, r1, r2 = random_cAn(rng)
        g, w = cAn_germ(n, b, a, r1, r2), cAn_weights(n, a, r1, r2)
        printed = cAn_printed_charts(n, b, a, r1, r2)
        for i in range(1, 5):
            q = chart(g, w, i).quotient_type
            if not same_type((q.order, q.weights), printed[i]):
                bad[i] += 1
    ok = not any(bad.values())
    record(7, ok, "mismatches per chart over 50 tuples: "
                  + ", ".join(f"U{i} {bad[i]}" for i in range(1, 5))
                  + ("" if ok else " (printed U4 carries a where the group acts by b)"))
    assert ok


def test_criterion_08_dimension_lemma():
    t0 = time.perf_counter()
    results = check_grid(41, 60)
    dt = time.perf_counter() - t0
    failed = [r.params for r in results if not r.ok]
    pts = [r.points for r in results]
    ok = not failed and len(results) == len(admissible_grid(41)) and dt < 30
    record(8, ok, f"{len(results) - len(failed)}/{len(results)} admissible tuples, "
                  f"{min(pts)}-{max(pts)} points each, {dt:.1f}s (< 30s)")
    assert ok


def test_criterion_09_identities():
    rng = random.Random(9)
    eq4 = eq5 = 0
    from math import gcd

    for _ in range(1000):
        r = rng.randint(1, 80)
        b = rng.choice([x for x in range(1, r + 1) if gcd(x, r) == 1])
        k = rng.randint(-5 * r, 5 * r)
        kk = k % r
        if kk <= r - 2 or r == 1:
            step = a_term(r, b, kk + 1) - a_term(r, b, kk)
            eq4 += step != Fraction(-(r * r - 1), 12 * r) + b_term(r, kk * b)
        eq5 += a_term(r, b, k) + a_term(r, b, -k) != -b_term(r, k * b)
    period = diff = band = integral = 0
    profiles = [inst.profile() for inst in corpus_instances()]
    for p in profiles:
        for i in range(-10, 11):
            for j in range(-10, 11):
                v = d(p, i, j)
                integral += v.denominator != 1
                period += d(p, i + p.n, j - p.a) != v
                diff += d(p, i + 1, j) - v != d_difference(p, i, j)
                t = Fraction(p.a, p.n) * i + j
                on_line = i % p.n == 0 and i * p.a + j * p.n == 0
                if 0 <= t <= Fraction(p.a, p.n) and not on_line:
                    band += v != 0
    ok = not (eq4 or eq5 or period or diff or band or integral)
    record(9, ok, f"1000 (r,b,k): step {eq4} / reflection {eq5} failures; "
                  f"{len(profiles)} profiles on 21x21: periodicity {period}, difference {diff}, "
                  f"band {band}, non-integral {integral}")
    assert ok


def test_criterion_10_mutations():
    """At least 95% of 200 mutations caught, and every uncaught one provably
    weight-equivalent (same weights, same leading forms).

    Expected to fail on the second clause: uncaught mutants that move a
    monomial out of the leading form are different germs whose terminality
    the necessary checks cannot refute.
    """
    rows = mutation_study(20, seed=0)
    caught = sum(r["caught"] for r in rows)
    rest = [r for r in rows if not r["caught"]]
    equiv = sum(r["equivalent"] for r in rest)
    rate = Fraction(caught, len(rows))
    ok = len(rows) == 200 and rate >= Fraction(95, 100) and equiv == len(rest)
    record(10, ok, f"{caught}/{len(rows)} caught ({float(rate):.1%}), "
                   f"{equiv}/{len(rest)} uncaught are weight-equivalent")
    assert ok
