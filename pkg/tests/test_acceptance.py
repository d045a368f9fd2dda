"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from qbailey import INF, PochSpec, corpus, poch, theta_sum, triple_product
from qbailey.bailey import FamilyParams, derive_family, q_direct, q_lemma_form, qdiff_residuals
from qbailey.dsl import parse, verify, verify_bailey

GRID = [
    FamilyParams(d, e, k)
    for d in (1, 2, 3)
    for e in (1, 2, 3)
    for k in range(1, 6)
    if k + d * (e - 1) <= 12  # K <= 12
]
CORPUS_TRIPLES = [(1, 2, 4), (1, 2, 3), (1, 3, 1), (1, 4, 1), (1, 4, 4), (2, 2, 2), (2, 2, 3), (2, 2, 4)]

_series_seen = {}


def record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def keep(criterion, series):
    _series_seen.setdefault(criterion, []).append(series.is_integral())


@pytest.fixture(scope="module")
def corpus_reports():
    t0 = time.perf_counter()
    reports = [verify(doc, 50, 30) for doc in corpus.identities()]
    return reports, time.perf_counter() - t0


def test_1_corpus_verifies(corpus_reports):
    reports, elapsed = corpus_reports
    bad = [r.summary() for r in reports if not r.passed]
    passed = len(reports) == 42 and not bad and elapsed < 120
    record(1, "corpus at N=50, M=30", passed,
           f"{len(reports) - len(bad)}/{len(reports)} equal in {elapsed:.1f}s")
    assert len(reports) == 42
    assert not bad, bad
    assert elapsed < 120


def test_2_residual_grid():
    t0 = time.perf_counter()
    failures = []
    for p in GRID:
        for i, r in enumerate(qdiff_residuals(p, 30, 30), start=1):
            keep(2, r)
            if not r.is_zero():
                failures.append((str(p), i))
    elapsed = time.perf_counter() - t0
    record(2, "q-difference residuals on the grid, N=30, M=30", not failures and elapsed < 300,
           f"{len(GRID)} triples, {len(failures)} nonzero residuals, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 300


def test_3_family_derivation():
    failures = []
    for d, e, k in CORPUS_TRIPLES + [(1, 1, 2)]:
        p = FamilyParams(d, e, k)
        fam = derive_family(p, q_lemma_form(p, 30, 30), 30, 30)
        for i, f in enumerate(fam, start=1):
            keep(3, f)
            direct = q_direct(p, i, 30, 30)
            if f.first_mismatch(direct) is not None or f.N < 30:
                failures.append((str(p), i))
    record(3, "derive_family from the lemma form, N=30", not failures,
           f"9 triples, {len(failures)} mismatching members")
    assert not failures, failures


def test_4_product_sides():
    N = 40
    failures = []
    for p in GRID:
        d, e, k = p.d, p.e, p.k
        euler = poch(PochSpec(1, 0, e, e, INF), N)
        for i in range(1, p.K + 1):
            lhs = q_direct(p, i, N, N).eval_a(1) * euler
            rhs = triple_product(d * i, d * (2 * e * d - 2 * d + 2 * k + 1), N)
            keep(4, lhs)
            if lhs.first_mismatch(rhs) is not None or lhs.N < N:
                failures.append((str(p), i))
    record(4, "Q_i(1) (q^e;q^e)_inf equals the triple product, N=40", not failures,
           f"{sum(p.K for p in GRID)} members, {len(failures)} mismatches")
    assert not failures, failures


def test_5_bailey_closed_forms():
    forms = corpus.bailey_forms()
    reports = [verify_bailey(doc, 10, 30, 30) for doc in forms]
    bad = [r.summary() for r in reports if not r.passed]
    for r in reports:
        _series_seen.setdefault(5, []).append(r.integral)
    triples = sorted((d.params.d, d.params.e, d.params.k) for d in forms)
    ok = not bad and triples == sorted(CORPUS_TRIPLES)
    record(5, "beta closed forms for n<=10, N=30, M=30", ok,
           f"{len(reports) - len(bad)}/{len(reports)} forms equal")
    assert triples == sorted(CORPUS_TRIPLES)
    assert not bad, bad


def test_6_jacobi_triple_product():
    N = 60
    failures = []
    count = 0
    for P in range(2, 21):
        for x in range(1, P):
            s = theta_sum(Fraction(P, 2), Fraction(P, 2) - x, N)
            t = triple_product(x, P, N)
            keep(6, s)
            keep(6, t)
            count += 1
            if s.first_mismatch(t) is not None:
                failures.append((x, P))
    record(6, "theta sum equals triple product, 1<=x<P<=20, N=60", not failures,
           f"{count} pairs, {len(failures)} mismatches")
    assert not failures, failures


def test_7_integrality(corpus_reports):
    reports, _ = corpus_reports
    flags = {c: all(v) for c, v in _series_seen.items()}
    flags[1] = all(r.integral for r in reports)
    missing = sorted({1, 2, 3, 4, 5, 6} - set(flags))
    ok = not missing and all(flags.values())
    record(7, "all coefficients are integers", ok,
           "criteria " + ", ".join(f"{c}:{'int' if v else 'NONINT'}" for c, v in sorted(flags.items()))
           + (f"; not run: {missing}" if missing else ""))
    assert not missing, f"criteria {missing} must run first"
    assert all(flags.values()), flags


def test_8_negative_controls():
    base = """
    identity control {
      lhs = sum(n>=0) { KERNEL / poch(q; q; n) };
      rhs = triple(X, P) / poch(q; q; inf);
    }
    """
    (kernel,) = parse(base.replace("KERNEL", "q^(n^2 + 1)").replace("X, P", "2, 5"))
    (modulus,) = parse(base.replace("KERNEL", "q^(n^2)").replace("X, P", "2, 7"))
    results = []
    for label, doc in (("kernel q^(n^2+1)", kernel), ("triple(2,7)", modulus)):
        rep = verify(doc, 50)
        at = rep.mismatch["q_exponent"] if rep.mismatch else None
        results.append((label, rep.verdict, at))
    ok = all(v == "mismatch" and at is not None and at <= 4 for _, v, at in results)
    record(8, "negative controls rejected with first mismatch at q^<=4", ok,
           "; ".join(f"{label}: {v} at q^{at}" for label, v, at in results))
    for _, v, at in results:
        assert v == "mismatch"
        assert at <= 4
