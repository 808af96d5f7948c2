"""Acceptance criteria 1-9, each at its stated degree, tolerance and time budget.

Every criterion prints one ``PASS``/``FAIL`` line (also when pytest
captures output) and the session ends with a summary block.  Run
directly with ``python tests/test_acceptance.py`` for the lines alone.
"""

from functools import lru_cache
from itertools import product
import os
import sys
import time

import pytest

from soficdyck.automaton import STANDARD_BUILTINS, builtin, count_runs
from soficdyck.languages import circularity_check, dyck_and_prime_matrices, find_circularity_witness
from soficdyck.series import MultiSeries, TruncatedSeries
from soficdyck.words import HKind, is_prime_dyck
from soficdyck.zeta import (
    ZetaIntegrityError,
    counts_from_zeta,
    decomposition_check,
    exterior_power,
    pattern_graph,
    sofic_zeta,
    zeta_bruteforce,
    zeta_det_route,
    zeta_subst_route,
)

RESULTS = {}
ROUTE_BUILTINS = ("fig2", "motzkin-2-1", "dyck-1", "dyck-2", "golden-mean")
WORKERS = os.cpu_count() or 1


def report(number, ok, detail, elapsed, budget=None):
    within = budget is None or elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    timing = "%.1fs" % elapsed if budget is None else "%.1fs < %ds" % (elapsed, budget)
    if not within:
        timing += " EXCEEDED"
    line = "criterion %d: %s  %s  [%s]" % (number, verdict, detail, timing)
    RESULTS[number] = line
    sys.__stdout__.write("\n" + line + "\n")
    sys.__stdout__.flush()
    return verdict == "PASS"


@lru_cache(maxsize=None)
def brute(name, cap=10):
    return zeta_bruteforce(builtin(name), cap, workers=WORKERS)


@lru_cache(maxsize=None)
def det_route(name, cap=20):
    return zeta_det_route(builtin(name), cap=cap)


@lru_cache(maxsize=None)
def subst_route(name, cap=20):
    return zeta_subst_route(builtin(name), cap=cap)


@lru_cache(maxsize=None)
def fig2_sofic_zetas(cap=10):
    a = builtin("fig2")
    g = pattern_graph(a, HKind.CStarMc, cap, orientation="forward")
    h = pattern_graph(a, HKind.MrPlusC, cap, orientation="reverse")
    return g, sofic_zeta(g, cap), h, sofic_zeta(h, cap, "reverse")


def criterion_1():
    t = time.time()
    a = builtin("fig2")
    d, c = dyck_and_prime_matrices(a, 20)
    z = TruncatedSeries.z(20)
    d11, c11 = d["1", "1"], c["1", "1"]
    quadratic = 2 * z * z * d11 * d11 - (1 - z * z) * d11 + 1
    ok_quad = quadratic.is_zero()
    ok_c = c11 == 2 * z * z * d11
    enum = [
        sum(count_runs(a, u, "1", "1") for u in _words(a, n) if is_prime_dyck(a.alphabet, u))
        for n in (2, 4)
    ]
    ok_enum = enum == [2, 6] and [c11[2], c11[4]] == enum
    detail = "quadratic identity %s, C11 = 2z^2 D11 %s, [z^2],[z^4] = %d,%d (enumeration %d,%d)" % (
        "holds" if ok_quad else "fails",
        "holds" if ok_c else "fails",
        c11[2],
        c11[4],
        *enum,
    )
    return report(1, ok_quad and ok_c and ok_enum, detail + " to degree 20", time.time() - t, 10)


def _words(a, n):
    return product(a.letters, repeat=n)


def criterion_2():
    t = time.time()
    a = builtin("fig2")
    cap = 8
    i = MultiSeries.letter(a.letters, cap, "i")
    both = ("1", "2")
    ok = True
    for method in ("product", "enumerate"):
        right = exterior_power(a, HKind.MrPlusC, 2, cap, "multi", "reverse", method)
        left = exterior_power(a, HKind.CStarMc, 2, cap, "multi", "forward", method)
        ok &= list(right.index) == [both] and right[both, both] == -i
        ok &= list(left.index) == [both] and left[both, both].is_zero()
    detail = "(C+Mr)^2 = [%s], (C*Mc)^2 = [%s] at degree 8" % (right[both, both], left[both, both])
    return report(2, ok, detail, time.time() - t, 30)


def criterion_3():
    t = time.time()
    cap = 10
    g, zg, h, zh = fig2_sofic_zetas(cap)
    a1 = MultiSeries.letter(g.letters, cap, "{1>1}")
    b1 = MultiSeries.letter(h.letters, cap, "{1>1}")
    b5 = MultiSeries.letter(h.letters, cap, "{1>2,2>1}")
    ok_letters = g.patterns["{1>1}"] == {("1", "1")} and h.patterns["{1>2,2>1}"] == {("1", "2"), ("2", "1")}
    ok_g = zg == a1.star()
    ok_h = zh == (1 + b5) * (b1 + b5 * b5).star()
    detail = "Z(S_H) = a1^* %s over %s; Z(S_H') = (1+b5)(b1+b5^2)^* %s over %s; degree 10" % (
        "exact" if ok_g else "differs",
        ",".join(g.letters),
        "exact" if ok_h else "differs",
        ",".join(h.letters),
    )
    return report(3, ok_letters and ok_g and ok_h, detail, time.time() - t, 10)


def criterion_4():
    t = time.time()
    failures = []
    for name in ROUTE_BUILTINS:
        b, d, s = brute(name), det_route(name), subst_route(name)
        if d != s:
            failures.append("%s: determinant and substitution differ below degree 20" % name)
        if b != d.truncate(10) or b != s.truncate(10):
            failures.append("%s: brute force differs below degree 10" % name)
    detail = "brute = det = subst to degree 10, det = subst to degree 20 on %s" % ", ".join(ROUTE_BUILTINS)
    if failures:
        detail = "; ".join(failures)
    return report(4, not failures, detail, time.time() - t, 600)


def lucas(n):
    x, y = 2, 1
    for _ in range(n):
        x, y = y, x + y
    return x


def criterion_5():
    t = time.time()
    cap = 20
    zeta = zeta_det_route(builtin("golden-mean"), cap=cap)
    z = TruncatedSeries.z(cap)
    expected = (1 - z - z * z).inverse()
    counts = counts_from_zeta(zeta)
    ok = zeta == expected and zeta_subst_route(builtin("golden-mean"), cap=cap) == expected
    ok &= dict(counts) == {n: lucas(n) for n in range(1, cap + 1)}
    detail = "zeta = 1/(1-z-z^2) to degree 20, p_1..p_3 = %d,%d,%d (Lucas)" % (counts[1], counts[2], counts[3])
    return report(5, ok, detail, time.time() - t, 5)


def criterion_6():
    t = time.time()
    parts = []
    ok = True
    for name in ("fig2", "motzkin-2-1"):
        rep = decomposition_check(builtin(name), 5)
        ok &= rep.passed and rep.periodic == rep.in_cstar_mc + rep.in_mr_plus_c
        parts.append("%s %d periodic = %d + %d, %d violations" % (
            name, rep.periodic, rep.in_cstar_mc, rep.in_mr_plus_c, len(rep.violations)))
    return report(6, ok, "; ".join(parts) + " (lengths 1..5)", time.time() - t, 300)


def criterion_7():
    t = time.time()
    failed = []
    for name in STANDARD_BUILTINS:
        for kind in (HKind.CStarMc, HKind.MrPlusC):
            rep = circularity_check(builtin(name), kind, 8)
            if not rep.passed:
                failed.append(str(rep))
    witness = find_circularity_witness({("1", "1"): {("a",), ("a", "a")}}, ["1"], 8)
    ok_witness = witness is not None and witness[0] == (("a",), ("a",)) and witness[3] == (("a", "a"),)
    detail = "%d builtin/kind pairs pass at length 8; {a, aa} witness %s" % (
        2 * len(STANDARD_BUILTINS) - len(failed),
        "a|a = aa" if ok_witness else "missing",
    )
    if failed:
        detail += "; " + "; ".join(failed)
    return report(7, not failed and ok_witness, detail, time.time() - t, 300)


def _nonneg_integral(s):
    if isinstance(s, TruncatedSeries):
        return all(isinstance(c, int) and c >= 0 for c in s.coeffs)
    return all(isinstance(c, int) and c >= 0 for _, c in s.terms())


def criterion_8():
    t = time.time()
    series = {}
    for name in ROUTE_BUILTINS:
        series["%s brute" % name] = brute(name)
        series["%s det" % name] = det_route(name)
        series["%s subst" % name] = subst_route(name)
    _, zg, _, zh = fig2_sofic_zetas()
    bad = [k for k, s in series.items() if not _nonneg_integral(s)]
    bad += [k for k, s in (("Z(S_H)", zg), ("Z(S_H')", zh)) if not _nonneg_integral(s)]
    orbits = 0
    for k, s in series.items():
        try:
            orbits += len(counts_from_zeta(s).orbits())
        except ZetaIntegrityError as exc:
            bad.append("%s: %s" % (k, exc))
    detail = "%d zeta series nonnegative integral, %d orbit counts integral" % (len(series) + 2 - len(bad), orbits)
    if bad:
        detail += "; violations: " + ", ".join(bad)
    return report(8, not bad, detail, time.time() - t)


def criterion_9():
    t = time.time()
    counts = counts_from_zeta(zeta_det_route(builtin("motzkin-2-1"), cap=24))
    growth = counts[24] ** (1.0 / 24)
    ok = abs(growth - 4) <= 0.15 * 4
    detail = "p_24 = %d, p_24^(1/24) = %.4f (within 15%% of 4: %s)" % (counts[24], growth, ok)
    return report(9, ok, detail, time.time() - t)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=["c%d" % k for k in range(1, 10)])
def test_acceptance(criterion):
    assert criterion(), RESULTS.get(int(criterion.__name__.rsplit("_", 1)[1]))


if __name__ == "__main__":
    passed = [c() for c in CRITERIA]
    sys.exit(0 if all(passed) else 1)
