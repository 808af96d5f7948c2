from fractions import Fraction
from itertools import product

import pytest

from soficdyck.automaton import STANDARD_BUILTINS, DyckAutomaton, builtin, is_periodic_pattern
from soficdyck.languages import dyck_and_prime_matrices, h_matrix
from soficdyck.series import MultiSeries, TruncatedSeries, substitute, theta
from soficdyck.words import HKind, PushdownAlphabet
from soficdyck.zeta import (
    PeriodicCountTable,
    PreconditionError,
    ZetaIntegrityError,
    counts_from_zeta,
    decomposition_check,
    entropy_estimate,
    exterior_power,
    in_periodic_h,
    pattern_exterior_power,
    pattern_graph,
    periodic_patterns,
    permutation_sign,
    pn_bruteforce,
    sofic_zeta,
    zeta_bruteforce,
    zeta_det_route,
    zeta_subst_route,
)

FIG2 = builtin("fig2")
FIG1 = builtin("fig1-sofic")
GOLDEN = builtin("golden-mean")
EMPTY = DyckAutomaton(PushdownAlphabet(["a"], ["b"], []), ["1"], [])
FULL2 = DyckAutomaton(PushdownAlphabet([], [], ["x", "y"]), ["1"], [("1", "x", "1"), ("1", "y", "1")])
SPLIT = DyckAutomaton(
    PushdownAlphabet(["a"], ["b"], []),
    ["1", "2"],
    [("1", "a", "1"), ("1", "a", "2"), ("2", "b", "1")],
    [(0, 2), (1, 2)],
)


def z(cap):
    return TruncatedSeries.z(cap)


def lucas(n):
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_pn_examples():
    assert pn_bruteforce(FIG2, 1) == 5
    assert [pn_bruteforce(GOLDEN, n) for n in (1, 2, 3)] == [1, 3, 4]
    assert [pn_bruteforce(EMPTY, n) for n in (1, 2, 3)] == [0, 0, 0]
    assert zeta_bruteforce(EMPTY, 5) == TruncatedSeries.one(5)
    with pytest.raises(ValueError):
        pn_bruteforce(FIG2, 0)


@pytest.mark.parametrize("name", ["fig2", "motzkin-2-1", "fig1-sofic"])
def test_pn_matches_word_by_word_count(name):
    a = builtin(name)
    for n in range(1, 6):
        direct = sum(1 for u in product(a.letters, repeat=n) if is_periodic_pattern(a, u))
        assert pn_bruteforce(a, n) == direct


def test_periodic_patterns_listing():
    pats = periodic_patterns(FIG2, 3)
    assert pats == sorted(pats) and len(pats) == pn_bruteforce(FIG2, 3)
    assert all(is_periodic_pattern(FIG2, u) for u in pats)
    assert ("i", "i") in periodic_patterns(FIG2, 2)
    # i toggles 1 -> 2 -> 1, so i^inf is a point of period 1
    assert ("i",) in periodic_patterns(FIG2, 1)


def test_workers_do_not_change_counts():
    assert pn_bruteforce(FIG2, 6, workers=2) == pn_bruteforce(FIG2, 6)
    assert periodic_patterns(FIG2, 4, workers=2) == periodic_patterns(FIG2, 4)


def test_golden_mean_lucas():
    zeta = zeta_bruteforce(GOLDEN, 8)
    assert dict(counts_from_zeta(zeta)) == {n: lucas(n) for n in range(1, 9)}
    assert zeta == (z(8) + z(8) ** 2).star()


def test_counts_from_zeta_examples():
    cap = 6
    assert dict(counts_from_zeta((z(cap) + z(cap) ** 2).star())) == {n: lucas(n) for n in range(1, 7)}
    assert set(counts_from_zeta(TruncatedSeries.one(cap)).values()) == {0}
    assert dict(counts_from_zeta((2 * z(cap)).star())) == {n: 2 ** n for n in range(1, 7)}


def test_counts_from_zeta_rejects_bad_series():
    with pytest.raises(ZetaIntegrityError):
        counts_from_zeta(1 + z(3) * Fraction(1, 2))
    with pytest.raises(ZetaIntegrityError):
        counts_from_zeta(1 - z(3))
    with pytest.raises(ZetaIntegrityError):
        counts_from_zeta(2 + z(3))
    with pytest.raises(ZetaIntegrityError):
        PeriodicCountTable({1: 0, 2: 1})
    with pytest.raises(ZetaIntegrityError):
        PeriodicCountTable({1: -1})


def test_orbit_counts():
    table = PeriodicCountTable({n: lucas(n) for n in range(1, 7)})
    assert table.orbits() == {1: 1, 2: 1, 3: 1, 4: 1, 5: 2, 6: 2}


def test_permutation_sign():
    order = ("1", "2", "3")
    assert permutation_sign(("1", "2", "3"), order) == 1
    assert permutation_sign(("2", "1", "3"), order) == -1
    assert permutation_sign(("2", "3", "1"), order) == 1


def test_fig2_exterior_squares():
    cap = 8
    i = MultiSeries.letter(FIG2.letters, cap, "i")
    both = ("1", "2")
    right = exterior_power(FIG2, HKind.MrPlusC, 2, cap, "multi", "reverse")
    left = exterior_power(FIG2, HKind.CStarMc, 2, cap, "multi", "forward")
    assert list(right.index) == [both] and right[both, both] == -i
    assert left[both, both].is_zero()


@pytest.mark.parametrize("name", STANDARD_BUILTINS)
def test_exterior_power_routes_agree(name):
    a = builtin(name)
    for kind, orient in ((HKind.CStarMc, "forward"), (HKind.MrPlusC, "reverse")):
        one = exterior_power(a, kind, 1, 6, orientation=orient)
        hm = h_matrix(a, kind, 6)
        for p in a.states:
            for q in a.states:
                assert one[(p,), (q,)] == hm[p, q]
        for ell in range(1, len(a.states) + 1):
            for variables in ("uni", "multi"):
                fast = exterior_power(a, kind, ell, 6, variables, orient)
                slow = exterior_power(a, kind, ell, 6, variables, orient, method="enumerate")
                assert fast == slow, (kind, ell, variables)


def test_exterior_power_rejects_ambiguity():
    with pytest.raises(PreconditionError):
        exterior_power(SPLIT, HKind.CStarMc, 1, 3, method="enumerate")
    with pytest.raises(ValueError):
        exterior_power(FIG2, HKind.CStarMc, 3, 3)


def test_fig2_multivariate_zeta_closed_form():
    cap = 8
    x = {k: MultiSeries.letter(FIG2.letters, cap, k) for k in FIG2.letters}
    _, c = dyck_and_prime_matrices(FIG2, cap, "multi")
    c11, i = c["1", "1"], x["i"]
    left = 1 - (c11 + i * i).star() * (x["a"] + x["a'"])
    right = 1 - (c11 + i * i + x["b"] + x["b'"])
    expected = (1 + i) * left.inverse() * right.inverse()
    assert zeta_det_route(FIG2, cap=cap, variables="multi") == expected


def test_golden_mean_zeta():
    cap = 12
    assert zeta_det_route(GOLDEN, cap=cap) == (z(cap) + z(cap) ** 2).star()
    assert zeta_subst_route(GOLDEN, cap=cap) == (z(cap) + z(cap) ** 2).star()


def test_full_shift_and_empty():
    assert zeta_det_route(FULL2, cap=6) == (2 * z(6)).star()
    assert zeta_det_route(EMPTY, cap=6) == TruncatedSeries.one(6)
    assert zeta_subst_route(EMPTY, cap=6) == TruncatedSeries.one(6)


@pytest.mark.parametrize("name", STANDARD_BUILTINS)
def test_three_routes_agree(name):
    a = builtin(name)
    cap = 7
    brute = zeta_bruteforce(a, cap)
    assert zeta_det_route(a, cap=cap) == brute
    assert zeta_subst_route(a, cap=cap) == brute
    counts_from_zeta(brute)


@pytest.mark.parametrize("name", ["fig2", "dyck-2", "golden-mean"])
def test_multivariate_routes(name):
    a = builtin(name)
    cap = 5
    det_multi = zeta_det_route(a, cap=cap, variables="multi")
    assert zeta_subst_route(a, cap=cap, variables="multi") == det_multi
    assert zeta_bruteforce(a, cap, "multi") == det_multi
    assert theta(det_multi) == zeta_det_route(a, cap=cap)


def test_determinism_precondition():
    with pytest.raises(PreconditionError) as err:
        zeta_det_route(SPLIT, cap=4)
    assert err.value.report is not None and not err.value.report.passed
    with pytest.raises(PreconditionError):
        zeta_subst_route(SPLIT, cap=4)


def test_separate_left_and_right_presentations():
    assert zeta_det_route(FIG2, FIG2.reversed().reversed(), cap=6) == zeta_det_route(FIG2, cap=6)
    with pytest.raises(ValueError):
        zeta_det_route(FIG2, GOLDEN, cap=4)


def test_pattern_graph_fig2():
    g = pattern_graph(FIG2, HKind.CStarMc, 8, orientation="forward")
    assert g.letters == ("{1>1}", "{2>1}")
    assert g.edges == [("1", "{1>1}", "1"), ("2", "{2>1}", "1")]
    assert g.is_deterministic()
    h = pattern_graph(FIG2, HKind.MrPlusC, 8, orientation="reverse")
    assert "{1>1}" in h.letters and "{1>2,2>1}" in h.letters
    assert ("1", "{1>2,2>1}", "2") in h.edges and ("2", "{1>2,2>1}", "1") in h.edges
    assert h.is_codeterministic()
    assert h.series["{1>2,2>1}"] == z(8)


def test_pattern_graph_methods_agree():
    for kind in (HKind.CStarMc, HKind.MrPlusC):
        g1 = pattern_graph(FIG2, kind, 6)
        g2 = pattern_graph(FIG2, kind, 6, method="enumerate")
        assert g1.patterns == g2.patterns and g1.series == g2.series


def test_sofic_zeta_fig2_factors():
    cap = 10
    g = pattern_graph(FIG2, HKind.CStarMc, cap, orientation="forward")
    a1 = MultiSeries.letter(g.letters, cap, "{1>1}")
    assert sofic_zeta(g, cap) == a1.star()
    h = pattern_graph(FIG2, HKind.MrPlusC, cap, orientation="reverse")
    b1 = MultiSeries.letter(h.letters, cap, "{1>1}")
    b5 = MultiSeries.letter(h.letters, cap, "{1>2,2>1}")
    assert sofic_zeta(h, cap, "reverse") == (1 + b5) * (b1 + b5 * b5).star()


def test_sofic_zeta_edge_cases():
    g = pattern_graph(GOLDEN, HKind.CStarMc, 4)
    assert g.letters == () and sofic_zeta(g, 4) == MultiSeries.one((), 4)
    with pytest.raises(PreconditionError):
        sofic_zeta(pattern_graph(SPLIT, HKind.CStarMc, 3), 3)


@pytest.mark.parametrize("name", ["fig2", "fig1-sofic", "golden-mean", "dyck-2"])
def test_substituted_pattern_matrices_are_exterior_powers(name):
    a = builtin(name)
    cap = 7
    target = TruncatedSeries.one(cap)
    for kind, orient in ((HKind.CStarMc, "forward"), (HKind.MrPlusC, "reverse")):
        g = pattern_graph(a, kind, cap, orientation=orient)
        for ell in range(1, len(a.states) + 1):
            direct = exterior_power(a, kind, ell, cap, orientation=orient)
            if not g.letters:
                assert direct.is_zero()
                continue
            m = pattern_exterior_power(g, ell, cap, orient)
            assert m.map(lambda s: substitute(s, g.series, like=target)) == direct


def test_fig2_substitution_closed_form():
    cap = 12
    _, c = dyck_and_prime_matrices(FIG2, cap)
    c11, x = c["1", "1"], z(cap)
    expected = ((c11 + x * x).star() * (2 * x)).star() * (1 + x) * (c11 + 2 * x + x * x).star()
    assert zeta_subst_route(FIG2, cap=cap) == expected


def test_periodic_h_examples():
    assert in_periodic_h(FIG2, ("a",), HKind.CStarMc)
    assert not in_periodic_h(FIG2, ("a",), HKind.MrPlusC)
    assert in_periodic_h(FIG2, ("b",), HKind.MrPlusC)
    assert not in_periodic_h(FIG2, ("b",), HKind.CStarMc)
    u = ("(", ")")
    assert in_periodic_h(FIG1, u, HKind.MrPlusC)
    assert not in_periodic_h(FIG1, u, HKind.CStarMc)
    with pytest.raises(ValueError):
        in_periodic_h(FIG2, (), HKind.C)


@pytest.mark.parametrize("name", STANDARD_BUILTINS)
def test_decomposition_disjoint(name):
    rep = decomposition_check(builtin(name), 6)
    assert rep.passed, str(rep)
    assert rep.periodic == rep.in_cstar_mc + rep.in_mr_plus_c


def test_entropy_estimate():
    table = {n: 2 ** n for n in range(1, 9)}
    assert all(v == pytest.approx(2.0) for _, v in entropy_estimate(table))
    assert all(v == 0 for _, v in entropy_estimate({1: 0, 2: 0}))
    with pytest.raises(ValueError):
        entropy_estimate({})


@pytest.mark.parametrize("name", STANDARD_BUILTINS)
def test_integrality_of_formula_routes(name):
    a = builtin(name)
    zeta = zeta_det_route(a, cap=16)
    assert all(isinstance(c, int) and c >= 0 for c in zeta.coeffs)
    table = counts_from_zeta(zeta)
    assert all(v >= 0 for v in table.orbits().values())
