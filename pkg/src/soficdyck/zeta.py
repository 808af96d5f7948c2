"""Zeta functions of sofic-Dyck shifts, three ways.

* ``zeta_bruteforce`` counts periodic patterns word by word.
* ``zeta_det_route`` takes the alternating product of
  ``det(I - H_ell)`` over exterior powers of ``C*Mc`` (left presentation,
  forward actions) and ``Mr + C`` (right presentation, reverse actions).
* ``zeta_subst_route`` computes the zeta function of the finite pattern
  graphs over the membership-pattern alphabets and substitutes each
  pattern letter by the series of its words.

Every result is an ordinary series in ``z`` or a multivariate series in
the letters of the automaton.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
import math

from .automaton import (
    CALL,
    RETURN,
    check_h_codeterminism,
    check_h_determinism,
    is_periodic_pattern,
    iter_shaped_words,
)
from .languages import (
    _variables,
    h_matrix,
    monomial_series,
    pattern_counts,
    pattern_series,
    product_automaton,
)
from .series import MultiSeries, SeriesMatrix, TruncatedSeries, det, substitute
from .words import HKind, has_shape, shape_prefix_ok

__all__ = [
    "PreconditionError",
    "ZetaIntegrityError",
    "PeriodicCountTable",
    "pn_bruteforce",
    "periodic_patterns",
    "zeta_bruteforce",
    "counts_from_zeta",
    "permutation_sign",
    "exterior_power",
    "zeta_det_route",
    "PatternAlphabet",
    "pattern_graph",
    "pattern_exterior_power",
    "sofic_zeta",
    "zeta_subst_route",
    "in_periodic_h",
    "DecompositionReport",
    "decomposition_check",
    "entropy_estimate",
]


class PreconditionError(ValueError):
    """A determinism precondition failed; ``report`` carries the witness."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZetaIntegrityError(ArithmeticError):
    """Periodic-point counts came out non-integral, negative or inconsistent."""


# -- brute force ------------------------------------------------------------------


def _step_set(a, configs, letter):
    out = set()
    kinds, matched = a._edge_kind, a.matched
    for q, stack in configs:
        for e, dst in a._out.get((q, letter), ()):
            k = kinds[e]
            if k == CALL:
                out.add((dst, stack + (e,)))
            elif k == RETURN:
                if stack:
                    if (stack[-1], e) in matched:
                        out.add((dst, stack[:-1]))
                else:
                    out.add((dst, stack))
            else:
                out.add((dst, stack))
    return out


def _necklaces(a, n, first, depth, collect):
    """Periodic necklace classes of length ``n`` whose least letter is ``first``.

    Prenecklaces are generated in the FKM order and pruned as soon as the
    prefix has no run.  Yields ``(representative, number_of_rotations)``.
    """
    letters = a.letters
    k = len(letters)
    w = [0] * (n + 1)
    w[1] = first
    start = _step_set(a, {(q, ()) for q in a.states}, letters[first])
    found = []

    def rec(t, p, configs):
        if t > n:
            if n % p == 0:
                u = tuple(letters[i] for i in w[1:])
                if is_periodic_pattern(a, u, depth=depth):
                    found.append((u, p) if collect else p)
            return
        for j in range(w[t - p], k):
            w[t] = j
            nxt = _step_set(a, configs, letters[j])
            if nxt:
                rec(t + 1, p if j == w[t - p] else t, nxt)

    if start:
        rec(2, 1, start)
    return found


def _necklace_task(args):
    a, n, first, depth, collect = args
    return _necklaces(a, n, first, depth, collect)


def _gather(a, n, depth, collect, workers):
    tasks = [(a, n, j, depth, collect) for j in range(len(a.letters))]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_necklace_task, tasks))
    else:
        parts = [_necklace_task(t) for t in tasks]
    return [x for part in parts for x in part]


def pn_bruteforce(a, n, workers=1, depth=None):
    """Number of points of period ``n``: words ``u`` of length ``n`` with ``u^inf`` in the shift.

    One periodicity check per necklace class; the class contributes its
    number of distinct rotations.  ``workers > 1`` splits the classes by
    least letter over processes (the sum does not depend on the split).
    """
    if n < 1:
        raise ValueError("period must be positive")
    return sum(_gather(a, n, depth, False, workers))


def periodic_patterns(a, n, workers=1):
    """All periodic patterns of length ``n``, sorted lexicographically."""
    out = set()
    for u, p in _gather(a, n, None, True, workers):
        out.update(u[k:] + u[:k] for k in range(p))
    return sorted(out)


def zeta_bruteforce(a, cap, variables="uni", workers=1):
    """``exp(sum_n P_n / n)`` with ``P_n`` the (commutative) sum of periodic patterns of length ``n``."""
    if _variables(variables) == "uni":
        logz = [0] + [Fraction(pn_bruteforce(a, n, workers), n) for n in range(1, cap + 1)]
        return TruncatedSeries(logz, cap).exp()
    total = MultiSeries.zero(a.letters, cap)
    for n in range(1, cap + 1):
        pn = MultiSeries.zero(a.letters, cap)
        for u, p in _gather(a, n, None, True, workers):
            pn = pn + monomial_series(a, u, cap, "multi") * p
        total = total + pn * Fraction(1, n)
    return total.exp()


class PeriodicCountTable(dict):
    """``{n: p_n}``; construction checks integrality and orbit divisibility."""

    def __init__(self, counts):
        super().__init__(counts)
        for n, p in self.items():
            if not isinstance(p, int) or p < 0:
                raise ZetaIntegrityError("p_%d = %s is not a nonnegative integer" % (n, p))
        self.orbits()

    def orbits(self):
        """Number of orbits of least period ``d`` for every ``d`` in the table."""
        out = {}
        for d in sorted(self):
            divisors = [e for e in range(1, d + 1) if d % e == 0]
            if any(e not in self for e in divisors):
                continue
            s = sum(_mobius(d // e) * self[e] for e in divisors)
            if s % d or s < 0:
                raise ZetaIntegrityError(
                    "periodic counts violate orbit divisibility at n = %d" % d
                )
            out[d] = s // d
        return out


def _mobius(n):
    result, m, f = 1, n, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            result = -result
        f += 1
    return -result if m > 1 else result


def counts_from_zeta(zeta):
    """Recover ``p_n = n [z^n] log zeta`` and validate them."""
    if zeta.constant != 1:
        raise ZetaIntegrityError("a zeta function has constant term 1")
    log = zeta.log()
    counts = {}
    for n in range(1, zeta.cap + 1):
        p = Fraction(log[n]) * n
        if p.denominator != 1:
            raise ZetaIntegrityError("p_%d = %s is not an integer" % (n, p))
        counts[n] = int(p)
    return PeriodicCountTable(counts)


# -- exterior powers and the determinant route -------------------------------------


def permutation_sign(images, order):
    """Sign of the permutation sorting ``images`` by position in ``order``."""
    rank = [order.index(x) for x in images]
    inv = sum(1 for i in range(len(rank)) for j in range(i + 1, len(rank)) if rank[i] > rank[j])
    return -1 if inv % 2 else 1


def _subsets(states, ell):
    return list(combinations(states, ell))


def exterior_power(a, kind, ell, cap, variables="uni", orientation="forward", method="product"):
    """The signed ``ell``-subset matrix of the language ``kind``.

    Entry ``(P, R)`` sums, over words acting as a bijection from ``P`` onto
    ``R``, the sign of that bijection times the word's monomial.

    ``method='product'`` reads it off the language matrix of the
    ``ell``-fold synchronized product automaton (any cap).
    ``method='enumerate'`` enumerates the words up to length ``cap`` and
    computes each word's partial action (forward: start to end; reverse:
    end to start), rejecting words with more than one run.
    """
    kind = HKind(kind)
    if not 1 <= ell <= len(a.states):
        raise ValueError("exterior power index must be between 1 and |Q|")
    if orientation not in ("forward", "reverse"):
        raise ValueError("orientation is 'forward' or 'reverse'")
    index = _subsets(a.states, ell)
    if method == "product":
        prod, _ = product_automaton(a, ell)
        hm = h_matrix(prod, kind, cap, variables)
        like = hm.rows[0][0]
        out = SeriesMatrix.zeros(index, like)
        for src in index:
            key = "|".join(src)
            for dst in index:
                acc = like.zero_like()
                for tau in permutations(dst):
                    entry = hm[key, "|".join(tau)]
                    if entry:
                        sign = permutation_sign(tau, a.states)
                        acc = acc + entry if sign > 0 else acc - entry
                out[src, dst] = acc
        return out
    if method != "enumerate":
        raise ValueError("method is 'product' or 'enumerate'")
    like = monomial_series(a, (), cap, variables).zero_like()
    out = SeriesMatrix.zeros(index, like)
    reverse = orientation == "reverse"
    for u, table in iter_shaped_words(a, kind, cap):
        action = {}
        for (p, q, _), n in table.items():
            src, dst = (q, p) if reverse else (p, q)
            if n > 1 or src in action:
                raise PreconditionError(
                    "word %s has several runs %s state %s; the automaton is not H-%sdeterministic"
                    % (" ".join(u), "into" if reverse else "from", src, "co" if reverse else "")
                )
            action[src] = dst
        mono = monomial_series(a, u, cap, variables)
        for sub in index:
            if not all(s in action for s in sub):
                continue
            img = tuple(action[s] for s in sub)
            if len(set(img)) < ell:
                continue
            sign = permutation_sign(img, a.states)
            target = tuple(sorted(img, key=a.states.index))
            key = (target, sub) if reverse else (sub, target)
            out[key] = out[key] + mono if sign > 0 else out[key] - mono
    return out


def _bowen_product(matrices):
    """``prod_ell det(I - M_ell)^((-1)^ell)`` for ``M_1, M_2, ...``."""
    result = None
    for ell, m in enumerate(matrices, 1):
        like = m.rows[0][0]
        d = det(SeriesMatrix.identity(m.index, like) - m)
        factor = d.inverse() if ell % 2 else d
        result = factor if result is None else result * factor
    return result


def _require_reduced(a_left, a_right, check_len):
    rep = check_h_determinism(a_left, HKind.CStarMc, check_len)
    if not rep.passed:
        raise PreconditionError(
            "left presentation is not C*Mc-deterministic (%s); supply a left-reduced automaton" % rep,
            rep,
        )
    rep = check_h_codeterminism(a_right, HKind.MrPlusC, check_len)
    if not rep.passed:
        raise PreconditionError(
            "right presentation is not (Mr+C)-codeterministic (%s); supply a right-reduced automaton"
            % rep,
            rep,
        )
    if a_left.alphabet != a_right.alphabet:
        raise ValueError("left and right presentations must share one pushdown alphabet")


def zeta_det_route(a_left, a_right=None, cap=12, variables="uni", check_len=6):
    """Zeta function as an alternating product of exterior-power determinants."""
    a_right = a_left if a_right is None else a_right
    _require_reduced(a_left, a_right, check_len)
    left = [
        exterior_power(a_left, HKind.CStarMc, ell, cap, variables, "forward")
        for ell in range(1, len(a_left.states) + 1)
    ]
    right = [
        exterior_power(a_right, HKind.MrPlusC, ell, cap, variables, "reverse")
        for ell in range(1, len(a_right.states) + 1)
    ]
    return _bowen_product(left) * _bowen_product(right)


# -- pattern graphs and the substitution route ---------------------------------------


def _pattern_name(pattern, states):
    pairs = sorted(pattern, key=lambda pq: (states.index(pq[0]), states.index(pq[1])))
    return "{%s}" % ",".join("%s>%s" % pq for pq in pairs)


@dataclass
class PatternAlphabet:
    """Letters standing for membership patterns, and the graph they label.

    ``patterns[name]`` is the set of state pairs; ``series[name]`` counts
    the words with exactly that pattern; ``edges`` holds ``(p, name, q)``
    for every ``(p, q)`` in the pattern.
    """

    states: tuple
    kind: HKind
    patterns: dict
    series: dict = field(default_factory=dict)

    @property
    def letters(self):
        return tuple(self.patterns)

    @property
    def edges(self):
        return [(p, name, q) for name, pat in self.patterns.items() for p, q in sorted(pat)]

    def is_deterministic(self):
        return all(len({p for p, _ in pat}) == len(pat) for pat in self.patterns.values())

    def is_codeterministic(self):
        return all(len({q for _, q in pat}) == len(pat) for pat in self.patterns.values())


def pattern_graph(a, kind, cap, variables="uni", orientation=None, method="product"):
    """Build the pattern alphabet of ``kind`` from the pattern series up to ``cap``."""
    kind = HKind(kind)
    if method == "product":
        pats = pattern_series(a, kind, cap, variables, orientation)
    elif method == "enumerate":
        pats = pattern_counts(a, kind, cap, variables)
    else:
        raise ValueError("method is 'product' or 'enumerate'")
    order = sorted(
        pats,
        key=lambda s: (len(s), sorted((a.states.index(p), a.states.index(q)) for p, q in s)),
    )
    names = {s: _pattern_name(s, a.states) for s in order}
    return PatternAlphabet(
        a.states,
        kind,
        {names[s]: s for s in order},
        {names[s]: pats[s] for s in order},
    )


def pattern_exterior_power(g, ell, cap, orientation="forward"):
    """Signed ``ell``-subset matrix of the pattern graph, entries over the pattern letters."""
    reverse = orientation == "reverse"
    letters = g.letters
    like = MultiSeries.zero(letters, cap)
    states = tuple(g.states)
    index = _subsets(states, ell)
    m = SeriesMatrix.zeros(index, like)
    for name, pat in g.patterns.items():
        x = MultiSeries.letter(letters, cap, name)
        action = {(q if reverse else p): (p if reverse else q) for p, q in pat}
        for sub in index:
            if not all(s in action for s in sub):
                continue
            img = tuple(action[s] for s in sub)
            if len(set(img)) < ell:
                continue
            target = tuple(sorted(img, key=states.index))
            key = (target, sub) if reverse else (sub, target)
            m[key] = m[key] + x if permutation_sign(img, states) > 0 else m[key] - x
    return m


def sofic_zeta(g, cap, orientation="forward"):
    """Multivariate zeta function of the shift presented by the pattern graph.

    Uses the signed subset matrices of the letter actions; needs a
    letter-deterministic graph (forward) or letter-codeterministic graph
    (reverse).
    """
    if orientation == "reverse" and not g.is_codeterministic():
        raise PreconditionError("pattern graph is not letter-codeterministic")
    if orientation != "reverse" and not g.is_deterministic():
        raise PreconditionError("pattern graph is not letter-deterministic")
    if not g.patterns:
        return MultiSeries.one((), cap)
    mats = [pattern_exterior_power(g, ell, cap, orientation) for ell in range(1, len(g.states) + 1)]
    return _bowen_product(mats)


def zeta_subst_route(a_left, a_right=None, cap=12, variables="uni", check_len=6):
    """Zeta function via pattern graphs: ``theta_H(Z(S_H)) * theta_H'(Z(S_H'))``."""
    a_right = a_left if a_right is None else a_right
    _require_reduced(a_left, a_right, check_len)
    target = monomial_series(a_left, (), cap, variables)
    result = target
    for a, kind, orient in (
        (a_left, HKind.CStarMc, "forward"),
        (a_right, HKind.MrPlusC, "reverse"),
    ):
        g = pattern_graph(a, kind, cap, variables, orient)
        z = sofic_zeta(g, cap, orient)
        result = result * substitute(z, g.series, like=target)
    return result


# -- periodic patterns of the H-decomposition ---------------------------------------------


def in_periodic_h(a, u, kind, max_arc=None):
    """Is ``u^inf`` the label of a bi-infinite path of words of ``kind``?

    Nodes are ``(offset mod |u|, state)``; an arc joins ``(i, p)`` to
    ``((i + L) mod |u|, q)`` when the length-``L`` factor of ``u^inf`` at
    offset ``i`` is in ``H[p, q]`` (``L <= |u|(|u|+2)`` by default).  True
    iff the graph has a directed cycle.
    """
    from .automaton import _initial_table, _step_counts

    kind = HKind(kind)
    u = tuple(u)
    n = len(u)
    if n == 0:
        raise ValueError("a periodic pattern must be nonempty")
    if max_arc is None:
        max_arc = n * (n + 2)
    alphabet = a.alphabet
    succ = {}
    for i in range(n):
        table = _initial_table(a)
        factor = ()
        for length in range(1, max_arc + 1):
            letter = u[(i + length - 1) % n]
            factor += (letter,)
            if not shape_prefix_ok(alphabet, factor, kind):
                break
            table = _step_counts(a, table, letter)
            if not table:
                break
            if has_shape(alphabet, factor, kind):
                j = (i + length) % n
                for p, q, _ in table:
                    succ.setdefault((i, p), set()).add((j, q))
    return _has_cycle(succ)


def _has_cycle(succ):
    nodes = set(succ)
    for targets in succ.values():
        nodes |= targets
    indeg = {v: 0 for v in nodes}
    for targets in succ.values():
        for t in targets:
            indeg[t] += 1
    ready = [v for v, d in indeg.items() if d == 0]
    removed = 0
    while ready:
        v = ready.pop()
        removed += 1
        for t in succ.get(v, ()):
            indeg[t] -= 1
            if indeg[t] == 0:
                ready.append(t)
    return removed < len(nodes)


@dataclass
class DecompositionReport:
    max_len: int
    checked: int = 0
    periodic: int = 0
    in_cstar_mc: int = 0
    in_mr_plus_c: int = 0
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        text = (
            "%s decomposition (words up to length %d): %d words, %d periodic = %d (C*Mc) + %d (Mr+C)"
            % (verdict, self.max_len, self.checked, self.periodic, self.in_cstar_mc, self.in_mr_plus_c)
        )
        for u, why in self.violations[:5]:
            text += "\n  %s: %s" % (" ".join(u), why)
        return text


def decomposition_check(a, max_len):
    """Check that periodic patterns split disjointly between ``C*Mc`` and ``Mr+C``."""
    from itertools import product as words_of

    rep = DecompositionReport(max_len)
    for n in range(1, max_len + 1):
        for u in words_of(a.letters, repeat=n):
            rep.checked += 1
            in_x = is_periodic_pattern(a, u)
            left = in_periodic_h(a, u, HKind.CStarMc)
            right = in_periodic_h(a, u, HKind.MrPlusC)
            rep.periodic += in_x
            rep.in_cstar_mc += left
            rep.in_mr_plus_c += right
            if left and right:
                rep.violations.append((u, "periodic for both C*Mc and Mr+C"))
            elif in_x != (left or right):
                rep.violations.append(
                    (u, "periodic in X: %s, in the decomposition: %s" % (in_x, left or right))
                )
    return rep


def entropy_estimate(table):
    """Growth diagnostics ``[(n, p_n ** (1/n))]`` in increasing ``n``."""
    if not table:
        raise ValueError("empty periodic count table")
    return [(n, float(p) ** (1.0 / n) if p else 0.0) for n, p in sorted(table.items())]
