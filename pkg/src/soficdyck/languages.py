"""Language matrices of a Dyck automaton as truncated series.

``D`` (Dyck words) and ``C`` (prime Dyck words) come from a coupled
degree-by-degree recurrence on first letters; the letter matrices ``Mc``,
``Mr`` and the composites ``C*Mc``, ``Mr+C``, ``Mc+C``, ``Mr C*`` are built
from them.  Series coefficients count admissible paths, which equals the
number of words whenever runs are unique (every built-in automaton).

Word-level oracles (``membership``, ``pattern_counts``) decide the same
languages by enumeration and are used to cross-check the recurrences.
"""

from collections import defaultdict
from dataclasses import dataclass
from itertools import product

from .automaton import DyckAutomaton, iter_shaped_words, run_table
from .series import MultiSeries, SeriesMatrix, TruncatedSeries, matrix_star
from .words import HKind, has_shape, word

__all__ = [
    "HKind",
    "letter_series",
    "monomial_series",
    "dyck_and_prime_matrices",
    "letter_matrices",
    "h_matrix",
    "membership",
    "h_words",
    "CircularityReport",
    "circularity_check",
    "find_circularity_witness",
    "pattern_counts",
    "pattern_series",
    "product_automaton",
]


def _variables(variables):
    if variables in ("uni", "univariate", False, None):
        return "uni"
    if variables in ("multi", "multivariate", True):
        return "multi"
    raise ValueError("variables must be 'uni' or 'multi', got %r" % (variables,))


def letter_series(a, cap, variables="uni"):
    """``{letter: series}``: ``z`` for every letter, or the letter itself."""
    if _variables(variables) == "uni":
        z = TruncatedSeries.z(cap)
        return {x: z for x in a.letters}
    return {x: MultiSeries.letter(a.letters, cap, x) for x in a.letters}


def monomial_series(a, u, cap, variables="uni"):
    """The commutative image of the single word ``u``."""
    if _variables(variables) == "uni":
        return TruncatedSeries([0] * len(u) + [1], cap)
    mono = defaultdict(int)
    for x in u:
        mono[x] += 1
    return MultiSeries(a.letters, cap, {tuple(sorted(mono.items())): 1} if u else {(): 1})


def _zero(a, cap, variables):
    if _variables(variables) == "uni":
        return TruncatedSeries.zero(cap)
    return MultiSeries.zero(a.letters, cap)


def dyck_and_prime_matrices(a, cap, variables="uni"):
    """Return ``(D, C)`` as series matrices over the states of ``a``.

    ``D = I + sum_(p,i,q) i D[q,.] + sum_((p,x,q),(r,y,s)) x D[q,r] y D[s,.]``
    is solved one degree at a time; then
    ``C[p,s] = sum_(p,i,s) i + sum_((p,x,q),(r,y,s)) x D[q,r] y``.
    """
    if cap < 2:
        # letter weights live in degrees 1 and 2
        d, c = dyck_and_prime_matrices(a, 2, variables)
        return d.map(lambda x: x.truncate(cap)), c.map(lambda x: x.truncate(cap))
    like = _zero(a, cap, variables)
    xs = letter_series(a, cap, variables)
    states = a.states
    pos = {q: k for k, q in enumerate(states)}
    n = len(states)
    kinds = a._edge_kind
    internal = [
        (pos[p], xs[lab].component(1), pos[q])
        for (p, lab, q), k in zip(a.edges, kinds)
        if k == 0
    ]
    pairs = []
    for c, r in sorted(a.matched):
        p, x, q = a.edges[c]
        r_src, y, s = a.edges[r]
        weight = (xs[x] * xs[y]).component(2)
        pairs.append((pos[p], pos[q], pos[r_src], pos[s], weight))

    cz, cadd, cmul, cnz = like._czero, like._cadd, like._cmul, like._cnz
    one = like.one_like().component(0)
    # comps[d][i][j]: degree-d component of D[i, j]
    comps = []
    for d in range(cap + 1):
        layer = [[cz() for _ in range(n)] for _ in range(n)]
        if d == 0:
            for i in range(n):
                layer[i][i] = one
        if d >= 1:
            for i, w, j in internal:
                src = comps[d - 1][j]
                row = layer[i]
                for t in range(n):
                    if cnz(src[t]):
                        row[t] = cadd(row[t], cmul(w, src[t]))
        if d >= 2:
            for p, q, r, s, w in pairs:
                row = layer[p]
                for k in range(d - 1):
                    left = comps[k][q][r]
                    if not cnz(left):
                        continue
                    lw = cmul(w, left)
                    src = comps[d - 2 - k][s]
                    for t in range(n):
                        if cnz(src[t]):
                            row[t] = cadd(row[t], cmul(lw, src[t]))
        comps.append(layer)

    def build(entry):
        return SeriesMatrix(
            states, [[like._new([entry(d, i, j) for d in range(cap + 1)]) for j in range(n)] for i in range(n)]
        )

    dmat = build(lambda d, i, j: comps[d][i][j])

    c_comps = [[[cz() for _ in range(n)] for _ in range(n)] for _ in range(cap + 1)]
    if cap >= 1:
        for i, w, j in internal:
            c_comps[1][i][j] = cadd(c_comps[1][i][j], w)
    for p, q, r, s, w in pairs:
        for k in range(cap - 1):
            left = comps[k][q][r]
            if cnz(left):
                c_comps[k + 2][p][s] = cadd(c_comps[k + 2][p][s], cmul(w, left))
    cmat = build(lambda d, i, j: c_comps[d][i][j])
    return dmat, cmat


def letter_matrices(a, cap, variables="uni"):
    """``(Mc, Mr)``: call and return letters on the edges, as series matrices."""
    like = _zero(a, cap, variables)
    xs = letter_series(a, cap, variables)
    mc = SeriesMatrix.zeros(a.states, like)
    mr = SeriesMatrix.zeros(a.states, like)
    for p, lab, q in a.edges:
        if a.alphabet.is_call(lab):
            mc[p, q] = mc[p, q] + xs[lab]
        elif a.alphabet.is_return(lab):
            mr[p, q] = mr[p, q] + xs[lab]
    return mc, mr


def h_matrix(a, kind, cap, variables="uni"):
    """The series matrix of the language ``kind`` (see :class:`HKind`)."""
    kind = HKind(kind)
    if kind in (HKind.Mc, HKind.Mr):
        mc, mr = letter_matrices(a, cap, variables)
        return mc if kind is HKind.Mc else mr
    dmat, cmat = dyck_and_prime_matrices(a, cap, variables)
    if kind is HKind.D:
        return dmat
    if kind is HKind.C:
        return cmat
    mc, mr = letter_matrices(a, cap, variables)
    if kind is HKind.CStarMc:
        return matrix_star(cmat) @ mc
    if kind is HKind.MrPlusC:
        return mr + cmat
    if kind is HKind.McPlusC:
        return mc + cmat
    return mr @ matrix_star(cmat)


def membership(a, u, kind):
    """The set of pairs ``(p, q)`` with ``u`` in the language ``kind`` from ``p`` to ``q``.

    ``D`` contains the empty word (pattern ``{(q, q)}``); every other kind
    contains only nonempty words.
    """
    kind = HKind(kind)
    u = word(a.alphabet, u)
    if not has_shape(a.alphabet, u, kind):
        return frozenset()
    return frozenset((p, q) for p, q, _ in run_table(a, u))


def h_words(a, kind, max_len):
    """``{(p, q): set of words}`` for all words of the language up to ``max_len``."""
    out = defaultdict(set)
    for u, table in iter_shaped_words(a, kind, max_len):
        for p, q, _ in table:
            out[p, q].add(u)
    return dict(out)


# -- circularity ----------------------------------------------------------------


@dataclass(frozen=True)
class CircularityReport:
    kind: str
    max_total_len: int
    witness: tuple = None

    @property
    def passed(self):
        return self.witness is None

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        text = "%s circularity (kind %s, total length <= %d)" % (verdict, self.kind, self.max_total_len)
        if not self.passed:
            xs, p, s, ys = self.witness
            show = lambda ws: " | ".join(" ".join(w) for w in ws)
            text += ": x = %s, p = %s, s = %s, y = %s" % (
                show(xs),
                " ".join(p) or "()",
                " ".join(s),
                show(ys),
            )
        return text


def _closed_paths(hsets, states, max_total):
    """Yield closed word paths ``(x_1, ..., x_n)`` with total length <= max_total."""
    out_edges = defaultdict(list)
    for (p, q), ws in hsets.items():
        for w in ws:
            out_edges[p].append((w, q))
    for lst in out_edges.values():
        lst.sort(key=lambda wq: (len(wq[0]), wq[0], wq[1]))
    found = set()
    for p0 in states:
        stack = [(p0, (), 0)]
        while stack:
            q, xs, total = stack.pop()
            if xs and q == p0:
                found.add(xs)
            for w, q2 in out_edges.get(q, ()):
                if total + len(w) <= max_total:
                    stack.append((q2, xs + (w,), total + len(w)))
    return sorted(found, key=lambda xs: (sum(map(len, xs)), xs))


def _factorizations(w, pieces, states):
    """All word sequences ``(y_1..y_m)`` with product ``w`` forming a closed path."""
    n = len(w)
    results = []

    def rec(pos, ys, reach):
        if pos == n:
            if any(q0 == q for q0, q in reach):
                results.append(ys)
            return
        for end in range(pos + 1, n + 1):
            piece = w[pos:end]
            arcs = pieces.get(piece)
            if not arcs:
                continue
            nxt = {(q0, q2) for q0, q in reach for (q1, q2) in arcs if q1 == q}
            if nxt:
                rec(end, ys + (piece,), nxt)

    rec(0, (), {(q, q) for q in states})
    return results


def find_circularity_witness(hsets, states, max_total_len):
    """Search for a violation of unique cyclic factorization.

    ``hsets`` maps ``(p, q)`` to a set of nonempty words (tuples).  A
    witness is ``(x, p, s, y)`` with ``x_1 = p s``, ``s`` nonempty,
    ``s x_2 ... x_n p = y_1 ... y_m`` along closed paths, and not
    (``p`` empty and ``y == x``).  The least witness by (total length, x, y)
    is returned, or ``None``.
    """
    pieces = defaultdict(set)
    for (p, q), ws in hsets.items():
        for w in ws:
            if not w:
                raise ValueError("circularity is defined for nonempty words only")
            pieces[tuple(w)].add((p, q))
    best = None
    for xs in _closed_paths({k: {tuple(w) for w in v} for k, v in hsets.items()}, states, max_total_len):
        total = sum(map(len, xs))
        if best is not None and total > sum(map(len, best[0])):
            break
        x1 = xs[0]
        for cut in range(len(x1)):
            p, s = x1[:cut], x1[cut:]
            w = s + tuple(c for x in xs[1:] for c in x) + p
            for ys in _factorizations(w, pieces, states):
                if not p and ys == xs:
                    continue
                cand = (xs, p, s, ys)
                if best is None or (total, xs, ys) < (sum(map(len, best[0])), best[0], best[3]):
                    best = cand
    return best


def circularity_check(a, kind, max_total_len):
    """Bounded search for a circularity violation among the words of ``kind``."""
    kind = HKind(kind)
    witness = find_circularity_witness(h_words(a, kind, max_total_len), a.states, max_total_len)
    return CircularityReport(kind.value, max_total_len, witness)


# -- membership patterns --------------------------------------------------------


def pattern_counts(a, kind, cap, variables="uni"):
    """``{pattern: series}`` counting words by their exact membership pattern.

    Exhaustive enumeration of the words up to length ``cap``; patterns whose
    series vanishes are omitted.  Desk scale only.
    """
    kind = HKind(kind)
    acc = {}
    for u, table in iter_shaped_words(a, kind, cap):
        pattern = frozenset((p, q) for p, q, _ in table)
        mono = monomial_series(a, u, cap, variables)
        acc[pattern] = acc[pattern] + mono if pattern in acc else mono
    return {s: v for s, v in acc.items() if not v.is_zero()}


def product_automaton(a, k):
    """The ``k``-fold synchronized product: all components read the same word.

    States are ``k``-tuples of states (encoded as ``"p1|p2|..."``); a run of
    the product is a tuple of runs of ``a``, so path counts multiply.
    Returns ``(automaton, decode)`` with ``decode`` mapping ids to tuples.
    """
    if k < 1:
        raise ValueError("product of at least one copy")
    tuples = list(product(a.states, repeat=k))
    enc = {t: "|".join(t) for t in tuples}
    by_label = defaultdict(list)
    for e, (p, lab, q) in enumerate(a.edges):
        by_label[lab].append(e)
    edges, index = [], {}
    for lab in a.letters:
        for combo in product(by_label.get(lab, ()), repeat=k):
            src = tuple(a.edges[e][0] for e in combo)
            dst = tuple(a.edges[e][2] for e in combo)
            index[combo] = len(edges)
            edges.append((enc[src], lab, enc[dst]))
    by_call = defaultdict(list)
    for c, r in a.matched:
        by_call[c].append(r)
    matched = []
    for combo, idx in index.items():
        if not a.alphabet.is_call(a.edges[combo[0]][1]):
            continue
        for rets in product(*(by_call.get(c, ()) for c in combo)):
            labels = {a.edges[r][1] for r in rets}
            if len(labels) == 1:
                matched.append((idx, index[rets]))
    prod = DyckAutomaton(a.alphabet, [enc[t] for t in tuples], edges, matched)
    decode = {v: t for t, v in enc.items()}
    return prod, decode


def _is_partial_function(pairs, by_end):
    seen = set()
    for p, q in pairs:
        key = q if by_end else p
        if key in seen:
            return False
        seen.add(key)
    return True


def pattern_series(a, kind, cap, variables="uni", orientation=None):
    """``{pattern: series}`` by inclusion-exclusion over product automata.

    The series of words lying in every ``H[p, q]`` for ``(p, q)`` in ``T``
    is one entry of the ``|T|``-fold product's language matrix; the exact
    pattern series follow by Moebius inversion over supersets.  With
    ``orientation='forward'`` (resp. ``'reverse'``) only patterns that are
    partial functions on starts (resp. ends) are considered, which is exact
    for H-deterministic (resp. H-codeterministic) automata.
    """
    kind = HKind(kind)
    pairs = [(p, q) for p in a.states for q in a.states]
    subsets = []
    for mask in range(1, 1 << len(pairs)):
        t = tuple(pairs[j] for j in range(len(pairs)) if mask >> j & 1)
        if orientation is not None and not _is_partial_function(t, orientation == "reverse"):
            continue
        subsets.append(frozenset(t))
    by_size = defaultdict(list)
    for t in subsets:
        by_size[len(t)].append(t)
    inter = {}
    for size, ts in by_size.items():
        prod, _ = product_automaton(a, size)
        hm = h_matrix(prod, kind, cap, variables)
        for t in ts:
            ordered = sorted(t, key=lambda pq: (a.states.index(pq[0]), a.states.index(pq[1])))
            src = "|".join(p for p, _ in ordered)
            dst = "|".join(q for _, q in ordered)
            inter[t] = hm[src, dst]
    out = {}
    for s in subsets:
        acc = inter[s]
        for t in subsets:
            if len(t) > len(s) and s < t:
                acc = acc - inter[t] if (len(t) - len(s)) % 2 else acc + inter[t]
        if not acc.is_zero():
            out[s] = acc
    return out
