"""Dyck automata: labeled graphs with matched call/return edge pairs.

Runs are simulated with a stack of call-edge indices.  Reading a call edge
pushes it; reading a return edge pops the top call edge and requires the
pair to be matched; a return read with an empty stack is unconstrained
(its call, if any, lies outside the word).  A word has a run exactly when
it labels an admissible path.
"""

from collections import defaultdict
from dataclasses import dataclass
import json

from .words import (
    CALL,
    RETURN,
    HKind,
    PushdownAlphabet,
    has_shape,
    shape_prefix_ok,
    word,
)

__all__ = [
    "AutomatonError",
    "DyckAutomaton",
    "DeterminismReport",
    "validate",
    "admissible_runs",
    "run_table",
    "is_admissible_word",
    "count_runs",
    "run_paths",
    "StackEquivalenceReport",
    "check_stack_equivalence",
    "is_periodic_pattern",
    "iter_shaped_words",
    "check_h_determinism",
    "check_h_codeterminism",
    "builtin",
    "BUILTIN_NAMES",
    "STANDARD_BUILTINS",
    "to_json",
    "from_json",
    "dumps",
    "loads",
    "load",
]


class AutomatonError(ValueError):
    """Invalid automaton data (the message lists the diagnostics)."""

    def __init__(self, diagnostics):
        if isinstance(diagnostics, str):
            diagnostics = [diagnostics]
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class DyckAutomaton:
    """A finite Dyck automaton.

    ``edges`` is a sequence of ``(from, label, to)`` triples; an edge is
    identified by its position.  ``matched`` holds ``(call_edge,
    return_edge)`` index pairs.  Construction does not validate; call
    :func:`validate` (deserialization always does).
    """

    def __init__(self, alphabet, states, edges, matched=()):
        self.alphabet = alphabet
        self.states = tuple(str(q) for q in states)
        self.edges = tuple((str(p), a, str(q)) for p, a, q in edges)
        self.matched = frozenset((int(c), int(r)) for c, r in matched)
        self._index()

    def _index(self):
        kind = self.alphabet._kind
        self._edge_kind = tuple(kind.get(a) for _, a, _ in self.edges)
        out = defaultdict(list)
        into = defaultdict(list)
        for e, (p, a, q) in enumerate(self.edges):
            out[p, a].append((e, q))
            into[q, a].append((e, p))
        self._out = dict(out)
        self._in = dict(into)

    @property
    def letters(self):
        return self.alphabet.letters

    def state_index(self, q):
        return self.states.index(q)

    def call_edges(self):
        return [e for e, k in enumerate(self._edge_kind) if k == CALL]

    def return_edges(self):
        return [e for e, k in enumerate(self._edge_kind) if k == RETURN]

    def __eq__(self, other):
        if not isinstance(other, DyckAutomaton):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.states == other.states
            and self.edges == other.edges
            and self.matched == other.matched
        )

    __hash__ = None

    def __repr__(self):
        return "DyckAutomaton(states=%r, %d edges, %d matched pairs)" % (
            self.states,
            len(self.edges),
            len(self.matched),
        )

    def reversed(self):
        """Mirror image: edges flipped, call and return letters swapped.

        A word ``u`` labels an admissible path ``p -> q`` here iff its
        reversal labels one ``q -> p`` in the original.
        """
        return DyckAutomaton(
            self.alphabet.reversed(),
            self.states,
            [(q, a, p) for p, a, q in self.edges],
            [(r, c) for c, r in self.matched],
        )


def validate(a):
    """List every violated invariant of ``a`` (empty when valid)."""
    diags = []
    if len(set(a.states)) != len(a.states):
        diags.append("duplicate state ids")
    if not a.states:
        diags.append("an automaton needs at least one state")
    states = set(a.states)
    seen = set()
    for e, (p, lab, q) in enumerate(a.edges):
        if lab not in a.alphabet:
            diags.append("edge %d: label %r outside the alphabet" % (e, lab))
        if p not in states:
            diags.append("edge %d: unknown source state %r" % (e, p))
        if q not in states:
            diags.append("edge %d: unknown target state %r" % (e, q))
        if (p, lab, q) in seen:
            diags.append("edge %d: duplicate edge %r" % (e, (p, lab, q)))
        seen.add((p, lab, q))
    n = len(a.edges)
    for c, r in sorted(a.matched):
        if not (0 <= c < n and 0 <= r < n):
            diags.append("matched pair %r: edge index out of range" % ((c, r),))
            continue
        if not a.alphabet.is_call(a.edges[c][1]):
            diags.append("matched pair %r: first edge %d is not a call edge" % ((c, r), c))
        if not a.alphabet.is_return(a.edges[r][1]):
            diags.append("matched pair %r: second edge %d is not a return edge" % ((c, r), r))
    return diags


# -- run engine -------------------------------------------------------------


def _step_counts(a, table, letter):
    """Advance a ``{(start, state, stack): count}`` table by one letter."""
    out = {}
    get = out.get
    kinds = a._edge_kind
    matched = a.matched
    for (p, q, stack), n in table.items():
        for e, dst in a._out.get((q, letter), ()):
            k = kinds[e]
            if k == CALL:
                key = (p, dst, stack + (e,))
            elif k == RETURN:
                if stack:
                    if (stack[-1], e) not in matched:
                        continue
                    key = (p, dst, stack[:-1])
                else:
                    key = (p, dst, stack)
            else:
                key = (p, dst, stack)
            out[key] = get(key, 0) + n
    return out


def _initial_table(a, starts=None):
    return {(q, q, ()): 1 for q in (a.states if starts is None else starts)}


def run_table(a, u, starts=None):
    """Multiplicities of runs of ``u``: ``{(start, end, residual_stack): count}``.

    The count is the number of distinct admissible paths (edge sequences).
    """
    table = _initial_table(a, starts)
    for letter in u:
        if not table:
            break
        table = _step_counts(a, table, letter)
    return table


def admissible_runs(a, u):
    """Set of ``(start, end, residual_stack)`` over all runs of ``u``."""
    return set(run_table(a, word(a.alphabet, u)))


def is_admissible_word(a, u):
    return bool(run_table(a, word(a.alphabet, u)))


def count_runs(a, u, p, q):
    """Number of admissible paths labeled ``u`` from ``p`` to ``q``."""
    table = run_table(a, word(a.alphabet, u), starts=[p])
    return sum(n for (_, end, _), n in table.items() if end == q)


def run_paths(a, u, start=None, end=None):
    """Explicit admissible paths of ``u`` as ``(start, edge_indices)`` pairs.

    Exponential in the worst case; meant for witnesses on short words.
    """
    u = word(a.alphabet, u)
    partial = [(p, p, (), ()) for p in (a.states if start is None else [start])]
    for letter in u:
        nxt = []
        for p, q, stack, path in partial:
            for e, dst in a._out.get((q, letter), ()):
                k = a._edge_kind[e]
                if k == CALL:
                    nxt.append((p, dst, stack + (e,), path + (e,)))
                elif k == RETURN:
                    if stack and (stack[-1], e) not in a.matched:
                        continue
                    nxt.append((p, dst, stack[:-1], path + (e,)))
                else:
                    nxt.append((p, dst, stack, path + (e,)))
        partial = nxt
    return [(p, path) for p, q, _, path in partial if end is None or q == end]


def _violates_factor_condition(a, labels, path):
    """Does the last edge of ``path`` close a Dyck factor with an unmatched call?

    Checked directly: for every earlier call edge whose factor up to the
    last edge is labeled by a Dyck word, the pair must be matched.
    """
    j = len(path) - 1
    if a._edge_kind[path[j]] != RETURN:
        return False
    kind = a.alphabet.kind
    b = 0
    for i in range(j - 1, -1, -1):
        if b == 0 and a._edge_kind[path[i]] == CALL:
            if (path[i], path[j]) not in a.matched:
                return True
        b += kind(labels[i])
        if b > 0:
            # every longer middle segment has a suffix of positive balance
            return False
    return False


@dataclass(frozen=True)
class StackEquivalenceReport:
    max_length_checked: int
    words_checked: int
    witness: tuple = None

    @property
    def passed(self):
        return self.witness is None

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        text = "%s stack-equivalence (%d words up to length %d)" % (
            verdict,
            self.words_checked,
            self.max_length_checked,
        )
        if not self.passed:
            u, stack_only, naive_only = self.witness
            text += ": word %s, stack-only paths %r, factor-only paths %r" % (
                " ".join(u),
                sorted(stack_only),
                sorted(naive_only),
            )
        return text


def check_stack_equivalence(a, max_len=8):
    """Compare stack-simulated runs with the factor condition on every word up to ``max_len``.

    Both sides produce the set of admissible ``(start, edge_path)`` pairs.
    The factor-condition side never touches a stack.
    """
    letters = a.letters
    checked = 0

    def rec(u, naive):
        nonlocal checked
        if u:
            checked += 1
            stack_side = set(run_paths(a, u))
            if stack_side != naive:
                return (u, stack_side - naive, naive - stack_side)
        if len(u) == max_len or not naive:
            return None
        for letter in letters:
            ext = u + (letter,)
            nxt = set()
            for p, path in naive:
                q = a.edges[path[-1]][2] if path else p
                for e, _ in a._out.get((q, letter), ()):
                    cand = path + (e,)
                    if not _violates_factor_condition(a, ext, cand):
                        nxt.add((p, cand))
            found = rec(ext, nxt)
            if found:
                return found
        return None

    witness = rec((), {(p, ()) for p in a.states})
    return StackEquivalenceReport(max_len, checked, witness)


# -- periodic patterns --------------------------------------------------------


def default_stack_depth(n):
    return n * (n + 2)


def is_periodic_pattern(a, u, depth=None, max_sets=10_000):
    """Decide whether the bi-infinite repetition of ``u`` lies in the shift.

    Iterates the set of configurations reached after reading ``u``,
    ``u u``, ... from every state with an empty stack.  Stacks are cut to
    their top ``depth`` entries (default ``|u|(|u|+2)``); deeper calls are
    never popped inside the repetition.  True iff the sequence of sets
    revisits a value before it ever becomes empty.
    """
    u = word(a.alphabet, u)
    if not u:
        raise ValueError("a periodic pattern must be nonempty")
    if depth is None:
        depth = default_stack_depth(len(u))
    out_map, kinds, matched = a._out, a._edge_kind, a.matched
    current = frozenset((q, ()) for q in a.states)
    seen = {current}
    while True:
        configs = current
        for letter in u:
            nxt = set()
            for q, stack in configs:
                for e, dst in out_map.get((q, letter), ()):
                    k = kinds[e]
                    if k == CALL:
                        nxt.add((dst, stack + (e,)))
                    elif k == RETURN:
                        if stack:
                            if (stack[-1], e) in matched:
                                nxt.add((dst, stack[:-1]))
                        else:
                            nxt.add((dst, stack))
                    else:
                        nxt.add((dst, stack))
            if not nxt:
                return False
            configs = nxt
        current = frozenset(
            (q, stack[-depth:] if len(stack) > depth else stack) for q, stack in configs
        )
        if current in seen:
            return True
        seen.add(current)
        if len(seen) > max_sets:
            raise RuntimeError(
                "periodicity oracle exceeded %d configuration sets for %r" % (max_sets, u)
            )


# -- H-language words and determinism ------------------------------------------


def iter_shaped_words(a, kind, max_len, min_len=1):
    """Yield ``(u, run_table)`` for every word of shape ``kind`` with a run.

    Depth-first over prefixes, pruned when the prefix has no run or cannot
    extend to the shape.  Words come out in length-lexicographic order per
    branch (alphabet order), lengths ``min_len..max_len``.
    """
    kind = HKind(kind)
    alphabet = a.alphabet
    letters = alphabet.letters

    def rec(prefix, table):
        if len(prefix) >= min_len and has_shape(alphabet, prefix, kind):
            yield prefix, table
        if len(prefix) == max_len:
            return
        for letter in letters:
            ext = prefix + (letter,)
            if not shape_prefix_ok(alphabet, ext, kind):
                continue
            t = _step_counts(a, table, letter)
            if t:
                yield from rec(ext, t)

    yield from rec((), _initial_table(a))


@dataclass(frozen=True)
class DeterminismReport:
    property: str
    kind: HKind
    max_length_checked: int
    witness: tuple = None

    @property
    def passed(self):
        return self.witness is None

    def __str__(self):
        verdict = "PASS" if self.passed else "FAIL"
        text = "%s %s (kind %s, words up to length %d)" % (
            verdict,
            self.property,
            self.kind,
            self.max_length_checked,
        )
        if not self.passed:
            u, r1, r2 = self.witness
            text += ": word %s has runs %r and %r" % (" ".join(u), r1, r2)
        return text


def _check(a, kind, max_len, by_end):
    name = "H-codeterministic" if by_end else "H-deterministic"
    kind = HKind(kind)
    for u, table in iter_shaped_words(a, kind, max_len):
        per = defaultdict(int)
        for (p, q, _), n in table.items():
            per[q if by_end else p] += n
        for s in a.states:
            if per[s] > 1:
                if by_end:
                    paths = run_paths(a, u, end=s)
                else:
                    paths = run_paths(a, u, start=s)
                return DeterminismReport(name, kind, max_len, (u, paths[0], paths[1]))
    return DeterminismReport(name, kind, max_len)


def check_h_determinism(a, kind=HKind.CStarMc, max_len=6):
    """At most one run from each start state for every H-word up to ``max_len``."""
    return _check(a, kind, max_len, by_end=False)


def check_h_codeterminism(a, kind=HKind.MrPlusC, max_len=6):
    """At most one run into each end state for every H-word up to ``max_len``."""
    return _check(a, kind, max_len, by_end=True)


# -- built-in examples ----------------------------------------------------------

_BRACKETS = [("(", ")"), ("[", "]"), ("{", "}"), ("<", ">")]


def _bracket_pairs(k):
    if k <= len(_BRACKETS):
        return _BRACKETS[:k]
    return [("a%d" % j, "b%d" % j) for j in range(1, k + 1)]


def _one_state_dyck(k, n_internal):
    pairs = _bracket_pairs(k)
    internal = ["i"] if n_internal == 1 else ["i%d" % j for j in range(1, n_internal + 1)]
    alphabet = PushdownAlphabet([c for c, _ in pairs], [r for _, r in pairs], internal)
    edges = [("1", c, "1") for c, _ in pairs] + [("1", r, "1") for _, r in pairs]
    edges += [("1", i, "1") for i in internal]
    matched = [(j, k + j) for j in range(k)]
    return DyckAutomaton(alphabet, ["1"], edges, matched)


def _fig2(call=("a", "a'"), ret=("b", "b'"), internal="i"):
    alphabet = PushdownAlphabet(call, ret, [internal])
    edges = [
        ("1", call[0], "1"),
        ("1", call[1], "1"),
        ("1", ret[0], "1"),
        ("1", ret[1], "1"),
        ("1", internal, "2"),
        ("2", internal, "1"),
    ]
    return DyckAutomaton(alphabet, ["1", "2"], edges, [(0, 2), (1, 3)])


def _golden_mean():
    alphabet = PushdownAlphabet((), (), ["a", "b", "c"])
    edges = [("1", "a", "1"), ("1", "b", "2"), ("2", "c", "1")]
    return DyckAutomaton(alphabet, ["1", "2"], edges)


BUILTIN_NAMES = ("dyck-k", "motzkin-k-i", "fig1-sofic", "fig2", "golden-mean")
# concrete instances used by tests, demos and the CLI listing
STANDARD_BUILTINS = ("dyck-1", "dyck-2", "motzkin-2-1", "fig1-sofic", "fig2", "golden-mean")


def builtin(name):
    """Named example automata.

    ``dyck-k``: one state, ``k`` matched bracket loops.  ``motzkin-k-i``:
    the same plus ``i`` internal loops.  ``fig2``: two states, calls
    ``a a'`` and returns ``b b'`` looping at 1, ``i`` edges between 1 and
    2.  ``fig1-sofic``: the same graph over the bracket alphabet.
    ``golden-mean``: the golden-mean edge shift (internal letters only).
    """
    if name.startswith("builtin:"):
        name = name[len("builtin:"):]
    parts = name.split("-")
    try:
        if parts[0] == "dyck" and len(parts) == 2:
            return _one_state_dyck(int(parts[1]), 0) if int(parts[1]) > 0 else _bad(name)
        if parts[0] == "motzkin" and len(parts) == 3:
            k, m = int(parts[1]), int(parts[2])
            if k < 0 or m < 0 or k + m == 0:
                _bad(name)
            return _one_state_dyck(k, m)
    except ValueError:
        _bad(name)
    if name == "fig2":
        return _fig2()
    if name == "fig1-sofic":
        return _fig2(("(", "["), (")", "]"), "i")
    if name == "golden-mean":
        return _golden_mean()
    _bad(name)


def _bad(name):
    raise KeyError("unknown built-in automaton %r (known: %s)" % (name, ", ".join(BUILTIN_NAMES)))


# -- JSON ---------------------------------------------------------------------------


def to_json(a):
    return {
        "alphabet": {
            "call": list(a.alphabet.call),
            "return": list(a.alphabet.ret),
            "internal": list(a.alphabet.internal),
        },
        "states": list(a.states),
        "edges": [{"from": p, "label": lab, "to": q} for p, lab, q in a.edges],
        "matched": [[c, r] for c, r in sorted(a.matched)],
    }


def dumps(a):
    return json.dumps(to_json(a), ensure_ascii=False) + "\n"


def from_json(doc):
    try:
        alph = doc["alphabet"]
        alphabet = PushdownAlphabet(
            alph.get("call", []), alph.get("return", []), alph.get("internal", [])
        )
        edges = [(e["from"], e["label"], e["to"]) for e in doc["edges"]]
        matched = [tuple(m) for m in doc.get("matched", [])]
        if any(len(m) != 2 for m in matched):
            raise AutomatonError("matched entries must be [callEdgeIndex, returnEdgeIndex]")
        a = DyckAutomaton(alphabet, doc["states"], edges, matched)
    except (KeyError, TypeError) as exc:
        raise AutomatonError("malformed automaton document: %s" % exc) from None
    except ValueError as exc:
        if isinstance(exc, AutomatonError):
            raise
        raise AutomatonError(str(exc)) from None
    diags = validate(a)
    if diags:
        raise AutomatonError(diags)
    return a


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonError("invalid JSON: %s" % exc) from None
    return from_json(doc)


def load(spec):
    """Load ``builtin:<name>`` or a JSON file path."""
    if spec.startswith("builtin:"):
        return builtin(spec)
    with open(spec, encoding="utf-8") as fh:
        return loads(fh.read())
