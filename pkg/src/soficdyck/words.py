"""Pushdown alphabets, words, and the Dyck-word predicates.

A word is a tuple of letter tokens.  Whether a token is a call, return or
internal letter is looked up in its ``PushdownAlphabet``, never guessed
from its spelling.
"""

from dataclasses import dataclass
from enum import Enum

__all__ = [
    "PushdownAlphabet",
    "word",
    "balance",
    "prefix_balances",
    "is_matched_return",
    "is_matched_call",
    "is_dyck",
    "is_prime_dyck",
    "prime_factors",
    "conjugates",
    "is_conjugate",
    "rotate_to_dyck",
    "HKind",
    "has_shape",
    "shape_prefix_ok",
]

CALL, RETURN, INTERNAL = 1, -1, 0


@dataclass(frozen=True)
class PushdownAlphabet:
    """Finite alphabet split into call, return and internal letters."""

    call: tuple
    ret: tuple
    internal: tuple

    def __init__(self, call=(), ret=(), internal=()):
        object.__setattr__(self, "call", tuple(call))
        object.__setattr__(self, "ret", tuple(ret))
        object.__setattr__(self, "internal", tuple(internal))
        letters = self.call + self.ret + self.internal
        if not letters:
            raise ValueError("a pushdown alphabet needs at least one letter")
        if len(set(letters)) != len(letters):
            raise ValueError("call, return and internal letters must be pairwise disjoint")
        for a in letters:
            if not isinstance(a, str) or not a:
                raise ValueError("letters are nonempty string tokens, got %r" % (a,))
        kinds = {a: CALL for a in self.call}
        kinds.update((a, RETURN) for a in self.ret)
        kinds.update((a, INTERNAL) for a in self.internal)
        object.__setattr__(self, "_kind", kinds)

    @property
    def letters(self):
        """All letters in canonical order: calls, returns, internals."""
        return self.call + self.ret + self.internal

    def __contains__(self, a):
        return a in self._kind

    def __len__(self):
        return len(self._kind)

    def kind(self, a):
        """+1 for a call letter, -1 for a return letter, 0 for internal."""
        try:
            return self._kind[a]
        except KeyError:
            raise ValueError("letter %r is not in the alphabet" % (a,)) from None

    def is_call(self, a):
        return self._kind.get(a) == CALL

    def is_return(self, a):
        return self._kind.get(a) == RETURN

    def is_internal(self, a):
        return self._kind.get(a) == INTERNAL

    def reversed(self):
        """Swap call and return letters (for reading words right to left)."""
        return PushdownAlphabet(self.ret, self.call, self.internal)


def word(alphabet, letters):
    """Validate ``letters`` against ``alphabet`` and return them as a tuple.

    A string is split on whitespace, so ``word(A, "( [ i ] )")`` works.
    """
    if isinstance(letters, str):
        letters = letters.split()
    u = tuple(letters)
    for a in u:
        if a not in alphabet:
            raise ValueError("letter %r is not in the alphabet" % (a,))
    return u


def balance(alphabet, u):
    """Number of call letters minus number of return letters."""
    k = alphabet.kind
    return sum(k(a) for a in u)


def prefix_balances(alphabet, u):
    out, b = [], 0
    for a in u:
        b += alphabet.kind(a)
        out.append(b)
    return out


def is_matched_return(alphabet, u):
    b = 0
    for a in u:
        b += alphabet.kind(a)
        if b < 0:
            return False
    return True


def is_matched_call(alphabet, u):
    b = 0
    for a in reversed(u):
        b += alphabet.kind(a)
        if b > 0:
            return False
    return True


def is_dyck(alphabet, u):
    b = 0
    for a in u:
        b += alphabet.kind(a)
        if b < 0:
            return False
    return b == 0


def is_prime_dyck(alphabet, u):
    """Nonempty Dyck word whose only Dyck prefixes are itself and the empty word."""
    if not u:
        return False
    b = 0
    for n, a in enumerate(u, 1):
        b += alphabet.kind(a)
        if b < 0:
            return False
        if b == 0:
            return n == len(u)
    return False


def prime_factors(alphabet, u):
    """Factor a Dyck word into prime Dyck words (shortest Dyck prefixes first)."""
    if not is_dyck(alphabet, u):
        raise ValueError("only Dyck words factor into prime Dyck words")
    out, start, b = [], 0, 0
    for n, a in enumerate(u, 1):
        b += alphabet.kind(a)
        if b == 0:
            out.append(u[start:n])
            start = n
    return out


def conjugates(u):
    """All rotations ``u[k:] + u[:k]`` in order of ``k`` (``[()]`` for the empty word)."""
    u = tuple(u)
    if not u:
        return [()]
    return [u[k:] + u[:k] for k in range(len(u))]


def is_conjugate(u, v):
    u, v = tuple(u), tuple(v)
    return len(u) == len(v) and v in set(conjugates(u))


def rotate_to_dyck(alphabet, u):
    """The Dyck rotation of a balanced word, or ``None`` if ``balance(u) != 0``.

    The rotation starts right after the leftmost position of minimal prefix
    balance (position 0 being the empty prefix).
    """
    u = tuple(u)
    if balance(alphabet, u) != 0:
        return None
    best, best_pos, b = 0, 0, 0
    for n, a in enumerate(u, 1):
        b += alphabet.kind(a)
        if b < best:
            best, best_pos = b, n
    return u[best_pos:] + u[:best_pos]


class HKind(str, Enum):
    """Matrix languages built from an automaton (prime Dyck words, letters, composites)."""

    C = "C"
    D = "D"
    Mc = "Mc"
    Mr = "Mr"
    CStarMc = "CStarMc"
    MrPlusC = "MrPlusC"
    McPlusC = "McPlusC"
    MrCStar = "MrCStar"

    def __str__(self):
        return self.value


def has_shape(alphabet, u, kind):
    """Does ``u`` have the word shape of the language ``kind``?

    This ignores the automaton: e.g. a ``CStarMc`` word is a Dyck word
    followed by one call letter.
    """
    kind = HKind(kind)
    u = tuple(u)
    n = len(u)
    if kind is HKind.C:
        return is_prime_dyck(alphabet, u)
    if kind is HKind.D:
        return is_dyck(alphabet, u)
    if kind is HKind.Mc:
        return n == 1 and alphabet.is_call(u[0])
    if kind is HKind.Mr:
        return n == 1 and alphabet.is_return(u[0])
    if kind is HKind.CStarMc:
        return n >= 1 and alphabet.is_call(u[-1]) and is_dyck(alphabet, u[:-1])
    if kind is HKind.MrPlusC:
        return (n == 1 and alphabet.is_return(u[0])) or is_prime_dyck(alphabet, u)
    if kind is HKind.McPlusC:
        return (n == 1 and alphabet.is_call(u[0])) or is_prime_dyck(alphabet, u)
    return n >= 1 and alphabet.is_return(u[0]) and is_dyck(alphabet, u[1:])


def _prime_prefix_ok(alphabet, u):
    if not u:
        return True
    first = alphabet.kind(u[0])
    if first == INTERNAL:
        return len(u) == 1
    if first == RETURN:
        return False
    b = 0
    for n, a in enumerate(u, 1):
        b += alphabet.kind(a)
        if b < 0 or (b == 0 and n < len(u)):
            return False
    return True


def shape_prefix_ok(alphabet, u, kind):
    """Necessary condition for ``u`` to be a prefix of a word of shape ``kind``."""
    kind = HKind(kind)
    u = tuple(u)
    n = len(u)
    if kind is HKind.C:
        return _prime_prefix_ok(alphabet, u)
    if kind in (HKind.D, HKind.CStarMc):
        return is_matched_return(alphabet, u)
    if kind is HKind.Mc:
        return n == 0 or (n == 1 and alphabet.is_call(u[0]))
    if kind is HKind.Mr:
        return n == 0 or (n == 1 and alphabet.is_return(u[0]))
    if kind is HKind.MrPlusC:
        return (n == 1 and alphabet.is_return(u[0])) or _prime_prefix_ok(alphabet, u)
    if kind is HKind.McPlusC:
        return (n == 1 and alphabet.is_call(u[0])) or _prime_prefix_ok(alphabet, u)
    return n == 0 or (alphabet.is_return(u[0]) and is_matched_return(alphabet, u[1:]))
