"""Exact truncated formal power series and small matrices of them.

Two concrete series types share one graded implementation:

* ``TruncatedSeries`` -- univariate in ``z``; component ``n`` is a number.
* ``MultiSeries`` -- commutative in a fixed ordered tuple of letters;
  component ``n`` is a dict of total-degree-``n`` monomials.

Coefficients are Python ints or ``fractions.Fraction`` (ints whenever the
value is integral).  Every operation truncates beyond the cap.
"""

from fractions import Fraction
import json

__all__ = [
    "SeriesError",
    "SeriesSizeError",
    "TruncatedSeries",
    "MultiSeries",
    "SeriesMatrix",
    "theta",
    "substitute",
    "det",
    "matrix_star",
    "series_to_json",
    "series_from_json",
]


class SeriesError(ValueError):
    """Context mismatch or a violated precondition of a series operation."""


class SeriesSizeError(SeriesError):
    """A multivariate series outgrew the configured term limit."""


def _q(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _parse_number(text):
    if isinstance(text, int):
        return text
    return _q(Fraction(text))


def _num_str(c):
    return str(c)


class _Graded:
    """Shared machinery; subclasses define the component algebra."""

    __slots__ = ("cap", "_comps")

    # -- component algebra (overridden) ---------------------------------
    def _czero(self):
        raise NotImplementedError

    def _cadd(self, x, y):
        raise NotImplementedError

    def _cmul(self, x, y):
        raise NotImplementedError

    def _cscale(self, x, r):
        raise NotImplementedError

    def _cneg(self, x):
        return self._cscale(x, -1)

    @staticmethod
    def _cnz(x):
        return bool(x)

    def _new(self, comps):
        raise NotImplementedError

    def _same_context(self, other):
        return type(self) is type(other) and self.cap == other.cap

    def _check(self, other):
        if not self._same_context(other):
            raise SeriesError("series context mismatch: %r vs %r" % (self._ctx(), other._ctx()))

    def _ctx(self):
        return (type(self).__name__, self.cap)

    def _coerce(self, other):
        if isinstance(other, _Graded):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.constant_like(other)
        return NotImplemented

    # -- constructors -------------------------------------------------------
    def zero_like(self):
        return self._new([self._czero() for _ in range(self.cap + 1)])

    def constant_like(self, c):
        raise NotImplementedError

    def one_like(self):
        return self.constant_like(1)

    # -- basic ring ops -------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._new([self._cadd(x, y) for x, y in zip(self._comps, other._comps)])

    __radd__ = __add__

    def __neg__(self):
        return self._new([self._cneg(x) for x in self._comps])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._new([self._cscale(x, other) for x in self._comps])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._comps, other._comps
        nza = [k for k in range(len(a)) if self._cnz(a[k])]
        nzb = [k for k in range(len(b)) if self._cnz(b[k])]
        out = [self._czero() for _ in range(self.cap + 1)]
        for i in nza:
            for j in nzb:
                if i + j > self.cap:
                    break
                out[i + j] = self._cadd(out[i + j], self._cmul(a[i], b[j]))
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise SeriesError("only nonnegative integer powers are supported")
        result, base = self.one_like(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self):
        return not any(self._cnz(x) for x in self._comps)

    def __bool__(self):
        return not self.is_zero()

    def truncate(self, cap):
        """Return the same series with a smaller (or equal) cap."""
        if cap > self.cap:
            raise SeriesError("cannot raise the cap of a truncated series")
        return self._with_cap(cap, self._comps[: cap + 1])

    def _with_cap(self, cap, comps):
        raise NotImplementedError

    def component(self, n):
        """Homogeneous component of degree ``n`` (a number or a monomial dict)."""
        return self._comps[n]

    def valuation(self):
        for n, x in enumerate(self._comps):
            if self._cnz(x):
                return n
        return None

    # -- division-type operations ----------------------------------------------
    def inverse(self):
        c0 = self.constant
        if c0 == 0:
            raise SeriesError("inverse needs an invertible constant term")
        inv0 = _q(Fraction(1) / c0)
        a = self._comps
        nz = [k for k in range(1, len(a)) if self._cnz(a[k])]
        out = [self._czero() for _ in range(self.cap + 1)]
        out[0] = self._cscale(a[0], _q(Fraction(inv0) * inv0))
        for n in range(1, self.cap + 1):
            acc = self._czero()
            for k in nz:
                if k > n:
                    break
                if self._cnz(out[n - k]):
                    acc = self._cadd(acc, self._cmul(a[k], out[n - k]))
            out[n] = self._cscale(acc, -inv0)
        return self._new(out)

    def star(self):
        """``(1 - S)^{-1}``; requires a zero constant term."""
        if self.constant != 0:
            raise SeriesError("star needs a zero constant term")
        return (self.one_like() - self).inverse()

    def exp(self):
        # Euler-operator recurrence: n E_n = sum_k k S_k E_{n-k}
        if self.constant != 0:
            raise SeriesError("exp needs a zero constant term")
        a = self._comps
        nz = [k for k in range(1, len(a)) if self._cnz(a[k])]
        out = [self._czero() for _ in range(self.cap + 1)]
        out[0] = self.one_like()._comps[0]
        for n in range(1, self.cap + 1):
            acc = self._czero()
            for k in nz:
                if k > n:
                    break
                if self._cnz(out[n - k]):
                    acc = self._cadd(acc, self._cscale(self._cmul(a[k], out[n - k]), k))
            out[n] = self._cscale(acc, Fraction(1, n))
        return self._new(out)

    def log(self):
        if self.constant != 1:
            raise SeriesError("log needs constant term 1")
        a = self._comps
        out = [self._czero() for _ in range(self.cap + 1)]
        for n in range(1, self.cap + 1):
            acc = self._czero()
            for k in range(1, n):
                if self._cnz(out[k]) and self._cnz(a[n - k]):
                    acc = self._cadd(acc, self._cscale(self._cmul(out[k], a[n - k]), k))
            out[n] = self._cadd(a[n], self._cscale(acc, Fraction(-1, n)))
        return self._new(out)

    # -- comparison ---------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.constant_like(other)
        if not isinstance(other, _Graded) or type(other) is not type(self):
            return NotImplemented
        if not self._same_letters(other):
            return False
        n = min(self.cap, other.cap)
        return all(self._ceq(x, y) for x, y in zip(self._comps[: n + 1], other._comps[: n + 1]))

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def _same_letters(self, other):
        return True

    def _ceq(self, x, y):
        return x == y


class TruncatedSeries(_Graded):
    """Univariate series ``c_0 + c_1 z + ... + c_N z^N``."""

    __slots__ = ()

    def __init__(self, coeffs, cap=None):
        coeffs = [_q(Fraction(c)) if not isinstance(c, int) else c for c in coeffs]
        if cap is None:
            cap = max(len(coeffs) - 1, 0)
        if cap < 0:
            raise SeriesError("cap must be nonnegative")
        coeffs = coeffs[: cap + 1]
        coeffs += [0] * (cap + 1 - len(coeffs))
        self.cap = cap
        self._comps = coeffs

    @classmethod
    def z(cls, cap):
        return cls([0, 1], cap)

    @classmethod
    def one(cls, cap):
        return cls([1], cap)

    @classmethod
    def zero(cls, cap):
        return cls([], cap)

    @property
    def coeffs(self):
        return list(self._comps)

    @property
    def constant(self):
        return self._comps[0]

    def __getitem__(self, n):
        return self._comps[n]

    def __len__(self):
        return self.cap + 1

    def _new(self, comps):
        s = TruncatedSeries.__new__(TruncatedSeries)
        s.cap = self.cap
        s._comps = comps
        return s

    def _with_cap(self, cap, comps):
        return TruncatedSeries(list(comps), cap)

    def constant_like(self, c):
        return TruncatedSeries([c], self.cap)

    def _czero(self):
        return 0

    def _cadd(self, x, y):
        return _q(x + y) if (x and y) else (x or y)

    def _cmul(self, x, y):
        return _q(x * y)

    def _cscale(self, x, r):
        return _q(x * r) if x else 0

    def __repr__(self):
        return "TruncatedSeries(%r, cap=%d)" % (self._comps, self.cap)

    def __str__(self):
        parts = []
        for n, c in enumerate(self._comps):
            if c == 0:
                continue
            if n == 0:
                mono = ""
            elif n == 1:
                mono = "z"
            else:
                mono = "z^%d" % n
            parts.append((c, mono))
        return _join_terms(parts)


class MultiSeries(_Graded):
    """Commutative series in the ordered ``letters``, truncated at total degree ``cap``.

    Monomials are stored as integers in base ``cap + 1`` (letter ``k`` has
    weight ``(cap+1)**k``); since total degree never exceeds ``cap`` there
    are no carries, so multiplying monomials is integer addition.
    """

    __slots__ = ("letters", "_base", "_weights")

    max_terms = 2_000_000

    def __init__(self, letters, cap, terms=None):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise SeriesError("duplicate letters in series context")
        if cap < 0:
            raise SeriesError("cap must be nonnegative")
        self.letters = letters
        self.cap = cap
        self._base = cap + 1
        self._weights = {a: self._base ** k for k, a in enumerate(letters)}
        self._comps = [{} for _ in range(cap + 1)]
        for mono, c in (terms or {}).items():
            self._add_term(mono, c)

    def _add_term(self, mono, c):
        if isinstance(mono, str):
            mono = {mono: 1}
        mono = dict(mono)
        deg = sum(mono.values())
        if deg > self.cap or c == 0:
            return
        key = 0
        for a, e in mono.items():
            if e < 0:
                raise SeriesError("negative exponent")
            if e:
                if a not in self._weights:
                    raise SeriesError("letter %r outside the series context" % (a,))
                key += e * self._weights[a]
        comp = self._comps[deg]
        if not isinstance(c, int):
            c = _q(Fraction(c))
        v = _q(comp.get(key, 0) + c)
        if v:
            comp[key] = v
        else:
            comp.pop(key, None)

    @classmethod
    def letter(cls, letters, cap, a):
        return cls(letters, cap, {a: 1})

    @classmethod
    def one(cls, letters, cap):
        return cls(letters, cap, {(): 1})

    @classmethod
    def zero(cls, letters, cap):
        return cls(letters, cap)

    @property
    def constant(self):
        return self._comps[0].get(0, 0)

    def _decode(self, key):
        mono = {}
        for a in self.letters:
            key, e = divmod(key, self._base)
            if e:
                mono[a] = e
        return mono

    def terms(self):
        """Yield ``(monomial dict, coefficient)`` in degree then key order."""
        for comp in self._comps:
            for key in sorted(comp):
                yield self._decode(key), comp[key]

    def coeff(self, mono):
        if isinstance(mono, str):
            mono = {mono: 1}
        deg = sum(mono.values())
        if deg > self.cap:
            raise SeriesError("monomial beyond cap")
        key = sum(e * self._weights[a] for a, e in mono.items() if e)
        return self._comps[deg].get(key, 0)

    def num_terms(self):
        return sum(len(c) for c in self._comps)

    def _new(self, comps):
        s = MultiSeries.__new__(MultiSeries)
        s.letters = self.letters
        s.cap = self.cap
        s._base = self._base
        s._weights = self._weights
        s._comps = comps
        if sum(len(c) for c in comps) > self.max_terms:
            raise SeriesSizeError("multivariate series exceeds %d terms" % self.max_terms)
        return s

    def _with_cap(self, cap, comps):
        out = MultiSeries(self.letters, cap)
        for comp in comps:
            for key, c in comp.items():
                out._add_term(self._decode(key), c)
        return out

    def _same_context(self, other):
        return type(other) is MultiSeries and self.cap == other.cap and self.letters == other.letters

    def _same_letters(self, other):
        return self.letters == other.letters

    def _ctx(self):
        return ("MultiSeries", self.letters, self.cap)

    def constant_like(self, c):
        return MultiSeries(self.letters, self.cap, {(): c})

    def _czero(self):
        return {}

    def _cadd(self, x, y):
        if not x:
            return y
        if not y:
            return x
        out = dict(x)
        for k, c in y.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = _q(v)
            else:
                del out[k]
        return out

    def _cmul(self, x, y):
        out = {}
        get = out.get
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        return {k: _q(v) for k, v in out.items() if v}

    def _cscale(self, x, r):
        if not r:
            return {}
        return {k: _q(c * r) for k, c in x.items()}

    def __repr__(self):
        return "MultiSeries(%r, cap=%d, %s)" % (self.letters, self.cap, str(self))

    def __str__(self):
        parts = []
        for mono, c in self.terms():
            name = "*".join(
                a if e == 1 else "%s^%d" % (a, e) for a, e in sorted(mono.items())
            )
            parts.append((c, name))
        return _join_terms(parts)


def _join_terms(parts):
    if not parts:
        return "0"
    out = []
    for i, (c, mono) in enumerate(parts):
        neg = c < 0
        mag = -c if neg else c
        if mono:
            body = mono if mag == 1 else "%s*%s" % (_num_str(mag), mono)
        else:
            body = _num_str(mag)
        if i == 0:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def theta(s):
    """Send every letter to ``z``: the univariate image of a multivariate series."""
    if isinstance(s, TruncatedSeries):
        return s
    return TruncatedSeries([sum(comp.values()) for comp in s._comps], s.cap)


def substitute(s, sigma, like=None):
    """Replace each letter ``b`` of ``s`` by the series ``sigma[b]``.

    All images must share one context and have zero constant term; the
    result is truncated at that context's cap.  ``like`` supplies the
    target context when ``sigma`` is empty.
    """
    images = list(sigma.values())
    target = like if like is not None else (images[0] if images else None)
    if target is None:
        raise SeriesError("substitute needs at least one image or a target context")
    for img in images:
        target._check(img)
        if img.constant != 0:
            raise SeriesError("substituted series must have zero constant term")
    missing = [a for a in s.letters if a not in sigma]
    result = target.zero_like()
    powers = {}

    def power(a, e):
        key = (a, e)
        if key not in powers:
            powers[key] = sigma[a] if e == 1 else power(a, e - 1) * sigma[a]
        return powers[key]

    for mono, c in s.terms():
        if sum(mono.values()) > target.cap:
            continue
        if any(a in missing for a in mono):
            raise SeriesError("no image for letter(s) %r" % [a for a in mono if a in missing])
        term = target.constant_like(c)
        for a, e in sorted(mono.items()):
            term = term * power(a, e)
            if term.is_zero():
                break
        result = result + term
    return result


class SeriesMatrix:
    """Square matrix of series indexed by hashable labels (states or state subsets)."""

    def __init__(self, index, rows):
        self.index = tuple(index)
        self.rows = [list(r) for r in rows]
        n = len(self.index)
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise SeriesError("series matrix must be square and match its index")
        self._pos = {p: k for k, p in enumerate(self.index)}

    @classmethod
    def zeros(cls, index, like):
        n = len(index)
        return cls(index, [[like.zero_like() for _ in range(n)] for _ in range(n)])

    @classmethod
    def identity(cls, index, like):
        m = cls.zeros(index, like)
        for k in range(len(index)):
            m.rows[k][k] = like.one_like()
        return m

    def __len__(self):
        return len(self.index)

    def __getitem__(self, pq):
        p, q = pq
        return self.rows[self._pos[p]][self._pos[q]]

    def __setitem__(self, pq, value):
        p, q = pq
        self.rows[self._pos[p]][self._pos[q]] = value

    def entries(self):
        for p in self.index:
            for q in self.index:
                yield (p, q), self[p, q]

    def _check(self, other):
        if self.index != other.index:
            raise SeriesError("series matrices over different index sets")

    def __add__(self, other):
        self._check(other)
        return SeriesMatrix(
            self.index, [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        self._check(other)
        return SeriesMatrix(
            self.index, [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __matmul__(self, other):
        self._check(other)
        n = len(self.index)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.rows[i][j].zero_like()
                for k in range(n):
                    x, y = self.rows[i][k], other.rows[k][j]
                    if x and y:
                        acc = acc + x * y
                row.append(acc)
            out.append(row)
        return SeriesMatrix(self.index, out)

    def map(self, f):
        return SeriesMatrix(self.index, [[f(x) for x in r] for r in self.rows])

    def is_zero(self):
        return all(x.is_zero() for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.index == other.index and all(
            x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s)
        )

    __hash__ = None

    def __repr__(self):
        lines = ["SeriesMatrix(index=%r)" % (self.index,)]
        for p, r in zip(self.index, self.rows):
            lines.append("  %s: [%s]" % (p, ", ".join(str(x) for x in r)))
        return "\n".join(lines)


def det(m):
    """Determinant by cofactor expansion memoized over column subsets.

    ``minor[S]`` is the determinant of the first ``|S|`` rows restricted to
    the columns in ``S``; no division is used.
    """
    n = len(m)
    if n == 0:
        raise SeriesError("determinant of an empty matrix")
    like = m.rows[0][0]
    minor = {0: like.one_like()}
    for size in range(1, n + 1):
        row = m.rows[size - 1]
        nxt = {}
        for cols, val in minor.items():
            if val.is_zero():
                continue
            for j in range(n):
                if cols >> j & 1 or row[j].is_zero():
                    continue
                # sign of moving column j past the chosen columns to its right
                above = bin(cols >> (j + 1)).count("1")
                term = row[j] * val
                if above & 1:
                    term = -term
                key = cols | (1 << j)
                nxt[key] = nxt[key] + term if key in nxt else term
        minor = nxt
    return minor.get((1 << n) - 1, like.zero_like())


def matrix_star(c):
    """``(I - C)^{-1} = sum_k C^k`` for a matrix whose entries have zero constant term."""
    if any(x.constant != 0 for r in c.rows for x in r):
        raise SeriesError("matrix_star needs zero constant terms")
    like = c.rows[0][0] if c.rows else None
    if like is None:
        return c
    ident = SeriesMatrix.identity(c.index, like)
    x = ident
    # each pass fixes one more degree
    for _ in range(like.cap + 1):
        nxt = ident + (c @ x)
        if nxt == x:
            break
        x = nxt
    return x


def series_to_json(s):
    """Machine-readable rendering (coefficients as exact strings)."""
    if isinstance(s, TruncatedSeries):
        return {"cap": s.cap, "coeffs": [str(c) for c in s.coeffs]}
    return {
        "cap": s.cap,
        "letters": list(s.letters),
        "terms": [{"mono": mono, "coeff": str(c)} for mono, c in s.terms()],
    }


def series_from_json(doc):
    if isinstance(doc, str):
        doc = json.loads(doc)
    if "coeffs" in doc:
        return TruncatedSeries([_parse_number(c) for c in doc["coeffs"]], doc["cap"])
    letters = doc.get("letters")
    if letters is None:
        letters = sorted({a for t in doc["terms"] for a in t["mono"]})
    out = MultiSeries(letters, doc["cap"])
    for t in doc["terms"]:
        out._add_term(t["mono"], _parse_number(t["coeff"]))
    return out
