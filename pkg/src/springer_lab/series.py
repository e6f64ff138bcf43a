"""Truncated Laurent series and polynomials with series coefficients.

A :class:`TruncatedSeries` stores the coefficients of ``var^start``,
``var^(start+1)``, ... up to (not including) an absolute precision bound
``prec``.  ``prec=None`` marks an exact (finite) Laurent polynomial.
Precision is never extrapolated: a series whose known coefficients are
all zero has an *indeterminate* valuation and asking for it raises.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "IndeterminateValuation",
    "NotAUnit",
    "PrecisionError",
    "SeriesPolynomial",
    "TruncatedSeries",
    "berkowitz",
    "determinant",
    "resultant_valuation",
    "sylvester_matrix",
]


class PrecisionError(ArithmeticError):
    """A coefficient beyond the known precision was requested."""


class IndeterminateValuation(PrecisionError):
    """Every known coefficient is zero; the valuation is not determined."""


class NotAUnit(ArithmeticError):
    """Inversion of a series that is zero (or indeterminate)."""


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class TruncatedSeries:
    """A Laurent series ``sum c_e var^e`` known for exponents ``< prec``.

    Parameters
    ----------
    field : Field
        Coefficient field.
    coeffs : sequence of int
        Field codes, lowest exponent first.
    start : int
        Exponent of ``coeffs[0]``.
    prec : int or None
        Absolute precision; ``None`` for an exact Laurent polynomial.
    var : str
        Variable tag; arithmetic between different tags is refused.
    """

    __slots__ = ("field", "var", "start", "coeffs", "prec")

    def __init__(self, field, coeffs=(), start=0, prec=None, var="t"):
        coeffs = [int(c) for c in coeffs]
        if prec is not None:
            keep = max(0, prec - start)
            coeffs = coeffs[:keep]
        lead = 0
        while lead < len(coeffs) and coeffs[lead] == 0:
            lead += 1
        end = len(coeffs)
        while end > lead and coeffs[end - 1] == 0:
            end -= 1
        self.field = field
        self.var = var
        self.prec = prec
        if lead == end:
            self.coeffs = ()
            self.start = 0
        else:
            self.coeffs = tuple(coeffs[lead:end])
            self.start = start + lead

    # construction ------------------------------------------------------

    @classmethod
    def zero(cls, field, var="t", prec=None):
        return cls(field, (), 0, prec, var)

    @classmethod
    def one(cls, field, var="t", prec=None):
        return cls(field, (1,), 0, prec, var)

    @classmethod
    def monomial(cls, field, exponent, coeff=1, var="t", prec=None):
        return cls(field, (coeff,), exponent, prec, var)

    @classmethod
    def from_terms(cls, field, terms, var="t", prec=None):
        """Build from a mapping ``exponent -> coefficient`` (codes)."""
        if not terms:
            return cls.zero(field, var, prec)
        lo, hi = min(terms), max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = field.plus(coeffs[e - lo], c)
        return cls(field, coeffs, lo, prec, var)

    def _like(self, coeffs, start, prec):
        return TruncatedSeries(self.field, coeffs, start, prec, self.var)

    # inspection --------------------------------------------------------

    @property
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        """True only for the exact zero series."""
        return not self.coeffs and self.prec is None

    def known_zero(self):
        """True when every known coefficient vanishes."""
        return not self.coeffs

    @property
    def end(self):
        """One past the highest stored exponent."""
        return self.start + len(self.coeffs)

    def valuation(self):
        """Lowest exponent with a nonzero coefficient.

        Exact zero has valuation ``math.inf``; a truncated series with no
        known nonzero coefficient raises :class:`IndeterminateValuation`.
        """
        if self.coeffs:
            return self.start
        if self.prec is None:
            return math.inf
        raise IndeterminateValuation(f"all coefficients below {self.var}^{self.prec} vanish")

    def _vlow(self):
        if self.coeffs:
            return self.start
        return math.inf if self.prec is None else self.prec

    def coefficient(self, e):
        if self.prec is not None and e >= self.prec:
            raise PrecisionError(f"coefficient of {self.var}^{e} beyond precision {self.prec}")
        i = e - self.start
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self):
        """``(exponent, coefficient)`` pairs of the nonzero known terms."""
        return [(self.start + i, c) for i, c in enumerate(self.coeffs) if c]

    def leading_coefficient(self):
        self.valuation()
        return self.coeffs[0] if self.coeffs else 0

    # arithmetic --------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"cannot combine series with {type(other).__name__}")
        if other.var != self.var:
            raise ValueError(f"variable mismatch: {self.var} vs {other.var}")
        if other.field != self.field:
            raise ValueError("field mismatch")

    def __add__(self, other):
        self._check(other)
        return self._combine(other, negate=False)

    def __sub__(self, other):
        self._check(other)
        return self._combine(other, negate=True)

    def _combine(self, other, negate):
        F = self.field
        prec = _min_prec(self.prec, other.prec)
        if not self.coeffs and not other.coeffs:
            return self._like((), 0, prec)
        starts = [s.start for s in (self, other) if s.coeffs]
        ends = [s.end for s in (self, other) if s.coeffs]
        lo, hi = min(starts), max(ends)
        acc = np.zeros(hi - lo, dtype=np.int64)
        if self.coeffs:
            acc[self.start - lo : self.end - lo] = self.coeffs
        if other.coeffs:
            seg = np.asarray(other.coeffs, dtype=np.int64)
            sl = slice(other.start - lo, other.end - lo)
            acc[sl] = (F.sub if negate else F.add)[acc[sl], seg]
        return self._like(acc.tolist(), lo, prec)

    def __neg__(self):
        return self._like(self.field.neg[list(self.coeffs)].tolist() if self.coeffs else (), self.start, self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        F = self.field
        va, vb = self._vlow(), other._vlow()
        prec = None
        if self.prec is not None or other.prec is not None:
            pa = math.inf if self.prec is None else self.prec
            pb = math.inf if other.prec is None else other.prec
            bound = min(pa + vb, pb + va)
            prec = None if bound == math.inf else int(bound)
        if not self.coeffs or not other.coeffs:
            return self._like((), 0, prec)
        a = np.asarray(self.coeffs, dtype=np.int64)
        b = np.asarray(other.coeffs, dtype=np.int64)
        if F.is_prime:
            out = np.convolve(a, b) % F.p
        else:
            out = np.zeros(len(a) + len(b) - 1, dtype=np.int64)
            for i, x in enumerate(a):
                if x:
                    seg = slice(i, i + len(b))
                    out[seg] = F.add[out[seg], F.mul[x, b]]
        return self._like(out.tolist(), self.start + other.start, prec)

    __rmul__ = __mul__

    def scale(self, c):
        """Multiply by the field element ``c`` (a code)."""
        if not self.coeffs:
            return self
        return self._like(self.field.mul[c, list(self.coeffs)].tolist(), self.start, self.prec)

    def shift(self, k):
        """Multiply by ``var^k``."""
        return self._like(self.coeffs, self.start + k, None if self.prec is None else self.prec + k)

    def truncate(self, prec):
        return self._like(self.coeffs, self.start, _min_prec(self.prec, prec))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("use inverse() for negative powers")
        result = TruncatedSeries.one(self.field, self.var)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self, prec=None):
        """Multiplicative inverse.

        For an exact series the absolute precision of the answer must be
        supplied; for a truncated one it follows from the input.
        """
        if not self.coeffs:
            raise NotAUnit("cannot invert a series with no known nonzero coefficient")
        F = self.field
        v = self.start
        if self.prec is not None:
            rel = self.prec - v
            out_prec = -v + rel if prec is None else min(prec, -v + rel)
        else:
            if prec is None:
                raise PrecisionError("inverse of an exact series needs an explicit precision")
            out_prec = prec
        n = out_prec + v
        if n <= 0:
            return self._like((), 0, out_prec)
        u = list(self.coeffs) + [0] * max(0, n - len(self.coeffs))
        u0inv = F.inverse(u[0])
        w = [u0inv] + [0] * (n - 1)
        for k in range(1, n):
            acc = 0
            for j in range(1, k + 1):
                if u[j] and w[k - j]:
                    acc = F.plus(acc, F.times(u[j], w[k - j]))
            w[k] = F.times(F.negate(acc), u0inv)
        return self._like(w, -v, out_prec)

    def unit_inverse(self, prec=None):
        """Inverse of a series of valuation 0 (raises otherwise)."""
        if self.valuation() != 0:
            raise NotAUnit(f"valuation {self.valuation()} != 0")
        return self.inverse(prec)

    def derivative(self):
        F = self.field
        terms = {}
        for e, c in self.terms():
            m = F.from_int(e)
            if m:
                terms[e - 1] = F.times(m, c)
        prec = None if self.prec is None else self.prec - 1
        return TruncatedSeries.from_terms(F, terms, self.var, prec)

    def compose(self, other):
        """Substitute ``var := other``; ``other`` must have valuation >= 1."""
        if self.coeffs and self.start < 0:
            raise ValueError("compose needs a power series (no negative exponents)")
        if other.field != self.field:
            raise ValueError("field mismatch")
        if other._vlow() < 1:
            raise ValueError("inner series must have positive valuation")
        result = TruncatedSeries.zero(self.field, other.var)
        for e, c in reversed(list(enumerate(self.coeffs, start=self.start))):
            result = result * other + TruncatedSeries(self.field, (c,), 0, None, other.var)
        for _ in range(self.start):
            result = result * other
        if self.prec is not None:
            tail = self.prec * other._vlow()
            result = result.truncate(int(tail) if tail != math.inf else None)
        return result

    def substitute_power(self, n, var):
        """Rewrite a series in ``pi`` as one in ``t`` with ``pi = t^n``."""
        coeffs = [0] * (n * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            coeffs[n * i] = c
        prec = None if self.prec is None else n * self.prec
        return TruncatedSeries(self.field, coeffs, n * self.start, prec, var)

    def involution(self):
        """Apply the ``q``-power map to every coefficient."""
        if not self.coeffs:
            return self
        return self._like(self.field.conj[list(self.coeffs)].tolist(), self.start, self.prec)

    def retag(self, var):
        return TruncatedSeries(self.field, self.coeffs, self.start, self.prec, var)

    # comparison / display ----------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.var == other.var
            and self.field == other.field
            and self.prec == other.prec
            and self.start == other.start
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.var, self.start, self.coeffs, self.prec))

    def agrees_with(self, other):
        """Equality of the coefficients both operands know."""
        diff = self - other
        return diff.known_zero()

    def __repr__(self):
        F = self.field
        parts = []
        for e, c in self.terms():
            coef = F.fmt(c)
            if e == 0:
                parts.append(coef)
            else:
                mono = self.var if e == 1 else f"{self.var}^{e}"
                parts.append(mono if coef == "1" else f"{coef}*{mono}")
        body = " + ".join(parts) if parts else "0"
        if self.prec is not None:
            body += f" + O({self.var}^{self.prec})"
        return body

    def to_json(self):
        return {
            "var": self.var,
            "start": self.start,
            "coeffs": [self.field.fmt(c) for c in self.coeffs],
            "prec": self.prec,
        }


class SeriesPolynomial:
    """A polynomial in ``T`` whose coefficients are series in ``pi``.

    ``coeffs[k]`` multiplies ``T^k``.
    """

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            raise ValueError("empty polynomial")
        self.coeffs = tuple(coeffs)
        self.field = coeffs[0].field
        self.var = coeffs[0].var

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_monic(self):
        lead = self.coeffs[-1]
        return lead.coeffs == (1,) and lead.start == 0

    def __mul__(self, other):
        zero = TruncatedSeries.zero(self.field, self.var)
        out = [zero] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return SeriesPolynomial(out)

    def derivative(self):
        F = self.field
        if self.degree == 0:
            return SeriesPolynomial([TruncatedSeries.zero(F, self.var)])
        return SeriesPolynomial([c.scale(F.from_int(k)) for k, c in enumerate(self.coeffs) if k > 0])

    def evaluate(self, x, n):
        """Value at ``x`` (a series in ``t``) where ``pi = t^n``."""
        result = TruncatedSeries.zero(self.field, x.var)
        for c in reversed(self.coeffs):
            result = result * x + c.substitute_power(n, x.var)
        return result

    def __eq__(self, other):
        return isinstance(other, SeriesPolynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        parts = []
        for k, c in enumerate(self.coeffs):
            if c.known_zero() and c.is_exact:
                continue
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(reversed(parts)) or "0"

    def to_json(self):
        return [c.to_json() for c in self.coeffs]


def berkowitz(M, zero, one):
    """Characteristic polynomial ``det(x I - M)`` by Berkowitz's algorithm.

    Division free, so it works over any commutative ring whose elements
    support ``+``, ``-`` and ``*``.  Returns ``[1, c1, ..., cn]`` (highest
    degree first).
    """
    n = len(M)
    if n == 0:
        return [one]
    if n == 1:
        return [one, zero - M[0][0]]
    a = M[0][0]
    R = M[0][1:]
    C = [M[i][0] for i in range(1, n)]
    A = [row[1:] for row in M[1:]]

    def matvec(X, v):
        out = []
        for row in X:
            acc = zero
            for x, y in zip(row, v):
                acc = acc + x * y
            out.append(acc)
        return out

    def dot(u, v):
        acc = zero
        for x, y in zip(u, v):
            acc = acc + x * y
        return acc

    diags = [C]
    for i in range(n - 2):
        diags.append(matvec(A, diags[i]))
    diag_vals = [one, zero - a] + [zero - dot(R, d) for d in diags]
    sub = berkowitz(A, zero, one)
    out = []
    for i in range(n + 1):
        acc = zero
        for j in range(n):
            if j <= i and i - j < len(diag_vals):
                acc = acc + diag_vals[i - j] * sub[j]
        out.append(acc)
    return out


def determinant(M, zero, one):
    n = len(M)
    cp = berkowitz(M, zero, one)
    last = cp[-1]
    return last if n % 2 == 0 else zero - last


def sylvester_matrix(P, Q):
    m, n = P.degree, Q.degree
    zero = TruncatedSeries.zero(P.field, P.var)
    size = m + n
    rows = []
    pc = list(reversed(P.coeffs))
    qc = list(reversed(Q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return rows


def resultant_valuation(P, Q):
    """``v_pi(Res(P, Q))`` via the Sylvester determinant over truncated series.

    Raises :class:`IndeterminateValuation` if the determinant vanishes to
    the available precision (exact inputs with a common root also land
    here, as the determinant is then exactly zero).
    """
    if not (P.is_monic() and Q.is_monic()):
        raise ValueError("resultant_valuation expects monic polynomials")
    S = sylvester_matrix(P, Q)
    zero = TruncatedSeries.zero(P.field, P.var)
    one = TruncatedSeries.one(P.field, P.var)
    det = determinant(S, zero, one)
    v = det.valuation()
    if v == math.inf:
        raise IndeterminateValuation("resultant is zero: polynomials share a root")
    return v
