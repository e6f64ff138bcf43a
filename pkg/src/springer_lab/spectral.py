"""Branch data, the local order ``A = O_F[gamma]`` and its invariants.

A spectral datum is a finite family of branches ``(n_i, gamma_i)``: the
branch ring is ``k[[t_i]]`` with ``pi = t_i^{n_i}`` and ``gamma_i`` a
polynomial in ``t_i`` without constant term.  The order ``A`` is the
``k[[pi]]``-algebra generated by ``gamma = (gamma_i)_i`` inside the
product of branch rings ``Ã``.

Everything below is computed inside *windows*: for integer vectors
``lo <= hi`` the window ``[lo, hi)`` is the ``k``-space with basis the
monomials ``t_i^a`` (``lo_i <= a < hi_i``), ordered branch-major and by
ascending exponent.  It models ``prod t_i^{lo_i} O_i / prod t_i^{hi_i} O_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .linalg import in_span, left_kernel, matmul, rank, reduce_rows, rref
from .series import (
    PrecisionError,
    SeriesPolynomial,
    TruncatedSeries,
    berkowitz,
    resultant_valuation,
)

__all__ = [
    "Branch",
    "OrderWindow",
    "PrecisionCeiling",
    "RosenlichtPairing",
    "SpectralDatum",
    "SpectralError",
    "Window",
    "WindowOverflow",
    "conductor_exponents",
    "delta_direct",
    "delta_formula",
    "minimal_polynomial",
    "order_window",
    "rosenlicht_pairing",
    "span_closure",
]


class SpectralError(ValueError):
    """Invalid branch data."""


class PrecisionCeiling(RuntimeError):
    """A stabilization loop reached the configured ceiling."""


class WindowOverflow(ArithmeticError):
    """A result does not fit in the requested window."""


# windows ----------------------------------------------------------------


class Window:
    """Monomial coordinates for ``prod t_i^{lo_i} O_i / prod t_i^{hi_i} O_i``."""

    __slots__ = ("lo", "hi", "offsets", "size")

    def __init__(self, lo, hi):
        lo = tuple(int(x) for x in lo)
        hi = tuple(int(x) for x in hi)
        if len(lo) != len(hi) or any(b < a for a, b in zip(lo, hi)):
            raise ValueError(f"bad window lo={lo} hi={hi}")
        self.lo, self.hi = lo, hi
        offs = [0]
        for a, b in zip(lo, hi):
            offs.append(offs[-1] + b - a)
        self.offsets = tuple(offs)
        self.size = offs[-1]

    def __eq__(self, other):
        return isinstance(other, Window) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return f"Window(lo={self.lo}, hi={self.hi})"

    def width(self, i):
        return self.hi[i] - self.lo[i]

    def column(self, i, a):
        if not self.lo[i] <= a < self.hi[i]:
            raise WindowOverflow(f"t_{i}^{a} outside window [{self.lo[i]}, {self.hi[i]})")
        return self.offsets[i] + a - self.lo[i]

    def labels(self):
        """``(branch, exponent)`` for every column."""
        return [(i, a) for i in range(len(self.lo)) for a in range(self.lo[i], self.hi[i])]

    def monomial(self, i, a, coeff=1):
        v = np.zeros(self.size, dtype=np.int64)
        v[self.column(i, a)] = coeff
        return v

    def block(self, i):
        return slice(self.offsets[i], self.offsets[i + 1])

    def zeros(self, rows=0):
        return np.zeros((rows, self.size), dtype=np.int64)

    def shifted(self, shift):
        return Window([a + s for a, s in zip(self.lo, shift)], [b + s for b, s in zip(self.hi, shift)])

    def embed(self, rows, target):
        """Re-express rows of this window in ``target`` coordinates.

        Coefficients at exponents ``>= target.hi`` are dropped (they lie in
        the quotient); nonzero coefficients below ``target.lo`` overflow.
        """
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.size)
        out = target.zeros(rows.shape[0])
        for i in range(len(self.lo)):
            for a in range(self.lo[i], self.hi[i]):
                col = rows[:, self.offsets[i] + a - self.lo[i]]
                if a >= target.hi[i]:
                    continue
                if a < target.lo[i]:
                    if col.any():
                        raise WindowOverflow(f"t_{i}^{a} below target window")
                    continue
                out[:, target.offsets[i] + a - target.lo[i]] = col
        return out

    def series(self, field, row, i, var="t", exact=False):
        """The branch-``i`` component of ``row`` as a series.

        By default it is known below ``hi_i``; ``exact=True`` reads the row
        as a polynomial representative instead.
        """
        seg = np.asarray(row)[self.block(i)]
        return TruncatedSeries(field, seg.tolist(), self.lo[i], None if exact else self.hi[i], var)

    def from_series(self, element, rows=None):
        """Row of an element given as per-branch series (truncated at ``hi``)."""
        v = np.zeros(self.size, dtype=np.int64)
        for i, s in enumerate(element):
            if s.prec is not None and s.prec < self.hi[i]:
                raise PrecisionError(f"branch {i}: series known below {s.prec}, need {self.hi[i]}")
            for e, c in s.terms():
                if e >= self.hi[i]:
                    continue
                v[self.column(i, e)] = c
        return v

    def mul_matrix(self, field, element, target=None):
        """Matrix of multiplication by ``element`` (per-branch series), row convention."""
        target = self if target is None else target
        out = np.zeros((self.size, target.size), dtype=np.int64)
        for i, s in enumerate(element):
            terms = s.terms()
            for a in range(self.lo[i], self.hi[i]):
                if s.prec is not None and s.prec + a < target.hi[i]:
                    raise PrecisionError(
                        f"branch {i}: multiplier known below t^{s.prec}, need t^{target.hi[i] - a}"
                    )
                r = self.offsets[i] + a - self.lo[i]
                for e, c in terms:
                    x = e + a
                    if x >= target.hi[i]:
                        break
                    if x < target.lo[i]:
                        raise WindowOverflow(f"t_{i}^{x} below target window")
                    out[r, target.offsets[i] + x - target.lo[i]] = c
        return out

    def shift_matrix(self, shift, target=None):
        """Multiplication by ``prod t_i^{shift_i}`` (a 0/1 matrix)."""
        target = self if target is None else target
        out = np.zeros((self.size, target.size), dtype=np.int64)
        for i in range(len(self.lo)):
            for a in range(self.lo[i], self.hi[i]):
                x = a + shift[i]
                if x >= target.hi[i]:
                    continue
                if x < target.lo[i]:
                    raise WindowOverflow(f"t_{i}^{x} below target window")
                out[self.offsets[i] + a - self.lo[i], target.offsets[i] + x - target.lo[i]] = 1
        return out


def span_closure(F, rows, ops, limit=None):
    """Smallest subspace containing ``rows`` and stable under the matrices ``ops``.

    Returns ``(R, pivots)``.  Each pass adds the images of the current
    span; the loop stops when the rank no longer grows.
    """
    R, piv = rref(F, rows)
    passes = 0
    ncols = R.shape[1]
    limit = ncols + 1 if limit is None else limit
    while True:
        if R.shape[0] == 0:
            return R, piv
        images = [matmul(F, R, T) for T in ops]
        S, spiv = rref(F, np.concatenate([R] + images, axis=0))
        if len(spiv) == len(piv):
            return S, spiv
        R, piv = S, spiv
        passes += 1
        if passes > limit:
            raise PrecisionCeiling("span closure did not stabilize")


# branches ---------------------------------------------------------------


@dataclass(frozen=True)
class Branch:
    """One branch ``k[[t]]`` with ``pi = t^n`` and the element ``gamma(t)``.

    Parameters
    ----------
    n : int
        Ramification degree.
    gamma : TruncatedSeries
        Exact polynomial in ``t`` with zero constant term.
    hermitian : bool
        Require every coefficient ``a`` of ``gamma`` to satisfy ``a^* = -a``.
    """

    n: int
    gamma: TruncatedSeries
    hermitian: bool = False

    def validate(self, label="branch"):
        F = self.gamma.field
        if self.n < 1:
            raise SpectralError(f"{label}: n must be >= 1, got {self.n}")
        if self.n % F.p == 0:
            raise SpectralError(
                f"{label}: n={self.n} divisible by the characteristic {F.p} (wild ramification unsupported)"
            )
        if not self.gamma.is_exact:
            raise SpectralError(f"{label}: gamma must be given exactly (a polynomial)")
        if not self.gamma.coeffs:
            raise SpectralError(f"{label}: gamma = 0 is not allowed; use eps*pi^k for a smooth branch")
        if self.gamma.valuation() < 1:
            raise SpectralError(f"{label}: gamma must vanish at t = 0")
        g = self.n
        for e, _ in self.gamma.terms():
            g = math.gcd(g, e)
        if g != 1:
            raise SpectralError(f"{label}: gamma does not generate the branch field (gcd {g})")
        if self.hermitian:
            if not F.is_hermitian:
                raise SpectralError(f"{label}: hermitian branch over a field without involution")
            bad = [e for e, c in self.gamma.terms() if not F.is_skew(c)]
            if bad:
                raise SpectralError(f"{label}: coefficients at t^{bad} violate a^* = -a")


def minimal_polynomial(branch):
    """Characteristic polynomial of multiplication by ``gamma`` on ``k[[t]]`` over ``k[[pi]]``.

    The basis is ``1, t, ..., t^{n-1}``; the entries are exact polynomials
    in ``pi``, so Berkowitz's division-free algorithm returns the exact
    minimal polynomial.
    """
    F = branch.gamma.field
    n = branch.n
    zero = TruncatedSeries.zero(F, "pi")
    one = TruncatedSeries.one(F, "pi")
    entries = [[dict() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for e, c in branch.gamma.terms():
            s, k = divmod(e + j, n)
            entries[k][j][s] = F.plus(entries[k][j].get(s, 0), c)
    M = [[TruncatedSeries.from_terms(F, entries[k][j], "pi") for j in range(n)] for k in range(n)]
    cp = berkowitz(M, zero, one)
    P = SeriesPolynomial(list(reversed(cp)))
    if not P.evaluate(branch.gamma, n).is_zero():
        raise SpectralError("minimal polynomial does not annihilate gamma")
    return P


# orders -----------------------------------------------------------------


@dataclass(frozen=True)
class OrderWindow:
    """Image of ``A`` in a window ``[0, hi)``: echelon basis and its pivots."""

    window: Window
    basis: np.ndarray = dc_field(repr=False)
    pivots: tuple
    field: object = dc_field(repr=False)

    @property
    def level(self):
        return self.window.hi

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def codim(self):
        return self.window.size - self.dim

    def contains(self, rows):
        return in_span(self.field, self.basis, self.pivots, rows)


class SpectralDatum:
    """A family of branches over a finite field, with cached invariants.

    Parameters
    ----------
    field : Field
        Coefficient field ``k``.
    branches : sequence of Branch
    precision_ceiling : int
        Largest truncation level any stabilization loop may reach.
    name : str, optional
    """

    def __init__(self, field, branches, precision_ceiling=128, name=None):
        self.field = field
        self.branches = tuple(branches)
        self.precision_ceiling = precision_ceiling
        self.name = name
        if not self.branches:
            raise SpectralError("at least one branch is required")
        for idx, b in enumerate(self.branches):
            if b.gamma.field != field:
                raise SpectralError(f"branch {idx + 1}: coefficient field mismatch")
            b.validate(f"branch {idx + 1}")
        for i in range(len(self.branches)):
            for j in range(len(self.branches)):
                if i != j:
                    self.r(i, j)
        self._windows = {}

    # basic data --------------------------------------------------------

    def __repr__(self):
        return f"SpectralDatum({self.name or ''} {self.field.label}, n={self.ns})"

    @property
    def size(self):
        return len(self.branches)

    @property
    def ns(self):
        return tuple(b.n for b in self.branches)

    @property
    def n_I(self):
        return sum(self.ns)

    @property
    def hermitian(self):
        return all(b.hermitian for b in self.branches)

    def sub(self, indices, name=None):
        """Fresh datum on the branches ``indices`` (0-based), re-indexed from 0."""
        indices = list(indices)
        if not indices:
            raise SpectralError("sub-datum needs at least one branch")
        return SpectralDatum(
            self.field,
            [self.branches[i] for i in indices],
            self.precision_ceiling,
            name or f"{self.name or 'datum'}[{','.join(str(i + 1) for i in indices)}]",
        )

    def pi(self):
        """``pi`` as an element (per-branch series)."""
        return tuple(TruncatedSeries.monomial(self.field, b.n) for b in self.branches)

    def gamma(self):
        return tuple(b.gamma for b in self.branches)

    def one(self):
        return tuple(TruncatedSeries.one(self.field) for _ in self.branches)

    def operators(self, window, target=None):
        """Multiplication by ``pi`` and ``gamma`` as window matrices."""
        F = self.field
        return window.mul_matrix(F, self.pi(), target), window.mul_matrix(F, self.gamma(), target)

    # minimal polynomials and resultants ----------------------------------

    @cached_property
    def minimal_polynomials(self):
        return tuple(minimal_polynomial(b) for b in self.branches)

    def r(self, i, j):
        """``r_ij = v(P_j(gamma_i))`` (valuation on branch ``i``)."""
        key = (i, j)
        cache = self.__dict__.setdefault("_r", {})
        if key not in cache:
            b = self.branches[i]
            val = self.minimal_polynomials[j].evaluate(b.gamma, b.n)
            if val.is_zero():
                raise SpectralError(f"branches {i + 1} and {j + 1} have the same minimal polynomial")
            cache[key] = val.valuation()
        return cache[key]

    def r_resultant(self, i, j):
        """The same quantity via the Sylvester determinant."""
        return resultant_valuation(self.minimal_polynomials[i], self.minimal_polynomials[j])

    def r_matrix(self):
        m = self.size
        return [[0 if i == j else self.r(i, j) for j in range(m)] for i in range(m)]

    # windows of A ------------------------------------------------------

    def order_window_at(self, hi):
        """Image of ``A`` in the window ``[0, hi)``."""
        hi = tuple(int(x) for x in hi)
        if hi not in self._windows:
            W = Window([0] * self.size, hi)
            ops = self.operators(W)
            one = W.from_series(self.one())[None, :]
            R, piv = span_closure(self.field, one, ops)
            self._windows[hi] = OrderWindow(W, R, piv, self.field)
        return self._windows[hi]

    @cached_property
    def delta_evidence(self):
        return _delta_direct(self)

    @property
    def delta(self):
        return self.delta_evidence["delta"]

    def delta_i(self, i):
        if self.size == 1:
            return self.delta
        return self.sub([i]).delta

    @cached_property
    def conductor(self):
        return conductor_exponents(self)

    def a_window(self):
        """The window ``[0, c)`` in which ``A / a`` lives."""
        return self.order_window_at(self.conductor)


def order_window(datum, M):
    """Image of ``A`` in ``prod k[t_i]/(t_i^M)``."""
    if M > datum.precision_ceiling:
        raise PrecisionCeiling(f"truncation {M} exceeds ceiling {datum.precision_ceiling}")
    return datum.order_window_at([M] * datum.size)


def _conductor_certified(datum, lows):
    """True when ``prod t_i^{lows_i} O`` lies in ``A`` (window ``lows + n``)."""
    hi = [c + n for c, n in zip(lows, datum.ns)]
    ow = datum.order_window_at(hi)
    W = ow.window
    mons = [W.monomial(i, a) for i in range(datum.size) for a in range(lows[i], hi[i])]
    return in_span(datum.field, ow.basis, ow.pivots, np.array(mons))


def _delta_direct(datum):
    step = max(datum.ns)
    history = []
    M = 1
    while True:
        if M + step > datum.precision_ceiling:
            raise PrecisionCeiling(
                f"delta did not stabilize below truncation {datum.precision_ceiling}"
            )
        lo = order_window(datum, M).codim
        hi = order_window(datum, M + step).codim
        history.append((M, lo))
        if lo == hi and _conductor_certified(datum, [M] * datum.size):
            history.append((M + step, hi))
            return {"delta": lo, "level": M, "history": history}
        M += 1


def delta_direct(datum):
    """``dim Ã/A``: window codimension, stabilized and certified.

    The value at level ``M`` is accepted once it agrees with the value at
    ``M + max n_i`` *and* every monomial of degree ``M .. M + max n_i - 1``
    lies in the window image of ``A`` (by Nakayama, ``prod t^M O`` is then
    inside ``A``, so the codimension can no longer change).
    """
    return datum.delta


def delta_formula(datum):
    """``sum delta_i + (1/2) sum_{i != j} r_ij``."""
    m = datum.size
    total = sum(datum.delta_i(i) for i in range(m))
    cross = sum(datum.r(i, j) for i in range(m) for j in range(m) if i != j)
    if cross % 2:
        raise SpectralError("asymmetric resultant valuations")
    return total + cross // 2


def conductor_exponents(datum):
    """Exponents ``c_i = 2 delta_i + sum_{j != i} r_ij``, verified.

    Checks that ``prod t_i^{c_i} O`` lies in ``A``, that no exponent can
    be lowered, and that ``dim A/a = delta``.
    """
    m = datum.size
    c = []
    for i in range(m):
        di = datum.delta if m == 1 else datum.delta_i(i)
        c.append(2 * di + sum(datum.r(i, j) for j in range(m) if j != i))
    if not _conductor_certified(datum, c):
        raise SpectralError(f"conductor exponents {c} fail containment")
    hi = [ci + n for ci, n in zip(c, datum.ns)]
    ow = datum.order_window_at(hi)
    for i in range(m):
        if c[i] > 0 and in_span(datum.field, ow.basis, ow.pivots, ow.window.monomial(i, c[i] - 1)):
            raise SpectralError(f"conductor exponent {c[i]} on branch {i + 1} is not minimal")
    if c and datum.order_window_at(c).dim != datum.delta:
        raise SpectralError("dim A/a differs from delta")
    return c


# duality ----------------------------------------------------------------


@dataclass(frozen=True)
class RosenlichtPairing:
    """Residue pairing between ``Ã/A`` and ``ω/Ω``.

    ``tilde_basis`` lists the monomials ``(branch, exponent)`` spanning
    ``Ã/A``; ``omega_basis`` rows give the coefficients of
    ``t_i^{-e} dt_i`` (``e = 1 .. c_i``) in the window of ``omega_labels``.
    """

    matrix: np.ndarray
    perfect: bool
    tilde_basis: list
    omega_basis: np.ndarray
    omega_labels: list


def rosenlicht_pairing(datum):
    """Residue pairing ``<x, y> = sum_i res(x_i y_i)`` on ``Ã/A x ω/Ω``."""
    F = datum.field
    c = datum.conductor
    ow = datum.order_window_at(c)
    W = ow.window
    labels = W.labels()
    # y = sum_b Y_b t_i^{-e} dt_i with (i, e) in omega_labels;
    # res(t^a * t^{-e}) = 1 iff a = e - 1.
    omega_labels = [(i, -(a + 1)) for (i, a) in labels]
    # Res(x y) for x in the basis of A/a is linear in Y with the same
    # index set, so the constraint matrix is the A-basis itself.
    K, _ = left_kernel(F, ow.basis.T) if ow.dim else (np.eye(W.size, dtype=np.int64), None)
    if K.shape[0] != datum.delta:
        raise SpectralError(f"dim ω/Ω = {K.shape[0]} differs from delta = {datum.delta}")
    tilde = [labels[j] for j in range(W.size) if j not in ow.pivots]
    cols = [j for j in range(W.size) if j not in ow.pivots]
    matrix = K[:, cols].T.copy() if cols else np.zeros((0, 0), dtype=np.int64)
    perfect = matrix.shape[0] == matrix.shape[1] and rank(F, matrix) == matrix.shape[0]
    return RosenlichtPairing(matrix, perfect, tilde, K, omega_labels)
