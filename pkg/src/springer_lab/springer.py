"""Lattices stable under ``gamma`` and the finite models of the Springer fiber.

A lattice ``L`` is stored in a window-independent normal form:

* ``nu``: the saturation exponents, ``Ã L = prod t_i^{nu_i} O_i``;
* ``h``: the largest product lattice ``prod t_i^{h_i} O_i`` inside ``L``;
* ``basis``: the reduced echelon basis of ``L / prod t^h O`` in the
  window ``[nu, h)``.

Two lattices are equal iff their normal forms are equal, so a lattice
can be hashed and compared without reference to any enumeration window.
Shifting by ``prod t_i^{lambda_i}`` only shifts ``nu`` and ``h``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import ceil

import numpy as np

from .linalg import (
    BudgetExceeded,
    as_matrix,
    complement_rows,
    coordinates,
    grassmannian,
    in_span,
    left_kernel,
    matmul,
    rank,
    reduce_rows,
    rref,
    stable_subspaces,
    subspace_key,
)
from .spectral import PrecisionCeiling, Window, WindowOverflow, span_closure

__all__ = [
    "Lattice",
    "WindowModel",
    "ZPoints",
    "canonicalize",
    "enumerate_fiber",
    "enumerate_fiber_bruteforce",
    "index_of",
    "is_free",
    "lambda_act",
    "n_min",
    "window_model",
    "z_points",
    "z_points_sandwich",
]

log = logging.getLogger(__name__)


class Lattice:
    """An ``A``-lattice in ``E = prod k((t_i))`` in normal form.

    Build with :meth:`from_window`; instances are immutable.
    """

    __slots__ = ("datum", "nu", "h", "basis", "pivots", "_key")

    def __init__(self, datum, nu, h, basis, pivots):
        self.datum = datum
        self.nu = tuple(int(x) for x in nu)
        self.h = tuple(int(x) for x in h)
        self.basis = basis
        self.pivots = tuple(pivots)
        self.basis.setflags(write=False)
        self._key = (self.nu, self.h, self.pivots, tuple(int(x) for x in basis.ravel()))

    # construction ------------------------------------------------------

    @classmethod
    def from_window(cls, datum, window, rows, close=False):
        """``span_k(rows) + prod t^{window.hi} O``, put in normal form.

        ``rows`` must span an ``A``-stable subspace modulo the tail unless
        ``close`` is set, in which case the ``A``-span is taken first.
        """
        F = datum.field
        rows = as_matrix(rows, window.size)
        if close:
            R, piv = span_closure(F, rows, datum.operators(window))
        else:
            R, piv = rref(F, rows)
        m = datum.size
        nu = []
        for i in range(m):
            blk = R[:, window.block(i)]
            nz = np.nonzero(blk.any(axis=0))[0]
            nu.append(window.lo[i] + int(nz[0]) if len(nz) else window.hi[i])
        h = []
        for i in range(m):
            hi_i = window.hi[i]
            while hi_i > nu[i] and in_span(F, R, piv, window.monomial(i, hi_i - 1)):
                hi_i -= 1
            h.append(hi_i)
        target = Window(nu, h)
        B = window.embed(R, target) if R.shape[0] else target.zeros()
        B, bpiv = rref(F, B)
        return cls(datum, nu, h, B, bpiv)

    @classmethod
    def product(cls, datum, exps):
        """The product lattice ``prod t_i^{exps_i} O_i``."""
        W = Window(exps, exps)
        return cls(datum, exps, exps, W.zeros(), ())

    @classmethod
    def order(cls, datum):
        """``A`` itself."""
        ow = datum.a_window()
        return cls.from_window(datum, ow.window, ow.basis)

    @classmethod
    def normalization(cls, datum):
        """``Ã``."""
        return cls.product(datum, [0] * datum.size)

    # inspection --------------------------------------------------------

    @property
    def window(self):
        return Window(self.nu, self.h)

    @property
    def rank(self):
        return len(self.pivots)

    @property
    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Lattice) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"Lattice(nu={self.nu}, h={self.h}, rank={self.rank})"

    def index(self):
        """``[L : A] = dim L/P - dim A/P`` for a common product lattice ``P``."""
        return self.rank - sum(self.h) + self.datum.delta

    def rows_in(self, window):
        """Generators of ``L`` modulo ``prod t^{window.hi} O`` in ``window`` coordinates."""
        if any(a < b for a, b in zip(self.nu, window.lo)):
            raise WindowOverflow("lattice extends below the window")
        rows = [self.window.embed(self.basis, window)] if self.rank else []
        mons = [
            window.monomial(i, a)
            for i in range(self.datum.size)
            for a in range(self.h[i], window.hi[i])
        ]
        if mons:
            rows.append(np.array(mons))
        return np.concatenate(rows, axis=0) if rows else window.zeros()

    def contains(self, other):
        """``other`` is a sublattice of ``self``."""
        if any(a > b for a, b in zip(self.nu, other.nu)):
            return False
        if any(a > b for a, b in zip(self.h, other.h)):
            return False
        if not other.rank:
            return True
        rows = other.window.embed(other.basis, self.window)
        return in_span(self.datum.field, self.basis, self.pivots, rows)

    def element_in(self, row, window):
        """Membership of one element given in ``window`` coordinates."""
        W = self.window
        v = np.asarray(row, dtype=np.int64)
        for i in range(self.datum.size):
            seg = v[window.block(i)]
            nz = np.nonzero(seg)[0]
            if len(nz) and window.lo[i] + nz[0] < self.nu[i]:
                return False
            if window.hi[i] < self.h[i]:
                raise WindowOverflow("element known too coarsely for membership")
        x = window.embed(v, W)
        return in_span(self.datum.field, self.basis, self.pivots, x)

    # operations --------------------------------------------------------

    def shift(self, lam):
        """``prod t_i^{lam_i} L``."""
        nu = [a + b for a, b in zip(self.nu, lam)]
        h = [a + b for a, b in zip(self.h, lam)]
        return Lattice(self.datum, nu, h, self.basis.copy(), self.pivots)

    def pi_power(self, k):
        return self.shift([k * n for n in self.datum.ns])

    def conjugate(self):
        """Coefficientwise ``q``-power map (hermitian fields only)."""
        F = self.datum.field
        B = F.conj[self.basis] if self.rank else self.basis.copy()
        B, piv = rref(F, B)
        return Lattice(self.datum, self.nu, self.h, B, piv)

    def sum(self, other):
        lo = [min(a, b) for a, b in zip(self.nu, other.nu)]
        hi = [max(a, b) for a, b in zip(self.h, other.h)]
        W = Window(lo, hi)
        rows = np.concatenate([self.rows_in(W), other.rows_in(W)], axis=0)
        return Lattice.from_window(self.datum, W, rows)

    def maximal_ideal_image(self):
        """``m_A L = pi L + gamma L``."""
        n = self.datum.ns
        W = Window(self.nu, [a + b for a, b in zip(self.h, n)])
        rows = self.rows_in(W)
        P, G = self.datum.operators(W)
        gens = np.concatenate([matmul(self.datum.field, rows, P), matmul(self.datum.field, rows, G)], axis=0)
        return Lattice.from_window(self.datum, W, gens)

    def to_json(self):
        F = self.datum.field
        return {
            "nu": list(self.nu),
            "h": list(self.h),
            "index": self.index(),
            "basis": [[F.fmt(int(x)) for x in row] for row in self.basis],
        }


def index_of(M, reference):
    """``[M : reference]``."""
    return M.index() - reference.index()


def lambda_act(M, lam, window=None):
    """``prod t_i^{lam_i} M`` for a zero-sum ``lam``.

    If ``window`` is given the result must fit inside it (``lo <= nu`` and
    ``h <= hi``), otherwise :class:`WindowOverflow` is raised.
    """
    if sum(lam) != 0:
        raise ValueError(f"lambda {tuple(lam)} is not zero-sum")
    out = M.shift(lam)
    if window is not None:
        if any(a < b for a, b in zip(out.nu, window.lo)) or any(a > b for a, b in zip(out.h, window.hi)):
            raise WindowOverflow(f"lambda {tuple(lam)} leaves the window")
    return out


def canonicalize(M, absorb=0):
    """Orbit representative with ``nu_i = 0`` for every ``i != absorb``.

    Returns ``(representative, lam)`` with ``representative = lambda_act(M, lam)``.
    """
    m = M.datum.size
    lam = [-M.nu[i] for i in range(m)]
    lam[absorb] = sum(M.nu) - M.nu[absorb]
    return M.shift(lam), tuple(lam)


def is_free(M):
    """Nakayama: ``M`` is free of rank one iff ``dim M / m_A M = 1``."""
    return index_of(M, M.maximal_ideal_image()) == 1


# window model -----------------------------------------------------------


@dataclass
class WindowModel:
    """``V = pi^{-N} A / pi^{(n_I - 1) N - d} A`` with the actions of ``pi`` and ``gamma``.

    ``basis`` rows (in ``window`` coordinates) lift a basis of ``V``;
    ``bottom`` is the echelon basis of ``pi^K A`` in the same window.
    """

    datum: object
    N: int
    d: int
    window: Window
    basis: np.ndarray
    basis_pivots: tuple
    bottom: np.ndarray
    bottom_pivots: tuple
    pi_op: np.ndarray = None
    gamma_op: np.ndarray = None

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def plane_dim(self):
        n = self.datum.n_I
        return (n - 1) * (n * self.N - self.d)

    @property
    def codim(self):
        return self.datum.n_I * self.N - self.d

    def coords(self, rows):
        """Coordinates in ``V`` of window rows lying in ``pi^{-N} A``."""
        F = self.datum.field
        red = reduce_rows(F, self.bottom, self.bottom_pivots, rows)
        return coordinates(F, self.basis, self.basis_pivots, red)

    def to_lattice(self, U):
        """Lattice ``M`` with ``M / pi^K A = U``."""
        F = self.datum.field
        rows = matmul(F, U, self.basis) if U.shape[0] else self.window.zeros()
        return Lattice.from_window(self.datum, self.window, np.concatenate([rows, self.bottom], axis=0))

    def from_lattice(self, M):
        """Subspace of ``V`` for a lattice inside the window (raises otherwise)."""
        rows = M.rows_in(self.window)
        R, _ = rref(self.datum.field, self.coords(rows))
        return R


def window_model(datum, N, d):
    """Build ``V`` with its operators; checks nilpotence and commutation."""
    if d > datum.n_I * N:
        raise ValueError(f"d = {d} exceeds n_I * N = {datum.n_I * N}")
    F = datum.field
    c = datum.conductor
    K = (datum.n_I - 1) * N - d
    ns = datum.ns
    W = Window([-N * n for n in ns], [K * n + ci for n, ci in zip(ns, c)])
    A = Lattice.order(datum)
    top = A.pi_power(-N).rows_in(W)
    bot, bpiv = rref(F, A.pi_power(K).rows_in(W))
    C, cpiv = complement_rows(F, bot, bpiv, top)
    model = WindowModel(datum, N, d, W, C, cpiv, bot, bpiv)
    P, G = datum.operators(W)
    model.pi_op = model.coords(matmul(F, C, P)) if C.shape[0] else C[:, :0]
    model.gamma_op = model.coords(matmul(F, C, G)) if C.shape[0] else C[:, :0]
    expected = datum.n_I * (datum.n_I * N - d)
    if model.dim != expected:
        raise AssertionError(f"dim V = {model.dim}, expected {expected}")
    PG = matmul(F, model.pi_op, model.gamma_op)
    GP = matmul(F, model.gamma_op, model.pi_op)
    if not np.array_equal(PG, GP):
        raise AssertionError("pi and gamma do not commute on V")
    for T in (model.pi_op, model.gamma_op):
        X = np.eye(model.dim, dtype=np.int64)
        for _ in range(model.dim):
            X = matmul(F, X, T)
        if X.any():
            raise AssertionError("operator on V is not nilpotent")
    return model


def _sort_key(R):
    piv = tuple(int(np.nonzero(row)[0][0]) for row in R)
    return (piv, tuple(int(x) for x in R.ravel()))


def enumerate_fiber(model, budget=10**7):
    """All ``pi, gamma``-stable subspaces of ``V`` of the target dimension.

    Returned as lattices, ordered by (pivot pattern, entries) of the
    subspace of ``V``.
    """
    F = model.datum.field
    subs = stable_subspaces(F, model.dim, [model.pi_op, model.gamma_op], model.codim, budget=budget)
    subs.sort(key=_sort_key)
    return [model.to_lattice(U) for U in subs]


def enumerate_fiber_bruteforce(model, budget=10**6):
    """Oracle: scan the whole Grassmannian and keep the stable planes."""
    F = model.datum.field
    found = []
    seen = 0
    for U in grassmannian(F, model.dim, model.plane_dim):
        seen += 1
        if seen > budget:
            raise BudgetExceeded(f"grassmannian scan exceeded budget {budget}")
        piv = rref(F, U)[1]
        ok = True
        for T in (model.pi_op, model.gamma_op):
            if not in_span(F, U, piv, matmul(F, U, T)):
                ok = False
                break
        if ok:
            found.append(U)
    found.sort(key=_sort_key)
    return [model.to_lattice(U) for U in found]


# Z^d: orbit representatives ---------------------------------------------


def n_min(datum, d, absorb=0):
    """Window depth that captures every canonical representative of ``Z^d``.

    A canonical representative has ``nu_i = 0`` off the absorbing branch and
    ``-d <= nu_absorb <= delta - d``; it lies in ``pi^{-N} A`` as soon as
    ``prod t^{nu} O`` lies in ``pi^{-N} a``.
    """
    c = datum.conductor
    return max(
        1,
        max(ceil((c[i] + (max(d, 0) if i == absorb else 0)) / n) for i, n in enumerate(datum.ns)),
    )


@dataclass
class ZPoints:
    """Canonical representatives of ``Z^d`` with stabilization evidence."""

    points: list
    d: int
    absorb: int
    depth: int
    history: list
    route: str

    def __len__(self):
        return len(self.points)

    def to_json(self):
        return {
            "route": self.route,
            "d": self.d,
            "absorb": self.absorb + 1,
            "depth": self.depth,
            "history": [list(x) for x in self.history],
            "count": len(self.points),
        }


def _canonical_set(lattices, absorb):
    reps = {canonicalize(M, absorb)[0] for M in lattices}
    return sorted(reps)


def z_points(datum, d=0, N=None, absorb=0, budget=10**7, max_depth=None):
    """Points of ``Z^d`` via the window model, with a stabilization check.

    The enumeration runs at depth ``N`` (default :func:`n_min`) and again
    at ``N + 1``; the count must agree, otherwise the depth is raised up
    to ``max_depth``.
    """
    N = n_min(datum, d, absorb) if N is None else N
    max_depth = N + 4 if max_depth is None else max_depth
    history = []
    prev = None
    while True:
        if N > max_depth:
            raise PrecisionCeiling(f"Z^{d} count did not stabilize by depth {max_depth}")
        model = window_model(datum, N, d)
        reps = _canonical_set(enumerate_fiber(model, budget), absorb)
        history.append((N, len(reps)))
        log.info("window depth %d: %d canonical points", N, len(reps))
        if prev is not None and reps == prev[1]:
            return ZPoints(prev[1], d, absorb, prev[0], history, "window")
        prev = (N, reps)
        N += 1


def z_points_sandwich(datum, d=0, absorb=0, budget=10**7):
    """Points of ``Z^d`` enumerated between ``Ã``-lattices.

    A canonical representative ``M`` has ``Ã M = M~ = prod t^{nu} O`` with
    ``nu`` zero off the absorbing branch and ``nu_absorb`` in
    ``[-d, delta - d]``; it satisfies ``a M~ ⊆ M ⊆ M~``.  For each
    admissible ``nu`` the ``A``-stable subspaces of ``M~ / a M~`` of the
    right codimension whose saturation is exactly ``nu`` are enumerated.
    """
    F = datum.field
    m = datum.size
    c = datum.conductor
    delta = datum.delta
    points = []
    history = []
    for v in range(-d, delta - d + 1):
        nu = [0] * m
        nu[absorb] = v
        W = Window(nu, [a + b for a, b in zip(nu, c)])
        ops = datum.operators(W)
        codim = delta - v - d
        firsts = [W.column(i, nu[i]) for i in range(m) if W.width(i)]

        def saturated(U, firsts=firsts):
            return all(U[:, j].any() for j in firsts)

        subs = stable_subspaces(F, W.size, list(ops), codim, accept=saturated, budget=budget)
        lats = [Lattice.from_window(datum, W, U) for U in subs]
        for M in lats:
            if M.nu != tuple(nu) or M.index() != d:
                raise AssertionError(f"sandwich produced nu={M.nu}, index={M.index()}")
        history.append((v, len(lats)))
        points.extend(lats)
    return ZPoints(sorted(points), d, absorb, 0, history, "sandwich")
