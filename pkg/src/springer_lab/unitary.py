"""Hermitian structure, twisted Frobenius and orbital integrals.

Over ``k = F_{q^2}`` with involution ``a -> a^*`` and ``eps^* = -eps``,
a datum whose ``gamma`` coefficients satisfy ``a^* = -a`` carries the
hermitian form

    <x, y> = sum_i Tr_{E_i/F}(alpha_i^{-1} x_i^* y_i),
    alpha = eps^{n_I - 1} P_I'(gamma),

for which ``A`` is its own dual.  The twisted Frobenius sends a lattice
``M`` to its dual ``M^perp``; its fixed points in ``Z^0`` (up to the
``Lambda^0`` action) are the ``F_q``-points, sorted by the class of the
defect ``lambda`` modulo ``2 Lambda^0``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .linalg import left_kernel
from .series import TruncatedSeries
from .spectral import SpectralError, Window
from .springer import Lattice, canonicalize

__all__ = [
    "Classification",
    "HermitianData",
    "classify_z_points",
    "dual_lattice",
    "hermitian_pair",
    "lambda_classes",
    "make_hermitian",
    "orbital_integrals",
    "trace",
    "twisted_frobenius",
]


class HermitianData:
    """``eps``, the elements ``alpha_i`` and cached inverses for one datum."""

    def __init__(self, datum, alphas, derivative_values):
        self.datum = datum
        self.field = datum.field
        self.eps = datum.field.eps
        self.alphas = tuple(alphas)
        self.derivative_values = tuple(derivative_values)
        self._inverse = {}

    @property
    def alpha_valuations(self):
        return tuple(a.valuation() for a in self.alphas)

    def alpha_inverse(self, i, prec):
        """``alpha_i^{-1}`` known below ``t^prec`` (at least)."""
        cached = self._inverse.get(i)
        if cached is None or cached.prec < prec:
            v = self.alphas[i].valuation()
            prec = max(prec, -v + 1)
            cached = self.alphas[i].inverse(prec)
            self._inverse[i] = cached
        return cached

    def to_json(self):
        return {
            "alpha": [a.to_json() for a in self.alphas],
            "alpha_valuations": list(self.alpha_valuations),
        }


def make_hermitian(datum):
    """``alpha_i = eps^{n_I - 1} P_i'(gamma_i) prod_{j != i} P_j(gamma_i)``.

    Raises :class:`SpectralError` when a branch is not hermitian or when
    some ``alpha_i`` is not fixed by the involution.
    """
    F = datum.field
    if not F.is_hermitian:
        raise SpectralError(f"{F.label} carries no involution")
    if not datum.hermitian:
        raise SpectralError("every branch must satisfy gamma^* = -gamma")
    scale = F.power(F.eps, datum.n_I - 1)
    alphas, derivs = [], []
    P = datum.minimal_polynomials
    for i, b in enumerate(datum.branches):
        val = P[i].derivative().evaluate(b.gamma, b.n)
        for j in range(datum.size):
            if j != i:
                val = val * P[j].evaluate(b.gamma, b.n)
        derivs.append(val)
        alpha = val.scale(scale)
        if not alpha.agrees_with(alpha.involution()):
            raise SpectralError(f"alpha on branch {i + 1} is not fixed by the involution")
        alphas.append(alpha)
    return HermitianData(datum, alphas, derivs)


def trace(s, n, field):
    """``Tr_{k((t))/k((pi))}`` for ``pi = t^n``, ``p`` not dividing ``n``.

    ``Tr(t^a) = n pi^{a/n}`` when ``n | a`` and ``0`` otherwise.
    """
    nn = field.from_int(n)
    terms = {e // n: field.times(nn, c) for e, c in s.terms() if e % n == 0}
    prec = None if s.prec is None else -((-s.prec) // n)
    return TruncatedSeries.from_terms(field, terms, "pi", prec)


def hermitian_pair(x, y, H, prec=1):
    """``<x, y>`` as a series in ``pi`` known below ``pi^prec``.

    ``x`` and ``y`` are per-branch series in ``t``.
    """
    F = H.field
    total = TruncatedSeries.zero(F, "pi")
    for i, b in enumerate(H.datum.branches):
        xs, ys = x[i].involution(), y[i]
        if xs.known_zero() and xs.is_exact or ys.known_zero() and ys.is_exact:
            continue
        vxy = _vlow(xs) + _vlow(ys)
        need = prec * b.n - vxy
        s = H.alpha_inverse(i, need) * xs * ys
        total = total + trace(s, b.n, F).truncate(prec)
    return total.truncate(prec)


def _vlow(s):
    if s.coeffs:
        return s.start
    return s.prec if s.prec is not None else 0


def dual_lattice(M, H):
    """``M^perp = {y : <M, y> ⊆ O_F}``.

    ``M`` sits between ``prod t^h O`` and ``prod t^nu O`` so its dual sits
    between ``prod t^{c - nu} O`` and ``prod t^{c - h} O``; the condition
    is linear in ``y`` on that window.
    """
    datum = M.datum
    F = datum.field
    c = datum.conductor
    m = datum.size
    Wd = Window([ci - hi for ci, hi in zip(c, M.h)], [ci - ni for ci, ni in zip(c, M.nu)])
    if M.rank == 0 or Wd.size == 0:
        return Lattice.from_window(datum, Wd, Wd.zeros())
    Wm = M.window
    # products alpha_i^{-1} m_i^* for each basis row, per branch
    prods = []
    kmax = 1
    for r in range(M.rank):
        per = []
        for i, b in enumerate(datum.branches):
            seg = Wm.series(F, M.basis[r], i, exact=True).involution()
            if seg.known_zero():
                per.append(None)
                continue
            need = M.h[i] - c[i] - M.nu[i] + 1
            s = H.alpha_inverse(i, need) * seg
            per.append(s)
            lowest = s.start + Wd.lo[i]
            kmax = max(kmax, -(lowest // b.n) + 1)
        prods.append(per)
    eqs = []
    for r in range(M.rank):
        for k in range(1, kmax + 1):
            row = np.zeros(Wd.size, dtype=np.int64)
            for i, b in enumerate(datum.branches):
                s = prods[r][i]
                if s is None:
                    continue
                nn = F.from_int(b.n)
                for bexp in range(Wd.lo[i], Wd.hi[i]):
                    e = -k * b.n - bexp
                    if e < s.start:
                        continue
                    coef = s.coefficient(e)
                    if coef:
                        row[Wd.column(i, bexp)] = F.times(nn, coef)
            if row.any():
                eqs.append(row)
    if not eqs:
        K = np.eye(Wd.size, dtype=np.int64)
    else:
        K, _ = left_kernel(F, np.array(eqs).T)
    return Lattice.from_window(datum, Wd, K)


def twisted_frobenius(M, H):
    """The Frobenius of the ``F_q``-structure: ``M -> M^perp``.

    The form is ``q``-semilinear in its first argument, so the dual
    already carries the coefficient Frobenius.  Applied twice it is the
    identity, as the ``q^2``-Frobenius fixes every lattice defined over
    ``k = F_{q^2}``.
    """
    return dual_lattice(M, H)


def lambda_classes(m):
    """Even-weight vectors of ``F_2^m`` (the classes of ``Lambda^0 / 2 Lambda^0``), sorted."""
    return [v for v in itertools.product((0, 1), repeat=m) if sum(v) % 2 == 0]


@dataclass
class Classification:
    """``F_q``-points of ``Z^0`` sorted by ``lambda``-class."""

    counts: dict
    fixed: list = dc_field(repr=False)
    discarded: int = 0
    absorb: int = 0

    @property
    def total(self):
        return sum(self.counts.values())

    def class_of(self, M):
        for rep, cls in self.fixed:
            if rep == M:
                return cls
        raise KeyError("not a fixed point")

    def to_json(self):
        return {
            "counts": {"".join(map(str, k)): v for k, v in sorted(self.counts.items())},
            "fixed": self.total,
            "discarded": self.discarded,
            "absorb": self.absorb + 1,
        }


def classify_z_points(points, H, absorb=0):
    """Count twisted-Frobenius-fixed canonical representatives per class.

    For a representative ``M`` with ``Frob(M) = t^lambda M`` the class is
    ``lambda mod 2``; representatives whose image lies in another orbit
    are not ``F_q``-points and are discarded.  Points are re-normalized
    with respect to ``absorb`` first.
    """
    m = H.datum.size
    counts = {cls: 0 for cls in lambda_classes(m)}
    fixed = []
    discarded = 0
    for P in points:
        M, _ = canonicalize(P, absorb)
        img = twisted_frobenius(M, H)
        rep, _ = canonicalize(img, absorb)
        if rep != M:
            discarded += 1
            continue
        lam = tuple(a - b for a, b in zip(img.nu, M.nu))
        cls = tuple(x % 2 for x in lam)
        counts[cls] += 1
        fixed.append((M, cls))
    return Classification(counts, fixed, discarded, absorb)


def kappa(cls, I1):
    """``kappa(lambda) = (-1)^{sum_{i in I1} lambda_i}``."""
    return -1 if sum(cls[i] for i in I1) % 2 else 1


def orbital_integrals(counts, I1):
    """``(O^kappa, SO)`` from per-class counts and the first block ``I1``."""
    o_kappa = sum(kappa(cls, I1) * v for cls, v in counts.items())
    so = sum(counts.values())
    return o_kappa, so
