"""Partitions of the branch set, index invariants and the stratification.

For ``I = I1 ⨿ I2`` a lattice ``M`` of ``E_I`` has intersections
``M'_a = M ∩ E_{I_a}`` and projections ``M''_a``; their indices relative
to the sub-orders ``A_{I_a}`` give ``ind'_a`` and ``ind''_a`` and the
stratum ``rho = ind''_1 - ind'_1``.  The fundamental lemma compares the
``kappa``-orbital integral of ``I`` with ``q^r SO^{I1} SO^{I2}``.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field as dc_field
from math import ceil

import numpy as np

from .linalg import complement_rows, coordinates, left_kernel, matmul, rank, reduce_rows, rref
from .spectral import SpectralError, Window
from .springer import Lattice, z_points, z_points_sandwich
from .unitary import classify_z_points, make_hermitian, orbital_integrals, twisted_frobenius

__all__ = [
    "IndexProfile",
    "OrbitalReport",
    "PartitionSpec",
    "fiber_dimension",
    "index_profile",
    "sample_fiber_pairs",
    "signed_strata_sum",
    "split_lattice",
    "stratify",
    "verify_fundamental_lemma",
]

log = logging.getLogger(__name__)


class InvariantViolation(AssertionError):
    """A proved identity failed on computed data."""


class PartitionSpec:
    """A partition ``I = I1 ⨿ I2`` (0-based branch indices) with its sub-data.

    ``r`` is the sum of the cross resultant valuations; it is checked
    against ``delta_I - delta_{I1} - delta_{I2}``.
    """

    def __init__(self, datum, I1, I2):
        I1, I2 = tuple(sorted(I1)), tuple(sorted(I2))
        if not I1 or not I2:
            raise SpectralError("both parts of a partition must be nonempty")
        if set(I1) & set(I2) or set(I1) | set(I2) != set(range(datum.size)):
            raise SpectralError(f"{I1} | {I2} is not a partition of {datum.size} branches")
        self.datum = datum
        self.I1, self.I2 = I1, I2
        self.r = sum(datum.r(i, j) for i in I1 for j in I2)
        self.sub1 = datum.sub(I1)
        self.sub2 = datum.sub(I2)
        gap = datum.delta - self.sub1.delta - self.sub2.delta
        if gap != self.r:
            raise InvariantViolation(f"r = {self.r} but delta gap = {gap}")

    def parts(self):
        return (self.I1, self.sub1), (self.I2, self.sub2)

    def label(self):
        a = ",".join(str(i + 1) for i in self.I1)
        b = ",".join(str(i + 1) for i in self.I2)
        return f"{{{a}}}|{{{b}}}"

    def to_json(self):
        return {"I1": [i + 1 for i in self.I1], "I2": [i + 1 for i in self.I2], "r": self.r}


def _restrict(W, rows, branches):
    """Columns of ``rows`` belonging to ``branches`` and the sub-window."""
    sub = Window([W.lo[i] for i in branches], [W.hi[i] for i in branches])
    if rows.shape[0] == 0:
        return sub, sub.zeros()
    cols = np.concatenate([np.arange(W.offsets[i], W.offsets[i + 1]) for i in branches]) if sub.size else []
    return sub, rows[:, cols] if sub.size else sub.zeros(rows.shape[0])


def split_lattice(M, part):
    """``(M'_1, M''_1, M'_2, M''_2)`` as lattices over the sub-data."""
    F = M.datum.field
    W = M.window
    out = []
    for (mine, D), (other, _) in zip(part.parts(), reversed(part.parts())):
        sub, proj = _restrict(W, M.basis, mine)
        _, rest = _restrict(W, M.basis, other)
        if M.rank and rest.shape[1]:
            K, _ = left_kernel(F, rest)
            inter = matmul(F, K, proj) if K.shape[0] else sub.zeros()
        else:
            inter = proj
        out.append((Lattice.from_window(D, sub, inter), Lattice.from_window(D, sub, proj)))
    (m1i, m1p), (m2i, m2p) = out
    return m1i, m1p, m2i, m2p


@dataclass(frozen=True)
class IndexProfile:
    """``ind'_1, ind''_1, ind'_2, ind''_2`` and ``rho``."""

    ind1p: int
    ind1pp: int
    ind2p: int
    ind2pp: int

    @property
    def rho(self):
        return self.ind1pp - self.ind1p

    def to_json(self):
        return {
            "ind1'": self.ind1p,
            "ind1''": self.ind1pp,
            "ind2'": self.ind2p,
            "ind2''": self.ind2pp,
            "rho": self.rho,
        }


def index_profile(M, part):
    """Index invariants of ``M``; the identities of the index lemma are asserted."""
    m1i, m1p, m2i, m2p = split_lattice(M, part)
    prof = IndexProfile(m1i.index(), m1p.index(), m2i.index(), m2p.index())
    target = M.index() - part.r
    if prof.ind1p + prof.ind2pp != target or prof.ind2p + prof.ind1pp != target:
        raise InvariantViolation(f"index sums {prof} differ from {target}")
    if prof.ind2pp - prof.ind2p != prof.rho:
        raise InvariantViolation(f"rho differs between the two parts: {prof}")
    if not 0 <= prof.rho <= part.r:
        raise InvariantViolation(f"rho = {prof.rho} outside [0, {part.r}]")
    return prof


def stratify(points, part):
    """``rho -> list of points`` (keys sorted, every ``rho`` in ``[0, r]`` present)."""
    strata = {rho: [] for rho in range(part.r + 1)}
    for M in points:
        strata[index_profile(M, part).rho].append(M)
    return strata


# fibration rank ---------------------------------------------------------


def _quotient(F, top, bottom):
    """Basis of ``span(top) / span(bottom)`` and a coordinate reader."""
    bot, bpiv = rref(F, bottom)
    C, cpiv = complement_rows(F, bot, bpiv, top)

    def coords(rows):
        red = reduce_rows(F, bot, bpiv, rows)
        return coordinates(F, C, cpiv, red)

    return C, coords


def _kron_eye(F, X, n, left):
    """``X ⊗ I_n`` (``left``) or ``I_n ⊗ X``; entries stay field codes."""
    eye = np.eye(n, dtype=np.int64)
    return np.kron(X, eye) if left else np.kron(eye, X)


def hom_dimension(F, Ps, Gs, Pt, Gt):
    """``dim {Phi : Ps Phi = Phi Pt, Gs Phi = Phi Gt}`` (row-vector maps)."""
    ds, dt = Ps.shape[0], Pt.shape[0]
    if ds == 0 or dt == 0:
        return 0
    blocks = []
    for S, T in ((Ps, Pt), (Gs, Gt)):
        blocks.append(F.sub[_kron_eye(F, S, dt, True), _kron_eye(F, T.T, ds, False)])
    E = np.concatenate(blocks, axis=0)
    return ds * dt - rank(F, E)


def _hom_at_depth(M1, M2, part, K):
    F = M1.datum.field
    D1, D2 = M1.datum, M2.datum
    # source M2 / pi^K prod t^h O
    Ws = Window(M2.nu, [h + K * n for h, n in zip(M2.h, D2.ns)])
    S, spiv = rref(F, M2.rows_in(Ws))
    Ps_full, Gs_full = D2.operators(Ws)
    Ps = coordinates(F, S, spiv, matmul(F, S, Ps_full))
    Gs = coordinates(F, S, spiv, matmul(F, S, Gs_full))
    # target pi^{-K} M1 / M1
    Wt = Window([v - K * n for v, n in zip(M1.nu, D1.ns)], M1.h)
    C, coords = _quotient(F, M1.pi_power(-K).rows_in(Wt), M1.rows_in(Wt))
    Pt_full, Gt_full = D1.operators(Wt)
    Pt = coords(matmul(F, C, Pt_full)) if C.shape[0] else C[:, :0]
    Gt = coords(matmul(F, C, Gt_full)) if C.shape[0] else C[:, :0]
    return hom_dimension(F, Ps, Gs, Pt, Gt)


def fiber_depth(part):
    """Truncation depth ``K`` with ``pi^K P_{I2}(gamma_{I1})^{-1} M1 ⊆ M1`` for every ``M1``."""
    c = part.sub1.conductor
    K = 1
    for idx, i in enumerate(part.I1):
        v = sum(part.datum.r(i, j) for j in part.I2)
        K = max(K, ceil((c[idx] + v) / part.datum.ns[i]))
    return K


def fiber_dimension(M1, M2, part, depth=None):
    """``dim Hom_{O_F[T]}(M2, E_{I1} / M1)``; ``T`` acts by ``gamma`` on each side.

    Every such map lands in ``pi^{-K} M1 / M1`` and kills ``pi^K M2``, so
    the Hom space is computed between these finite quotients.  The value
    is recomputed one level deeper and any drift raises.
    """
    K = fiber_depth(part) if depth is None else depth
    a = _hom_at_depth(M1, M2, part, K)
    b = _hom_at_depth(M1, M2, part, K + 1)
    if a != b:
        raise InvariantViolation(f"Hom dimension drifts: {a} at depth {K}, {b} at {K + 1}")
    return a


def shift_index(M, d, branch=0):
    """``t_branch^{-d} M``, whose index is ``M.index() + d``.

    With ``d = -r`` this is the identification ``Z^0 ≅ Z^{-r}``.
    """
    lam = [0] * M.datum.size
    lam[branch] = -d
    return M.shift(lam)


def sample_fiber_pairs(part, count=20, seed=0, route="sandwich"):
    """At least ``count`` pairs ``(M1, M2)``, ``M1`` in ``X^0_{I1}``, ``M2`` in ``X^{-r}_{I2}``.

    ``M1`` ranges over canonical points of ``Z^0_{I1}`` and ``M2`` over
    those of ``Z^0_{I2}`` moved to index ``-r`` by ``t^r`` on the first
    branch of ``I2``; both are moved by random ``Lambda^0`` shifts.  New
    pairs are preferred; when fewer than ``count`` distinct pairs exist
    (e.g. both sides smooth, where each fiber has a single point) the
    list is padded with repeats.  Returns ``(pairs, n_distinct)``.
    """
    rng = random.Random(seed)
    z1 = _z(part.sub1, route).points
    z2 = [shift_index(M, -part.r) for M in _z(part.sub2, route).points]
    pairs, seen = [], set()
    attempts = 0
    while len(seen) < count and attempts < 50 * count:
        attempts += 1
        pair = (_random_shift(rng.choice(z1), rng), _random_shift(rng.choice(z2), rng))
        if pair not in seen:
            seen.add(pair)
            pairs.append(pair)
    while len(pairs) < count:
        pairs.append((_random_shift(rng.choice(z1), rng), _random_shift(rng.choice(z2), rng)))
    return pairs, len(seen)


def _random_shift(M, rng):
    m = M.datum.size
    if m == 1:
        return M
    lam = [rng.randint(-2, 2) for _ in range(m - 1)]
    lam.append(-sum(lam))
    return M.shift(lam)


def _z(datum, route, d=0, budget=10**7):
    if route == "sandwich":
        return z_points_sandwich(datum, d, budget=budget)
    return z_points(datum, d, budget=budget)


# point-count identities -------------------------------------------------


def signed_strata_sum(classification, part):
    """``sum_rho (-1)^{r - rho} |Z^0_rho(F_q)|`` and the per-stratum counts."""
    per = {rho: 0 for rho in range(part.r + 1)}
    for M, _ in classification.fixed:
        per[index_profile(M, part).rho] += 1
    total = sum((-1) ** (part.r - rho) * n for rho, n in per.items())
    return total, per


@dataclass
class OrbitalReport:
    """Every count entering one fundamental-lemma comparison."""

    partition: dict
    q: int
    r: int
    o_kappa: int
    so: int
    counts: dict
    so1: int
    so2: int
    rhs: int
    signed_sum: int
    strata_counts: dict
    z_counts: dict
    evidence: dict = dc_field(default_factory=dict)

    @property
    def fl_holds(self):
        return self.o_kappa == self.rhs

    @property
    def strata_hold(self):
        return self.signed_sum == self.o_kappa

    def to_json(self):
        return {
            "partition": self.partition,
            "q": self.q,
            "r": self.r,
            "counts": self.counts,
            "O_kappa": self.o_kappa,
            "SO": self.so,
            "SO_I1": self.so1,
            "SO_I2": self.so2,
            "fundamental_lemma": {
                "lhs": self.o_kappa,
                "rhs": self.rhs,
                "rhs_formula": f"{self.q}^{self.r} * {self.so1} * {self.so2}",
                "verdict": "PASS" if self.fl_holds else "FAIL",
            },
            "strata": {
                "counts": {str(k): v for k, v in sorted(self.strata_counts.items())},
                "signed_sum": self.signed_sum,
                "verdict": "PASS" if self.strata_hold else "FAIL",
            },
            "z_points": self.z_counts,
            "evidence": self.evidence,
        }


def stable_count(datum, route="sandwich", budget=10**7, absorb=0):
    """``SO = |Z^0(F_q)|`` for a hermitian datum, with the classification."""
    H = make_hermitian(datum)
    z = _z(datum, route, budget=budget)
    cl = classify_z_points(z.points, H, absorb)
    return cl, z


def verify_fundamental_lemma(datum, part, route="sandwich", budget=10**7, absorb=0):
    """Compare ``O^{I, kappa}`` with ``q^r SO^{I1} SO^{I2}`` and the signed strata sum.

    The sub-data get their own hermitian structures.  Index identities
    are asserted for every enumerated point of ``Z^0_I``.
    """
    F = datum.field
    q = F.q
    cl, z = stable_count(datum, route, budget, absorb)
    for M in z.points:
        index_profile(M, part)
    o_kappa, so = orbital_integrals(cl.counts, part.I1)
    cl1, z1 = stable_count(part.sub1, route, budget)
    cl2, z2 = stable_count(part.sub2, route, budget)
    signed, per = signed_strata_sum(cl, part)
    rep = OrbitalReport(
        partition=part.to_json(),
        q=q,
        r=part.r,
        o_kappa=o_kappa,
        so=so,
        counts=cl.to_json()["counts"],
        so1=cl1.total,
        so2=cl2.total,
        rhs=q**part.r * cl1.total * cl2.total,
        signed_sum=signed,
        strata_counts=per,
        z_counts={"I": z.to_json(), "I1": z1.to_json(), "I2": z2.to_json()},
        evidence={
            "discarded": {"I": cl.discarded, "I1": cl1.discarded, "I2": cl2.discarded},
            "absorb": absorb + 1,
        },
    )
    log.info("%s: O^kappa=%d rhs=%d signed=%d", part.label(), o_kappa, rep.rhs, signed)
    return rep
