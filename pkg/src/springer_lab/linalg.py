"""Dense linear algebra over a table field.

Vectors are rows of ``int64`` numpy arrays holding field codes.  Every
routine takes the :class:`~springer_lab.fields.Field` as first argument.
Subspaces are carried as reduced row-echelon matrices (``rref``); two
subspaces are equal iff their ``rref`` are equal, which is what
:func:`subspace_key` hashes.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = [
    "BudgetExceeded",
    "as_matrix",
    "coordinates",
    "grassmannian",
    "in_span",
    "left_kernel",
    "matmul",
    "rank",
    "reduce_rows",
    "rref",
    "stable_subspaces",
    "subspace_key",
    "complement_rows",
]


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration exceeds its configured candidate budget."""


def as_matrix(rows, ncols):
    if len(rows) == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim == 2 and arr.shape[1] == ncols:
        return arr
    return arr.reshape(-1, ncols)


def matmul(F, X, Y):
    """Matrix product ``X @ Y`` over ``F``."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    if X.shape[1] != Y.shape[0]:
        raise ValueError(f"shape mismatch {X.shape} @ {Y.shape}")
    if F.is_prime:
        return (X @ Y) % F.p
    out = np.zeros((X.shape[0], Y.shape[1]), dtype=np.int64)
    for k in range(X.shape[1]):
        col = X[:, k]
        if not col.any():
            continue
        out = F.add[out, F.mul[col[:, None], Y[k][None, :]]]
    return out


def rref(F, M):
    """Reduced row-echelon form; returns ``(R, pivots)`` with zero rows dropped."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    nrows, ncols = R.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        lead = R[r, c]
        if lead != 1:
            R[r] = F.mul[F.inv[lead], R[r]]
        col = R[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if len(hit):
            R[hit] = F.sub[R[hit], F.mul[col[hit][:, None], R[r][None, :]]]
        pivots.append(c)
        r += 1
    return R[:r], tuple(pivots)


def rank(F, M):
    return len(rref(F, M)[1])


def reduce_rows(F, R, pivots, V):
    """Reduce the rows of ``V`` modulo the echelon basis ``(R, pivots)``."""
    V = np.array(V, dtype=np.int64, copy=True)
    if V.ndim == 1:
        V = V[None, :]
    for row, c in zip(R, pivots):
        coef = V[:, c].copy()
        hit = np.nonzero(coef)[0]
        if len(hit):
            V[hit] = F.sub[V[hit], F.mul[coef[hit][:, None], row[None, :]]]
    return V


def in_span(F, R, pivots, V):
    """True iff every row of ``V`` lies in the row space of ``R``."""
    return not reduce_rows(F, R, pivots, V).any()


def coordinates(F, R, pivots, V):
    """Coefficients of the rows of ``V`` in the echelon basis ``R``.

    Raises ``ValueError`` when some row is outside the span.
    """
    V = np.asarray(V, dtype=np.int64)
    if V.ndim == 1:
        V = V[None, :]
    if reduce_rows(F, R, pivots, V).any():
        raise ValueError("vector not in span")
    return V[:, list(pivots)] if pivots else np.zeros((V.shape[0], 0), dtype=np.int64)


def complement_rows(F, bottom, bottom_pivots, top):
    """Echelon rows spanning a complement of ``bottom`` inside ``span(top)``.

    The result is reduced against ``bottom`` so that any vector ``x`` of
    ``span(top)`` satisfies ``reduce(x, bottom) == coords @ C`` where
    ``coords`` are read off at the returned pivots.
    """
    residue = reduce_rows(F, bottom, bottom_pivots, top)
    return rref(F, residue)


def left_kernel(F, M):
    """Echelon basis of ``{x : x @ M == 0}``."""
    M = np.asarray(M, dtype=np.int64)
    m, n = M.shape
    aug = np.concatenate([M, np.eye(m, dtype=np.int64)], axis=1)
    R, piv = rref(F, aug)
    rows = [R[i, n:] for i, c in enumerate(piv) if c >= n]
    if not rows:
        return np.zeros((0, m), dtype=np.int64), ()
    return rref(F, np.array(rows))


def subspace_key(R):
    R = np.ascontiguousarray(R, dtype=np.int64)
    return (R.shape, R.tobytes())


def _projective_points(F, s):
    """Normalized nonzero vectors of ``F^s`` up to scalars (first nonzero = 1)."""
    for lead in range(s):
        for tail in itertools.product(range(F.order), repeat=s - lead - 1):
            yield (0,) * lead + (1,) + tail


def stable_subspaces(F, dim, ops, codim, accept=None, budget=10**7):
    """All subspaces of ``F^dim`` of the given codimension stable under ``ops``.

    ``ops`` are commuting nilpotent matrices (row-vector convention).
    Descent: every stable subspace of codimension ``c+1`` is a hyperplane
    of a stable subspace of codimension ``c`` containing its image under
    the operators, so the levels are generated one at a time and deduped.

    ``accept`` (optional) prunes a level: it must be monotone, i.e. if it
    rejects ``U`` it rejects every stable subspace of ``U``.

    Returns the list of echelon matrices in sorted key order.
    """
    level = {subspace_key(np.eye(dim, dtype=np.int64)): np.eye(dim, dtype=np.int64)}
    spent = 0
    for _ in range(codim):
        nxt = {}
        for U in level.values():
            if U.shape[0] == 0:
                continue
            images = [matmul(F, U, T) for T in ops]
            mU, mpiv = rref(F, np.concatenate(images, axis=0)) if images else (U[:0], ())
            C, _ = complement_rows(F, mU, mpiv, U)
            s = C.shape[0]
            for f in _projective_points(F, s):
                spent += 1
                if spent > budget:
                    raise BudgetExceeded(f"descent exceeded budget {budget}")
                lead = f.index(1)
                # kernel of the functional f on span(C), plus mU
                kernel = [
                    F.sub[C[j], F.mul[f[j], C[lead]]] if f[j] else C[j]
                    for j in range(s)
                    if j != lead
                ]
                H = np.concatenate([mU] + [np.array(kernel)] * bool(kernel), axis=0)
                H, _ = rref(F, H)
                key = subspace_key(H)
                if key in nxt:
                    continue
                if accept is not None and not accept(H):
                    continue
                nxt[key] = H
        level = nxt
    return [level[k] for k in sorted(level)]


def grassmannian(F, n, k):
    """Iterate every ``k``-dimensional subspace of ``F^n`` as an rref matrix.

    Ordered by pivot pattern (lexicographic), then by free entries.
    """
    field_range = range(F.order)
    for pivots in itertools.combinations(range(n), k):
        free = [
            (i, c)
            for i, p in enumerate(pivots)
            for c in range(p + 1, n)
            if c not in pivots
        ]
        base = np.zeros((k, n), dtype=np.int64)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        for values in itertools.product(field_range, repeat=len(free)):
            M = base.copy()
            for (i, c), v in zip(free, values):
                M[i, c] = v
            yield M
