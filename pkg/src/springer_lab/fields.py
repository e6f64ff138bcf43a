"""Finite fields F_q and F_{q^2} with table arithmetic.

Elements are plain integers ``0 .. order-1``.  For ``F_{p^e}`` the
integer is the base-``p`` digit vector of a polynomial in ``Y`` reduced
modulo a fixed irreducible polynomial.  For the hermitian field
``F_{q^2} = F_q[X]/(X^2 - s)`` (``s`` a non-square of ``F_q``) the code
of ``a + b*X`` is ``a + b*q``; the element ``X`` is ``eps`` and satisfies
``eps**q == -eps``.

In both encodings the prime field ``F_p`` occupies codes ``0 .. p-1`` with
its natural meaning, so ``from_int`` is simply reduction mod ``p``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

__all__ = [
    "Field",
    "FieldError",
    "galois_field",
    "hermitian_field",
    "prime_field",
]


class FieldError(ValueError):
    """Raised for unsupported field parameters."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


class Field:
    """A finite field given by its addition and multiplication tables.

    Parameters
    ----------
    p : int
        Characteristic.
    degree : int
        Degree over the prime field; ``order == p**degree``.
    add, mul : ndarray
        ``order x order`` integer tables.
    label : str
        Human-readable name, used in reports.
    conj : ndarray, optional
        Table of the ``q``-power involution when this field is the
        quadratic extension of ``F_q``.
    eps : int, optional
        An element with ``conj[eps] == neg[eps]``.
    """

    def __init__(self, p, degree, add, mul, label, conj=None, eps=None, subfield_order=None):
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.add = add
        self.mul = mul
        self.label = label
        self.neg = np.argmin(add, axis=1).astype(np.int64)
        inv = np.zeros(self.order, dtype=np.int64)
        for a in range(1, self.order):
            row = mul[a]
            hits = np.nonzero(row == 1)[0]
            if len(hits) != 1:
                raise FieldError(f"{label}: element {a} has no inverse")
            inv[a] = hits[0]
        self.inv = inv
        self.sub = self.add[np.arange(self.order)[:, None], self.neg[None, :]]
        self.conj = conj
        self.eps = eps
        self.subfield_order = subfield_order

    def __repr__(self):
        return f"Field({self.label})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.label == other.label

    def __hash__(self):
        return hash(self.label)

    @property
    def is_prime(self) -> bool:
        return self.degree == 1

    @property
    def is_hermitian(self) -> bool:
        return self.conj is not None

    @property
    def q(self) -> int:
        """Order of the fixed field of the involution (hermitian fields only)."""
        if self.subfield_order is None:
            raise FieldError(f"{self.label} carries no involution")
        return self.subfield_order

    # scalar helpers -----------------------------------------------------

    def from_int(self, n: int) -> int:
        return int(n) % self.p

    def elements(self):
        return range(self.order)

    def nonzero(self):
        return range(1, self.order)

    def plus(self, a: int, b: int) -> int:
        return int(self.add[a, b])

    def minus(self, a: int, b: int) -> int:
        return int(self.sub[a, b])

    def times(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def negate(self, a: int) -> int:
        return int(self.neg[a])

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.label)
        return int(self.inv[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse(a), -k)
        result, base = 1, a
        while k:
            if k & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            k >>= 1
        return result

    def involution(self, a: int) -> int:
        """The ``q``-power map ``a -> a^*``."""
        if self.conj is None:
            raise FieldError(f"{self.label} carries no involution")
        return int(self.conj[a])

    def in_fixed_field(self, a: int) -> bool:
        return self.involution(a) == a

    def is_skew(self, a: int) -> bool:
        """True when ``a^* == -a`` (the trace-zero condition)."""
        return self.involution(a) == self.negate(a)

    def element(self, plain: int, eps_part: int = 0) -> int:
        """The element ``plain + eps_part * eps`` with integer parts read mod ``p``."""
        a = self.from_int(plain)
        if eps_part % self.p:
            if self.eps is None:
                raise FieldError(f"{self.label} has no eps; eps parts are not allowed")
            a = self.plus(a, self.times(self.from_int(eps_part), self.eps))
        return a

    def fmt(self, a: int) -> str:
        """Stable textual form of an element."""
        if self.eps is not None and self.subfield_order is not None:
            q = self.subfield_order
            lo, hi = a % q, a // q
            if hi == 0:
                return str(lo)
            return f"{lo}+{hi}e" if lo else f"{hi}e"
        return str(a)


def _poly_mulmod(a, b, modulus, p):
    """Multiply digit lists ``a*b`` modulo the monic ``modulus`` over F_p."""
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * modulus[j]) % p
    return prod[:e]


def _digits(n, p, e):
    return [(n // p**i) % p for i in range(e)]


def _build_extension(p, e, modulus):
    order = p**e
    add = np.zeros((order, order), dtype=np.int64)
    mul = np.zeros((order, order), dtype=np.int64)
    digits = [_digits(n, p, e) for n in range(order)]
    weights = [p**i for i in range(e)]
    for a in range(order):
        da = digits[a]
        for b in range(a, order):
            db = digits[b]
            s = sum(((x + y) % p) * w for x, y, w in zip(da, db, weights))
            m = sum(c * w for c, w in zip(_poly_mulmod(da, db, modulus, p), weights))
            add[a, b] = add[b, a] = s
            mul[a, b] = mul[b, a] = m
    return add, mul


def _has_inverses(mul):
    return all((mul[a] == 1).any() for a in range(1, mul.shape[0]))


@lru_cache(maxsize=None)
def prime_field(p: int) -> Field:
    if not _is_prime(p):
        raise FieldError(f"{p} is not prime")
    r = np.arange(p)
    return Field(p, 1, (r[:, None] + r[None, :]) % p, (r[:, None] * r[None, :]) % p, f"F{p}")


@lru_cache(maxsize=None)
def galois_field(p: int, e: int = 1) -> Field:
    """``F_{p^e}``; the modulus is the lexicographically first irreducible."""
    if e == 1:
        return prime_field(p)
    if not _is_prime(p) or e < 1:
        raise FieldError(f"bad field parameters p={p}, e={e}")
    for tail in itertools.product(range(p), repeat=e):
        if tail[0] == 0:
            continue
        modulus = list(tail) + [1]
        add, mul = _build_extension(p, e, modulus)
        if _has_inverses(mul):
            return Field(p, e, add, mul, f"F{p}^{e}")
    raise FieldError(f"no irreducible polynomial of degree {e} over F{p}")


@lru_cache(maxsize=None)
def hermitian_field(p: int, e: int = 1) -> Field:
    """``F_{q^2}`` over ``F_q`` (``q = p**e``, ``p`` odd) with its involution and ``eps``."""
    if p == 2:
        raise FieldError("even characteristic is not supported")
    base = galois_field(p, e)
    q = base.order
    squares = {int(base.mul[a, a]) for a in base.nonzero()}
    s = min(a for a in base.nonzero() if a not in squares)
    order = q * q
    add = np.zeros((order, order), dtype=np.int64)
    mul = np.zeros((order, order), dtype=np.int64)
    bA, bM = base.add, base.mul
    for x in range(order):
        a, b = x % q, x // q
        for y in range(x, order):
            c, d = y % q, y // q
            add[x, y] = add[y, x] = bA[a, c] + q * bA[b, d]
            re = bA[bM[a, c], bM[s, bM[b, d]]]
            im = bA[bM[a, d], bM[b, c]]
            mul[x, y] = mul[y, x] = re + q * im
    conj = np.array([(x % q) + q * int(base.neg[x // q]) for x in range(order)], dtype=np.int64)
    label = f"F{q}^2" if e == 1 else f"F{p}^{e}^2"
    return Field(p, 2 * e, add, mul, label, conj=conj, eps=q, subfield_order=q)
