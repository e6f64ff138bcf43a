"""Counting points of affine Springer fibers.

The fiber ``X`` is the set of ``A``-lattices in ``E = prod k((t_i))``;
``Z^0`` is its index-zero part modulo the lattice ``Lambda^0`` of
zero-sum translations.  For the ordinary cusp over ``F_q'`` the
normalization map is a homeomorphism onto a projective line, so
``|Z^0| = q' + 1``; for the node the two ends of the line are glued
and ``|Z^0| = q'``.

Two independent enumerations are compared with an exhaustive scan of a
Grassmannian.

Run:  python demos/02_springer_fiber_points.py
"""

from springer_lab.fields import galois_field
from springer_lab.series import TruncatedSeries
from springer_lab.spectral import Branch, SpectralDatum
from springer_lab.springer import (
    enumerate_fiber,
    enumerate_fiber_bruteforce,
    is_free,
    n_min,
    window_model,
    z_points,
    z_points_sandwich,
)


def datum(F, spec):
    return SpectralDatum(F, [Branch(n, TruncatedSeries.from_terms(F, t)) for n, t in spec])


for q in (3, 9):
    F = galois_field(3, 1 if q == 3 else 2)
    cusp = datum(F, [(2, {3: 1})])
    node = datum(F, [(1, {1: 1}), (1, {1: F.negate(1)})])
    for name, D in (("cusp", cusp), ("node", node)):
        w = z_points(D)
        s = z_points_sandwich(D)
        free = sum(is_free(M) for M in s.points)
        print(f"{name} over F_{q}: window route {len(w)} points (depths {w.history}), "
              f"sandwich route {len(s)} points, {free} of them free")

# the oracle at the smallest window depth
F = galois_field(3)
D = datum(F, [(2, {3: 1})])
model = window_model(D, n_min(D, 0), 0)
fast, slow = enumerate_fiber(model), enumerate_fiber_bruteforce(model)
print(f"cusp window at depth {model.N}: dim V = {model.dim}, "
      f"descent {len(fast)} planes, Grassmannian scan {len(slow)}, equal: {fast == slow}")
for M in z_points(D).points:
    print(f"  nu={M.nu} h={M.h} free={is_free(M)}")
