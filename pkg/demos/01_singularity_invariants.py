"""Invariants of a few plane curve singularities.

Each branch is a parametrization ``pi = t^n``, ``gamma = gamma(t)``; the
local ring of the curve is ``A = O_F[gamma]`` inside the product of the
branch rings.  We compute delta twice (directly, and from the branch
deltas plus the pairwise intersection numbers), the conductor, and check
that the residue pairing between ``Ã/A`` and ``ω/Ω`` is perfect.

Run:  python demos/01_singularity_invariants.py
"""

from springer_lab.fields import hermitian_field
from springer_lab.series import TruncatedSeries
from springer_lab.spectral import Branch, SpectralDatum, delta_formula, rosenlicht_pairing

F = hermitian_field(5)  # k = F_25, eps^2 = 2
eps = F.eps


def branch(n, terms):
    return Branch(n, TruncatedSeries.from_terms(F, {e: F.times(F.from_int(c), eps) for e, c in terms.items()}), True)


curves = {
    "cusp  y^2 = x^3": [branch(2, {3: 1})],
    "E6    y^3 = x^4": [branch(3, {4: 1})],
    "node": [branch(1, {1: 1}), branch(1, {1: -1})],
    "tacnode": [branch(1, {1: 1}), branch(1, {1: 1, 2: 1})],
    "cusp + transverse line": [branch(2, {3: 1}), branch(1, {1: 1})],
}

for name, branches in curves.items():
    D = SpectralDatum(F, branches, name=name)
    pairing = rosenlicht_pairing(D)
    print(f"{name}")
    print(f"  minimal polynomials: {[repr(P) for P in D.minimal_polynomials]}")
    print(f"  delta = {D.delta} (formula: {delta_formula(D)}), branch deltas {[D.delta_i(i) for i in range(D.size)]}")
    print(f"  intersection numbers r_ij = {D.r_matrix()}")
    print(f"  conductor exponents = {list(D.conductor)}")
    print(f"  residue pairing {pairing.matrix.shape[0]}x{pairing.matrix.shape[1]}, perfect: {pairing.perfect}")
