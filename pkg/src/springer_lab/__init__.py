"""Affine Springer fibers for GL(n) over F_q((pi)) by exact point counting.

Modules
-------
gfseries
    Finite fields and truncated series (facade over ``fields``/``series``).
spectral
    Branch data, the order ``A = O_F[gamma]``, delta, conductor, pairing.
springer
    Lattices, the window model and the points of ``X`` and ``Z``.
unitary
    Hermitian form, twisted Frobenius, ``F_q``-points and orbital integrals.
strata
    Partitions, index profiles, fiber dimensions and the fundamental lemma.
cli
    Configuration files, reports and the ``springer-lab`` command.
"""

__version__ = "0.1.0"
