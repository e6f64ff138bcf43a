"""Shared constructors for the test-suite."""

from springer_lab.cli import corpus_paths
from springer_lab.config import load_config
from springer_lab.fields import galois_field, hermitian_field
from springer_lab.series import TruncatedSeries
from springer_lab.spectral import Branch, SpectralDatum

# branch shapes: (n, {exponent: multiple of eps (or of 1 when plain)})
SHAPES = {
    "smooth": [(1, {1: 1})],
    "cusp": [(2, {3: 1})],
    "node": [(1, {1: 1}), (1, {1: -1})],
    "tacnode": [(1, {1: 1}), (1, {1: 1, 2: 1})],
    "cusp_line": [(2, {3: 1}), (1, {1: 1})],
    "star": [(1, {1: 1}), (1, {1: -1}), (1, {2: 1})],
    "monomial_2_5": [(2, {5: 1})],
    "monomial_3_4": [(3, {4: 1})],
    "node3": [(1, {1: 1}), (1, {1: -1}), (1, {1: 2})],
}


def field(p, e=1, hermitian=True):
    return hermitian_field(p, e) if hermitian else galois_field(p, e)


def datum(shape, p=3, e=1, hermitian=True):
    """A datum of the given shape; coefficients are multiples of eps when hermitian."""
    F = field(p, e, hermitian)
    unit = F.eps if hermitian else 1
    branches = []
    for n, terms in SHAPES[shape]:
        coeffs = {k: F.times(F.from_int(v), unit) for k, v in terms.items()}
        branches.append(Branch(n, TruncatedSeries.from_terms(F, coeffs), hermitian))
    return SpectralDatum(F, branches, name=shape)


def corpus():
    """``name -> ExperimentConfig`` for the packaged corpus."""
    return {p.stem: load_config(p) for p in corpus_paths()}
