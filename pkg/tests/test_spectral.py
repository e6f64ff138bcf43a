import numpy as np
import pytest

from springer_lab.fields import hermitian_field, prime_field
from springer_lab.series import TruncatedSeries as T
from springer_lab.spectral import (
    Branch,
    SpectralDatum,
    SpectralError,
    Window,
    conductor_exponents,
    delta_direct,
    delta_formula,
    rosenlicht_pairing,
)

from _builders import datum


@pytest.mark.parametrize(
    "shape,p,delta,conductor",
    [
        ("smooth", 3, 0, [0]),
        ("cusp", 3, 1, [2]),
        ("node", 3, 1, [1, 1]),
        ("tacnode", 3, 2, [2, 2]),
        ("cusp_line", 3, 3, [4, 2]),
        ("star", 3, 3, [2, 2, 2]),
        ("monomial_2_5", 3, 2, [4]),
        ("monomial_3_4", 5, 3, [6]),
        ("node3", 5, 3, [2, 2, 2]),
    ],
)
def test_delta_and_conductor(shape, p, delta, conductor):
    D = datum(shape, p)
    assert delta_direct(D) == delta
    assert delta_formula(D) == delta
    assert list(conductor_exponents(D)) == conductor
    assert D.a_window().dim == delta


def test_r_matrix_examples():
    assert datum("node").r_matrix() == [[0, 1], [1, 0]]
    assert datum("tacnode").r_matrix() == [[0, 2], [2, 0]]
    assert datum("cusp_line").r_matrix() == [[0, 2], [2, 0]]


@pytest.mark.parametrize("shape", ["node", "tacnode", "cusp_line", "star"])
def test_r_equals_resultant_valuation_and_is_symmetric(shape):
    D = datum(shape)
    for i in range(D.size):
        for j in range(D.size):
            if i != j:
                assert D.r(i, j) == D.r(j, i) == D.r_resultant(i, j)


@pytest.mark.parametrize("shape", ["smooth", "cusp", "node", "tacnode", "cusp_line", "star"])
def test_minimal_polynomial_kills_gamma(shape):
    D = datum(shape)
    for P, b in zip(D.minimal_polynomials, D.branches):
        assert P.is_monic() and P.degree == b.n
        assert P.evaluate(b.gamma, b.n).known_zero()


@pytest.mark.parametrize("shape", ["smooth", "cusp", "node", "tacnode", "cusp_line", "star"])
def test_rosenlicht_pairing_perfect(shape):
    D = datum(shape)
    pr = rosenlicht_pairing(D)
    assert pr.matrix.shape == (D.delta, D.delta)
    assert pr.perfect


def test_smooth_pairing_is_empty():
    pr = rosenlicht_pairing(datum("smooth"))
    assert pr.matrix.shape == (0, 0) and pr.perfect


def test_conductor_is_an_ideal_and_minimal():
    D = datum("cusp_line")
    c = D.conductor
    ow = D.order_window_at([x + n for x, n in zip(c, D.ns)])
    W = ow.window
    # every monomial t_i^a with a >= c_i lies in A (modulo the window top)
    for i in range(D.size):
        for a in range(c[i], W.hi[i]):
            assert ow.contains(W.monomial(i, a)[None, :])
    # but t_i^{c_i - 1} times the other branches' conductor does not
    for i in range(D.size):
        exps = list(c)
        exps[i] -= 1
        rows = np.array([W.monomial(j, a) for j in range(D.size) for a in range(exps[j], W.hi[j])])
        assert not ow.contains(rows)


def test_sub_datum():
    D = datum("star")
    S = D.sub([0, 2])
    assert S.size == 2 and S.delta == 1
    assert D.delta == S.delta + D.sub([1]).delta + D.r(1, 0) + D.r(1, 2)


def test_window_roundtrip():
    F = hermitian_field(3)
    W = Window([-1, 0], [2, 3])
    x = T.from_terms(F, {-1: 1, 1: F.eps})
    row = W.from_series([x, T.monomial(F, 2, 2)])
    assert W.series(F, row, 0, exact=True) == x
    assert W.labels()[0] == (0, -1)


class TestValidation:
    def test_wild_ramification_rejected(self):
        F = hermitian_field(3)
        with pytest.raises(SpectralError, match="characteristic"):
            SpectralDatum(F, [Branch(3, T.monomial(F, 4, F.eps), True)])

    def test_trace_zero_violation(self):
        F = hermitian_field(3)
        with pytest.raises(SpectralError, match="violate"):
            SpectralDatum(F, [Branch(1, T.monomial(F, 1, 1), True)])

    def test_gamma_must_generate(self):
        F = prime_field(5)
        with pytest.raises(SpectralError, match="generate"):
            SpectralDatum(F, [Branch(2, T.monomial(F, 2, 1))])

    def test_gamma_nonzero_and_vanishing(self):
        F = prime_field(5)
        with pytest.raises(SpectralError):
            SpectralDatum(F, [Branch(1, T.zero(F))])
        with pytest.raises(SpectralError):
            SpectralDatum(F, [Branch(1, T.from_terms(F, {0: 1, 1: 1}))])

    def test_coincident_branches_rejected(self):
        F = prime_field(5)
        g = T.monomial(F, 1, 1)
        with pytest.raises(SpectralError):
            SpectralDatum(F, [Branch(1, g), Branch(1, g)]).r(0, 1)
