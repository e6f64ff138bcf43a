import pytest
from hypothesis import given, strategies as st

from springer_lab.fields import hermitian_field
from springer_lab.series import TruncatedSeries as T
from springer_lab.spectral import SpectralError
from springer_lab.springer import Lattice, canonicalize, z_points_sandwich
from springer_lab.unitary import (
    classify_z_points,
    dual_lattice,
    hermitian_pair,
    kappa,
    lambda_classes,
    make_hermitian,
    orbital_integrals,
    trace,
    twisted_frobenius,
)

from _builders import datum

F9 = hermitian_field(3)
TAC = datum("tacnode")
H_TAC = make_hermitian(TAC)
TAC_Z = z_points_sandwich(TAC).points
CL = datum("cusp_line")
H_CL = make_hermitian(CL)


def _trace_by_matrix(s, n, F):
    """Trace of multiplication by ``s`` on the basis ``1, t, ..., t^{n-1}`` over ``k((pi))``."""
    total = {}
    for j in range(n):
        # coefficient of t^j in s * t^j, as a series in pi
        for a, c in s.terms():
            e = a + j
            if e % n == j % n and (e - j) % n == 0:
                k = (e - j) // n
                total[k] = F.plus(total.get(k, 0), c)
    return T.from_terms(F, total, "pi")


@given(st.integers(1, 4), st.dictionaries(st.integers(-6, 6), st.integers(1, 8), max_size=5))
def test_trace_matches_multiplication_matrix(n, terms):
    if n % 3 == 0:
        n += 1
    s = T.from_terms(F9, terms)
    assert trace(s, n, F9) == _trace_by_matrix(s, n, F9)


def test_trace_formula_example():
    s = T.from_terms(F9, {2: 1, 3: 1})
    assert trace(s, 2, F9) == T.monomial(F9, 1, 2, "pi")


@st.composite
def vectors(draw, D):
    out = []
    for b in D.branches:
        terms = draw(st.dictionaries(st.integers(-2, 4), st.integers(1, 8), max_size=4))
        out.append(T.from_terms(D.field, terms))
    return out


@given(vectors(CL), vectors(CL), st.integers(1, 8))
def test_hermitian_symmetry_and_sesquilinearity(x, y, a):
    F = CL.field
    xy = hermitian_pair(x, y, H_CL, prec=2)
    yx = hermitian_pair(y, x, H_CL, prec=2)
    assert yx.agrees_with(xy.involution())
    ax = [v.scale(a) for v in x]
    assert hermitian_pair(ax, y, H_CL, prec=2).agrees_with(xy.scale(F.involution(a)))
    ay = [v.scale(a) for v in y]
    assert hermitian_pair(x, ay, H_CL, prec=2).agrees_with(xy.scale(a))


def test_alpha_valuation():
    for shape in ("smooth", "cusp", "node", "tacnode", "cusp_line", "star"):
        D = datum(shape)
        H = make_hermitian(D)
        assert list(H.alpha_valuations) == [c + n - 1 for c, n in zip(D.conductor, D.ns)]


@pytest.mark.parametrize("shape,p", [("smooth", 3), ("cusp", 3), ("node", 5), ("tacnode", 3),
                                     ("cusp_line", 3), ("star", 3), ("monomial_3_4", 5)])
def test_order_is_self_dual(shape, p):
    D = datum(shape, p)
    A = Lattice.order(D)
    assert dual_lattice(A, make_hermitian(D)) == A


def test_normalization_dual_is_conductor():
    D = datum("cusp_line")
    dual = dual_lattice(Lattice.normalization(D), H_CL)
    assert dual == Lattice.product(D, D.conductor)


@given(st.sampled_from(TAC_Z), st.sampled_from(TAC_Z))
def test_dual_is_an_inclusion_reversing_involution(M, N):
    Md, Nd = dual_lattice(M, H_TAC), dual_lattice(N, H_TAC)
    assert dual_lattice(Md, H_TAC) == M
    assert Md.index() == -M.index()
    S = M.sum(N)
    assert Md.contains(dual_lattice(S, H_TAC)) and Nd.contains(dual_lattice(S, H_TAC))


@given(st.sampled_from(TAC_Z))
def test_frobenius_commutes_with_conjugation_and_squares_to_identity(M):
    assert twisted_frobenius(twisted_frobenius(M, H_TAC), H_TAC) == M
    assert twisted_frobenius(M.conjugate(), H_TAC) == twisted_frobenius(M, H_TAC).conjugate()


def test_classification_counts():
    cl = classify_z_points(TAC_Z, H_TAC)
    assert cl.counts == {(0, 0): 13, (1, 1): 4}
    assert orbital_integrals(cl.counts, (0,)) == (9, 17)
    assert cl.total + cl.discarded == len(TAC_Z)
    M, cls = cl.fixed[0]
    assert cl.class_of(M) == cls
    # re-normalizing with the other branch does not change the totals
    other = classify_z_points([canonicalize(P, 1)[0] for P in TAC_Z], H_TAC, absorb=1)
    assert orbital_integrals(other.counts, (0,)) == (9, 17)


def test_fixed_points_are_fixed():
    cl = classify_z_points(TAC_Z, H_TAC)
    for M, cls in cl.fixed:
        img = twisted_frobenius(M, H_TAC)
        lam = [a - b for a, b in zip(img.nu, M.nu)]
        assert sum(lam) == 0
        assert img.shift([-x for x in lam]) == M
        assert tuple(x % 2 for x in lam) == cls


def test_lambda_classes_and_kappa():
    assert lambda_classes(3) == [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
    assert kappa((1, 1), (0,)) == -1
    assert kappa((0, 1, 1), (1, 2)) == 1


def test_non_hermitian_rejected():
    with pytest.raises(SpectralError):
        make_hermitian(datum("node", hermitian=False))
