import pytest
from hypothesis import given, strategies as st

from springer_lab.fields import FieldError, galois_field, hermitian_field, prime_field
from springer_lab.gfseries import involution
from springer_lab.series import TruncatedSeries

FIELDS = [prime_field(3), prime_field(5), galois_field(3, 2), galois_field(5, 2), galois_field(3, 3),
          hermitian_field(3), hermitian_field(5), hermitian_field(3, 2)]


def elems(F):
    return st.integers(0, F.order - 1)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.label)
def test_field_axioms(F):
    @given(elems(F), elems(F), elems(F))
    def check(a, b, c):
        assert F.plus(a, F.plus(b, c)) == F.plus(F.plus(a, b), c)
        assert F.times(a, F.times(b, c)) == F.times(F.times(a, b), c)
        assert F.times(a, F.plus(b, c)) == F.plus(F.times(a, b), F.times(a, c))
        assert F.plus(a, F.negate(a)) == 0
        assert F.minus(a, b) == F.plus(a, F.negate(b))
        if a:
            assert F.times(a, F.inverse(a)) == 1

    check()


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.label)
def test_multiplicative_group_order(F):
    for a in F.nonzero():
        assert F.power(a, F.order - 1) == 1
    assert F.order == F.p**F.degree


@pytest.mark.parametrize("p,e", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_involution_is_q_power_fixing_exactly_Fq(p, e):
    F = hermitian_field(p, e)
    q = p**e
    assert F.q == q
    fixed = [a for a in F.elements() if F.involution(a) == a]
    assert len(fixed) == q
    for a in F.elements():
        assert F.involution(a) == F.power(a, q)
        assert F.involution(F.involution(a)) == a
        for b in (1, F.eps, F.plus(F.eps, 1)):
            assert F.involution(F.times(a, b)) == F.times(F.involution(a), F.involution(b))
            assert F.involution(F.plus(a, b)) == F.plus(F.involution(a), F.involution(b))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_eps_is_skew_with_nonsquare_square(p):
    F = hermitian_field(p)
    eps = F.eps
    assert F.is_skew(eps) and eps != 0
    s = F.times(eps, eps)
    assert F.in_fixed_field(s)
    squares = {F.times(a, a) for a in range(p)}
    assert s not in squares


def test_eps_cubed_in_F9():
    F = hermitian_field(3)
    eps = F.eps
    assert F.times(eps, eps) == F.from_int(-1)
    assert F.power(eps, 3) == F.negate(eps)
    assert F.involution(eps) == F.negate(eps)


def test_series_involution_facade():
    F = hermitian_field(3)
    x = TruncatedSeries.from_terms(F, {0: 1, 2: 2})
    assert involution(x) == x
    y = TruncatedSeries.from_terms(F, {1: F.eps, 3: F.element(1, 1)})
    assert involution(involution(y)) == y
    assert involution(y).coefficient(1) == F.negate(F.eps)


def test_element_and_fmt():
    F = hermitian_field(5)
    a = F.element(2, 3)
    assert F.fmt(a) == "2+3e"
    assert F.fmt(F.element(0, 1)) == "1e"
    assert F.fmt(F.element(4)) == "4"
    with pytest.raises(FieldError):
        prime_field(3).element(1, 1)


def test_rejections():
    with pytest.raises(FieldError):
        prime_field(4)
    with pytest.raises(FieldError):
        hermitian_field(2)
    with pytest.raises(FieldError):
        prime_field(3).involution(1)
    with pytest.raises(ZeroDivisionError):
        prime_field(3).inverse(0)
