import numpy as np
import pytest
from hypothesis import given, strategies as st

from springer_lab.linalg import BudgetExceeded
from springer_lab.spectral import Window, WindowOverflow
from springer_lab.springer import (
    Lattice,
    canonicalize,
    enumerate_fiber,
    enumerate_fiber_bruteforce,
    index_of,
    is_free,
    lambda_act,
    n_min,
    window_model,
    z_points,
    z_points_sandwich,
)

from _builders import datum

TAC = datum("tacnode")
TAC_Z = z_points_sandwich(TAC).points


def zero_sum(m):
    return st.lists(st.integers(-3, 3), min_size=m - 1, max_size=m - 1).map(lambda x: x + [-sum(x)])


def test_order_and_normalization_indices():
    for shape in ("smooth", "cusp", "node", "tacnode", "star"):
        D = datum(shape)
        A = Lattice.order(D)
        At = Lattice.normalization(D)
        assert A.index() == 0
        assert At.index() == D.delta
        assert At.contains(A)
        assert is_free(A)
        assert is_free(At) == (D.delta == 0)


@given(st.sampled_from(TAC_Z), zero_sum(2), st.integers(-2, 2))
def test_shift_changes_index_by_sum(M, lam, k):
    assert lambda_act(M, lam).index() == M.index()
    assert M.pi_power(k).index() == M.index() - k * TAC.n_I
    assert M.shift([k, 0]).index() == M.index() - k


@given(st.sampled_from(TAC_Z), zero_sum(2), st.integers(0, 1))
def test_canonicalize_is_an_orbit_invariant(M, lam, absorb):
    rep, mu = canonicalize(M, absorb)
    assert sum(mu) == 0
    assert lambda_act(M, mu) == rep
    assert canonicalize(lambda_act(M, lam), absorb)[0] == rep
    assert all(v == 0 for i, v in enumerate(rep.nu) if i != absorb)
    assert canonicalize(rep, absorb)[0] == rep


@given(st.sampled_from(TAC_Z), st.sampled_from(TAC_Z))
def test_sum_contains_both(M, N):
    S = M.sum(N)
    assert S.contains(M) and S.contains(N)
    assert S.index() >= max(M.index(), N.index())
    assert (M == N) == (M.contains(N) and N.contains(M))


@given(st.sampled_from(TAC_Z))
def test_maximal_ideal_image(M):
    mM = M.maximal_ideal_image()
    assert M.contains(mM)
    assert index_of(M, mM) >= 1
    assert is_free(M) == (index_of(M, mM) == 1)


def test_lambda_act_rejects_nonzero_sum_and_overflow():
    A = Lattice.order(TAC)
    with pytest.raises(ValueError):
        lambda_act(A, [1, 0])
    with pytest.raises(WindowOverflow):
        lambda_act(A, [5, -5], Window([-1, -1], [3, 3]))


def test_from_window_closure():
    D = datum("node")
    W = Window([0, 0], [2, 2])
    # t_1 alone: its A-span is t_1 k[[t_1]] x 0 modulo t^2
    M = Lattice.from_window(D, W, [W.monomial(0, 1)], close=True)
    assert M.nu == (1, 2) and M.h == (1, 2)
    assert M.index() == -2


@pytest.mark.parametrize(
    "shape,p,hermitian,N",
    [("cusp", 3, False, 1), ("node", 3, False, 1), ("cusp", 3, True, 1), ("node", 5, False, 1)],
)
def test_descent_equals_grassmannian_oracle(shape, p, hermitian, N):
    D = datum(shape, p, hermitian=hermitian)
    model = window_model(D, N, 0)
    fast = enumerate_fiber(model)
    slow = enumerate_fiber_bruteforce(model)
    assert fast == slow
    for M in fast:
        assert M.index() == 0


def test_window_model_shape():
    D = datum("tacnode")
    model = window_model(D, 2, 0)
    assert model.dim == 2 * 4
    assert model.plane_dim == 4


@pytest.mark.parametrize(
    "shape,p,e,hermitian,count",
    [
        ("smooth", 3, 1, True, 1),
        ("cusp", 3, 1, False, 4),
        ("cusp", 3, 2, False, 10),
        ("cusp", 3, 1, True, 10),
        ("node", 3, 1, False, 3),
        ("node", 3, 1, True, 9),
        ("tacnode", 3, 1, False, 9),
    ],
)
def test_z_counts_by_both_routes(shape, p, e, hermitian, count):
    D = datum(shape, p, e, hermitian)
    w = z_points(D)
    s = z_points_sandwich(D)
    assert len(w) == len(s) == count
    assert w.points == s.points
    assert w.history[-1][1] == w.history[-2][1]


def test_z_points_other_degrees_and_absorb():
    D = datum("cusp_line", hermitian=False)
    for d in (-1, 0, 2):
        assert len(z_points_sandwich(D, d)) == len(z_points_sandwich(D, 0))
    a0 = {canonicalize(M, 1)[0] for M in z_points_sandwich(D, 0, absorb=0).points}
    a1 = set(z_points_sandwich(D, 0, absorb=1).points)
    assert a0 == a1


def test_n_min_captures_every_representative():
    D = datum("cusp_line", hermitian=False)
    N = n_min(D, 0)
    model = window_model(D, N, 0)
    for M in z_points_sandwich(D).points:
        U = model.from_lattice(M)
        assert U.shape[0] == model.plane_dim


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        z_points_sandwich(datum("tacnode"), budget=5)


def test_json_shape():
    doc = TAC_Z[0].to_json()
    assert set(doc) == {"nu", "h", "index", "basis"}
    assert isinstance(doc["basis"], list)
    assert np.asarray(TAC_Z[0].basis).dtype == np.int64
