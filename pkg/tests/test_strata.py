import pytest
from hypothesis import given, strategies as st

from springer_lab.spectral import SpectralError
from springer_lab.springer import Lattice, lambda_act, z_points_sandwich
from springer_lab.strata import (
    PartitionSpec,
    fiber_dimension,
    index_profile,
    sample_fiber_pairs,
    shift_index,
    signed_strata_sum,
    split_lattice,
    stratify,
    verify_fundamental_lemma,
)
from springer_lab.unitary import classify_z_points, make_hermitian

from _builders import datum

STAR = datum("star")
STAR_Z = z_points_sandwich(STAR).points
STAR_PARTS = [PartitionSpec(STAR, [i], [j for j in range(3) if j != i]) for i in range(3)]
CL = datum("cusp_line")
CL_PART = PartitionSpec(CL, [0], [1])


def test_partition_validation():
    with pytest.raises(SpectralError):
        PartitionSpec(STAR, [0], [1])
    with pytest.raises(SpectralError):
        PartitionSpec(STAR, [], [0, 1, 2])
    with pytest.raises(SpectralError):
        PartitionSpec(STAR, [0, 1], [1, 2])
    part = STAR_PARTS[0]
    assert part.r == 2
    assert part.label() == "{1}|{2,3}"
    assert part.to_json() == {"I1": [1], "I2": [2, 3], "r": 2}


def test_split_of_product_lattice():
    part = STAR_PARTS[2]
    P = Lattice.product(STAR, [1, 2, 3])
    m1i, m1p, m2i, m2p = split_lattice(P, part)
    assert m1i.nu == m1p.nu == (3,)
    assert m2i.nu == m2p.nu == (1, 2)


def test_split_of_order():
    part = PartitionSpec(datum("node"), [0], [1])
    A = Lattice.order(part.datum)
    m1i, m1p, m2i, m2p = split_lattice(A, part)
    # A ∩ E_1 = pi O_1 and the projection of A is O_1
    assert (m1i.nu, m1p.nu) == ((1,), (0,))
    assert (m2i.nu, m2p.nu) == ((1,), (0,))
    prof = index_profile(A, part)
    assert (prof.ind1p, prof.ind1pp, prof.rho) == (-1, 0, 1)


@given(st.sampled_from(STAR_Z), st.sampled_from(STAR_PARTS),
       st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_index_lemma_identities(M, part, lam):
    M = lambda_act(M, lam + [-sum(lam)])
    prof = index_profile(M, part)
    assert 0 <= prof.rho <= part.r
    assert prof.ind1p + prof.ind2pp == M.index() - part.r
    assert prof.ind2p + prof.ind1pp == M.index() - part.r
    assert prof.ind1pp - prof.ind1p == prof.ind2pp - prof.ind2p == prof.rho


@given(st.sampled_from(STAR_Z), st.sampled_from(STAR_PARTS), st.integers(-3, 3))
def test_index_lemma_off_index_zero(M, part, d):
    prof = index_profile(shift_index(M, d), part)
    assert prof.ind1p + prof.ind2pp == M.index() + d - part.r


def test_stratify_covers_everything():
    for part in STAR_PARTS:
        strata = stratify(STAR_Z, part)
        assert sorted(strata) == list(range(part.r + 1))
        assert sum(len(v) for v in strata.values()) == len(STAR_Z)


@pytest.mark.parametrize("part", STAR_PARTS + [CL_PART], ids=lambda p: p.label())
def test_fiber_dimension_equals_r_on_distinct_pairs(part):
    pairs, distinct = sample_fiber_pairs(part, 10, seed=1)
    assert distinct >= 5
    for M1, M2 in pairs:
        assert M1.index() == 0 and M2.index() == -part.r
        assert fiber_dimension(M1, M2, part) == part.r


def test_sampling_is_seeded():
    a, _ = sample_fiber_pairs(CL_PART, 5, seed=7)
    b, _ = sample_fiber_pairs(CL_PART, 5, seed=7)
    assert a == b


def test_signed_strata_sum_matches_kappa_integral():
    H = make_hermitian(CL)
    cl = classify_z_points(z_points_sandwich(CL).points, H)
    total, per = signed_strata_sum(cl, CL_PART)
    assert total == 36
    assert sum(per.values()) == cl.total


def test_fundamental_lemma_star():
    for part in STAR_PARTS:
        rep = verify_fundamental_lemma(STAR, part)
        assert rep.fl_holds and rep.strata_hold
        assert rep.o_kappa == 45 == rep.rhs
        doc = rep.to_json()
        assert doc["fundamental_lemma"]["verdict"] == "PASS"


def test_fundamental_lemma_window_route_agrees():
    part = PartitionSpec(datum("node", 5), [0], [1])
    a = verify_fundamental_lemma(part.datum, part, route="sandwich")
    b = verify_fundamental_lemma(part.datum, part, route="window")
    assert (a.o_kappa, a.so, a.rhs) == (b.o_kappa, b.so, b.rhs) == (5, 7, 5)
