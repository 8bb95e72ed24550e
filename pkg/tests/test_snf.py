"""Smith normal form engine.

Expected diagonals for the pinned examples were derived from the
minor-gcd identity d_k * g_{k-1} = g_k with the minors computed by naive
cofactor expansion (the independent oracle in caplab.snf.minor_gcd),
before the elimination code existed:

    [[2,0],[0,3]]  ->  g1 = 1, g2 = 6   =>  diag(1, 6)
    [[2,4],[6,8]]  ->  g1 = 2, g2 = 8   =>  diag(2, 4)
"""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from caplab import snf as S


def unpack(res):
    return res.D, res.U, res.V


def assert_valid_snf(a, res):
    d, u, v = unpack(res)
    assert S.mat_mul(S.mat_mul(u, a), v) == d
    assert abs(S.det(u)) == 1
    assert abs(S.det(v)) == 1
    diag = list(d.diagonal())
    for i in range(d.rows):
        for j in range(d.cols):
            if i != j:
                assert d.data[i][j] == 0
    assert all(x >= 0 for x in diag)
    nz = [x for x in diag if x != 0]
    assert diag[: len(nz)] == nz, "zeros must trail"
    for x, y in zip(nz, nz[1:]):
        assert y % x == 0


def test_diag_2_3_becomes_1_6():
    a = S.mat([[2, 0], [0, 3]])
    res = S.snf(a)
    assert_valid_snf(a, res)
    assert res.D.diagonal() == (1, 6)


def test_pinned_2x2():
    a = S.mat([[2, 4], [6, 8]])
    res = S.snf(a)
    assert_valid_snf(a, res)
    assert res.D.diagonal() == (2, 4)


def test_zero_1x2():
    a = S.mat([[0, 0]])
    res = S.snf(a)
    assert_valid_snf(a, res)
    assert res.D.diagonal() == (0,)
    assert res.D == S.zeros(1, 2)


def test_empty_shapes():
    for shape in ((0, 0), (0, 3), (3, 0)):
        a = S.zeros(*shape)
        res = S.snf(a)
        assert_valid_snf(a, res)


matrices = st.integers(1, 6).flatmap(
    lambda m: st.integers(1, 6).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-50, 50), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


@given(matrices)
@settings(max_examples=120, deadline=None)
def test_snf_transform_identity(rows):
    a = S.mat(rows)
    assert_valid_snf(a, S.snf(a))


@given(matrices.filter(lambda rows: len(rows) <= 5 and len(rows[0]) <= 5))
@settings(max_examples=60, deadline=None)
def test_snf_matches_minor_gcd_oracle(rows):
    a = S.mat(rows)
    diag = S.snf(a).D.diagonal()
    g_prev = 1
    for k in range(1, min(a.rows, a.cols) + 1):
        g_k = S.minor_gcd(a, k)
        d_k = diag[k - 1]
        assert d_k * g_prev == g_k
        g_prev = g_k


def test_det_bareiss_vs_naive():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(1, 5)
        a = S.mat([[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)])
        assert S.det(a) == S.naive_det(a)
    assert S.det(S.identity(0)) == 1


def test_presentation_examples():
    # 0x2 matrix: two generators, no relations
    assert S.presentation_to_structure(S.zeros(0, 2)) == (2, ())
    # relations 2e1, 3e2 on two generators: cyclic of order 6
    assert S.presentation_to_structure(S.mat([[2, 0], [0, 3]])) == (0, (6,))
    # relations 4e1 only: one free generator survives
    assert S.presentation_to_structure(S.mat([[4, 0], [0, 0]])) == (1, (4,))


def test_presentation_chain_order_is_largest_first():
    a = S.mat([[2, 0, 0], [0, 4, 0], [0, 0, 8]])
    assert S.presentation_to_structure(a) == (0, (8, 4, 2))


def test_presentation_invariant_under_unimodular_change():
    rng = random.Random(11)
    for _ in range(40):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = S.mat([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)])
        u = S.random_unimodular(m, rng)
        v = S.random_unimodular(n, rng)
        b = S.mat_mul(S.mat_mul(u, a), v)
        assert S.presentation_to_structure(a) == S.presentation_to_structure(b)


def test_cokernel_is_zero_examples():
    assert S.cokernel_is_zero(S.identity(2))
    assert not S.cokernel_is_zero(S.mat([[2]]))
    assert S.cokernel_is_zero(S.mat([[2, 3]]))
    # Z -> Z/2 reduction is onto
    assert S.cokernel_is_zero(S.mat([[1]]), S.mat([[2]]))
    # Z --x2--> Z/4 is not onto
    assert not S.cokernel_is_zero(S.mat([[2]]), S.mat([[4]]))


def test_map_is_welldefined():
    # Z/2 -> Z/4 sending the generator to 2: well defined
    f = S.mat([[2]])
    assert S.map_is_welldefined(f, S.mat([[2]]), S.mat([[4]]))
    # Z/2 -> Z/4 sending the generator to 1: 2*1 = 2 is not 0 mod 4
    assert not S.map_is_welldefined(S.mat([[1]]), S.mat([[2]]), S.mat([[4]]))
    # free source has no relations to check
    assert S.map_is_welldefined(S.mat([[7]]), S.zeros(0, 1), S.zeros(0, 1))


def test_kernel_is_zero():
    # multiplication by 2: Z/2 -> Z/4 is injective
    assert S.kernel_is_zero(S.mat([[2]]), S.mat([[2]]), S.mat([[4]]))
    # reduction Z/4 -> Z/2 is not injective
    assert not S.kernel_is_zero(S.mat([[1]]), S.mat([[4]]), S.mat([[2]]))
    # x2 on free Z is injective, x0 is not
    assert S.kernel_is_zero(S.mat([[2]]), S.zeros(0, 1), S.zeros(0, 1))
    assert not S.kernel_is_zero(S.mat([[0]]), S.zeros(0, 1), S.zeros(0, 1))
    # Z/2 x Z/2 -> Z/4 x Z/2, (a, b) -> (2a, b): injective
    f = S.mat([[2, 0], [0, 1]])
    rel_src = S.mat([[2, 0], [0, 2]])
    rel_tgt = S.mat([[4, 0], [0, 2]])
    assert S.kernel_is_zero(f, rel_src, rel_tgt)
    # (a, b) -> (2a, 0) kills b
    g = S.mat([[2, 0], [0, 0]])
    assert not S.kernel_is_zero(g, rel_src, rel_tgt)


def test_integer_kernel():
    a = S.mat([[2, 3]])
    k = S.integer_kernel(a)
    assert k.cols == 1
    x, y = k.col(0)
    assert 2 * x + 3 * y == 0 and (x, y) != (0, 0)
    full = S.integer_kernel(S.zeros(0, 3))
    assert full.cols == 3 and abs(S.det(full)) == 1


def test_solve_integer():
    a = S.mat([[2, 0], [0, 3]])
    assert S.solve_integer(a, [4, 9]) == [2, 3]
    assert S.solve_integer(a, [1, 0]) is None
    assert S.lattice_contains(S.mat([[2, 1], [0, 2]]), [3, 2])
    assert not S.lattice_contains(S.mat([[2, 0], [0, 2]]), [1, 0])


def test_mat_shape_validation():
    with pytest.raises(ValueError):
        S.Mat(2, 2, ((1, 2),))
    with pytest.raises(ValueError):
        S.mat_mul(S.zeros(2, 3), S.zeros(2, 3))
