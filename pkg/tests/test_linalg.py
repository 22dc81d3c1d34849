from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from conftest import matrices, vectors
from liecones import catalog
from liecones.derivations import derivation_algebra
from liecones.linalg import (
    Inconsistent,
    Mat,
    NotSymmetric,
    PSDStatus,
    Singular,
    det,
    eigenspace,
    in_span,
    intersection,
    inverse,
    is_direct_sum,
    is_zero,
    kernel,
    psd_status,
    quadratic_form,
    rank,
    solve,
    span_rank,
    subspace_equal,
)

F = Fraction


def test_kernel_identity_is_trivial():
    assert kernel(Mat.identity(2)) == []


def test_kernel_single_equation():
    ker = kernel(Mat([[1, -1]]))
    assert len(ker) == 1
    v = ker[0]
    assert v[0] == v[1] != 0


def test_heisenberg_derivation_kernel_has_six_vectors():
    # the flattened Leibniz system of heis(R^2) is 36 unknowns
    g = catalog.get("heis(1)").algebra
    basis = derivation_algebra(g)
    assert len(basis) == 6
    assert oracles.derivation_dim(g) == 6


def test_eigenspace_examples():
    d = Mat.diag([1, -1])
    assert eigenspace(d, 1) == [(1, 0)]
    assert eigenspace(d, 0) == []


def test_sl2_ad_half_h_plus_one_eigenspace_is_e():
    e = catalog.get("sl2")
    g = e.data.l
    ad = g.ad_matrix((F(1, 2), 0, 0))
    sp1 = eigenspace(ad, 1)
    assert subspace_equal(sp1, [(0, 1, 0)], 3)


def test_direct_sum_examples():
    assert is_direct_sum([[(1, 0)], [(0, 1)]], 2)
    assert not is_direct_sum([[(1, 0)], [(1, 1)], [(0, 1)]], 2)
    with pytest.raises(ValueError):
        is_direct_sum([[(1, 0, 0)]], 2)


def test_jacobi_grading_eigenspaces_are_direct():
    e = catalog.get("jacobi(1)")
    _, d = e.classified()
    parts = [eigenspace(d.matrix, lam) for lam in (-1, 0, 1)]
    assert is_direct_sum(parts, 6)
    stacked = oracles.to_sympy(Mat([v for p in parts for v in p]))
    assert stacked.rank() == 6


def test_psd_examples():
    assert psd_status(Mat.identity(3)) is PSDStatus.POSITIVE_DEFINITE
    assert psd_status(Mat.diag([1, 0])) is PSDStatus.POSITIVE_SEMIDEFINITE_SINGULAR
    assert psd_status(Mat.diag([1, -1])) is PSDStatus.INDEFINITE
    assert psd_status(Mat([[0, 1], [1, 0]])) is PSDStatus.INDEFINITE
    assert psd_status(Mat([[1, 1], [1, 1]])) is PSDStatus.POSITIVE_SEMIDEFINITE_SINGULAR
    assert psd_status(Mat.zeros(0)) is PSDStatus.POSITIVE_DEFINITE
    with pytest.raises(NotSymmetric):
        psd_status(Mat([[1, 2], [0, 1]]))


def test_solve_and_inverse():
    m = Mat([[2, 1], [1, 1]])
    assert solve(m, (3, 2)) == (1, 1)
    assert inverse(m) @ m == Mat.identity(2)
    with pytest.raises(Singular):
        inverse(Mat([[1, 2], [2, 4]]))
    with pytest.raises(Inconsistent):
        solve(Mat([[1, 2], [2, 4]]), (1, 0))


def test_intersection_of_planes():
    a = [(1, 0, 0), (0, 1, 0)]
    b = [(0, 1, 0), (0, 0, 1)]
    assert subspace_equal(intersection(a, b, 3), [(0, 1, 0)], 3)


_status = {
    PSDStatus.POSITIVE_DEFINITE: "pd",
    PSDStatus.POSITIVE_SEMIDEFINITE_SINGULAR: "psd",
    PSDStatus.INDEFINITE: "indef",
}


@given(matrices(3))
def test_psd_status_agrees_with_principal_minors(a):
    s = a + a.T
    assert _status[psd_status(s)] == oracles.principal_minor_status(s)


@given(matrices(3, 2))
def test_gram_matrix_is_psd(a):
    g = a.T @ a
    status = psd_status(g)
    assert status.is_psd
    # positive definite exactly when the columns are independent
    assert (status is PSDStatus.POSITIVE_DEFINITE) == (rank(a) == 2)


@given(matrices(3), vectors(3))
def test_positive_definite_means_positive_values(a, v):
    s = a.T @ a + Mat.identity(3)
    assert psd_status(s) is PSDStatus.POSITIVE_DEFINITE
    if not is_zero(v):
        assert quadratic_form(s, v) > 0


@given(matrices(3, 4))
def test_kernel_postconditions(m):
    ker = kernel(m)
    assert all(is_zero(m.apply(v)) for v in ker)
    assert span_rank(ker, 4) == len(ker)
    assert len(ker) == 4 - rank(m)
    assert len(ker) == oracles.nullity(m)


@given(matrices(3), st.sampled_from([F(0), F(1), F(-1), F(1, 2)]))
def test_eigenspace_postconditions(m, lam):
    sp_ = eigenspace(m, lam)
    for v in sp_:
        assert m.apply(v) == tuple(lam * x for x in v)
    assert len(sp_) == oracles.eigenspace_dim(m, lam)


@given(matrices(3))
def test_det_matches_sympy(m):
    assert det(m) == oracles.to_sympy(m).det()


@given(matrices(3), vectors(3))
def test_solve_roundtrip(m, v):
    if det(m) != 0:
        x = solve(m, v)
        assert m.apply(x) == v
        assert in_span(v, m.cols(), 3)
