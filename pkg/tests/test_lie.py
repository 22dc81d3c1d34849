from fractions import Fraction

import pytest
from hypothesis import given

from conftest import vectors
from liecones import catalog
from liecones.lie import LieAlgebra, MetadataError, ParentMismatch, StructureError, abelian, matrix_lie_algebra
from liecones.linalg import Mat, commutator, subspace_equal, unit_vec

F = Fraction


@pytest.fixture(scope="module")
def sl2():
    m = catalog.sl2_matrices()
    return matrix_lie_algebra([m["H"], m["E"], m["F"]], labels=["H", "E", "F"])


def test_sl2_brackets(sl2):
    h, e, f = (unit_vec(3, i) for i in range(3))
    assert sl2.bracket_vec(h, e) == (0, 2, 0)
    assert sl2.bracket_vec(h, f) == (0, 0, -2)
    assert sl2.bracket_vec(e, f) == (1, 0, 0)
    assert sl2.center() == []
    assert len(sl2.derived_subalgebra()) == 3
    assert not sl2.is_solvable()


def test_antisymmetry_conflict_names_triple():
    with pytest.raises(StructureError) as exc:
        LieAlgebra(2, {(0, 1): {1: 1}, (1, 0): {1: 1}})
    assert exc.value.triple == (0, 1, 1)


def test_jacobi_violation_names_triple():
    # [e0, e1] = e2, [e1, e2] = e0, [e0, e2] = e0 fails Jacobi
    with pytest.raises(StructureError) as exc:
        LieAlgebra(3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}})
    assert exc.value.triple == (0, 1, 2)


def test_self_bracket_rejected():
    with pytest.raises(StructureError):
        LieAlgebra(2, {(0, 0): {1: 1}})


def test_index_out_of_range():
    with pytest.raises(StructureError):
        LieAlgebra(2, {(0, 1): {5: 1}})


def test_mixing_parents_rejected(sl2):
    other = abelian(3)
    with pytest.raises(ParentMismatch):
        sl2.basis_element(0) + other.basis_element(0)


def test_heisenberg_series():
    g = catalog.get("heis(1)").algebra
    assert subspace_equal(g.center(), [unit_vec(3, 2)], 3)
    assert g.is_nilpotent()
    assert [len(s) for s in g.lower_central_series()] == [3, 1, 0]
    assert [len(s) for s in g.derived_series()] == [3, 1, 0]


def test_oscillator_is_solvable_not_nilpotent():
    g = catalog.get("oscillator").algebra
    assert g.is_solvable()
    assert not g.is_nilpotent()


def test_ideals(sl2):
    g = catalog.get("jacobi(1)").algebra
    u = [unit_vec(6, i) for i in range(3)]
    assert g.subspace_is_ideal(u)
    assert not g.subspace_is_ideal([unit_vec(6, 3)])
    assert not sl2.subspace_is_ideal([unit_vec(3, 0)])
    assert sl2.subspace_is_subalgebra([unit_vec(3, 0)])


def test_metadata_nilradical_revalidated():
    g = catalog.get("jacobi(1)").algebra
    assert len(g.validated_subspace("nilradical")) == 3
    g2 = LieAlgebra(g.dim, g.structure, metadata={"nilradical": [unit_vec(6, 3)]}, validate=False)
    with pytest.raises(MetadataError):
        g2.validated_subspace("nilradical")
    with pytest.raises(MetadataError):
        g.validated_subspace("nothing")


def test_matrix_lie_algebra_rejects_non_closed_span():
    m = catalog.sl2_matrices()
    with pytest.raises(ValueError):
        matrix_lie_algebra([m["E"], m["F"]])


@given(vectors(3), vectors(3))
def test_ad_is_a_homomorphism(x, y):
    g = catalog.get("ex318").data.l
    lhs = g.ad_matrix(g.bracket_vec(x, y))
    assert lhs == commutator(g.ad_matrix(x), g.ad_matrix(y))


@given(vectors(6), vectors(6), vectors(6))
def test_bracket_axioms_on_jacobi_algebra(x, y, z):
    g = catalog.get("jacobi(1)").algebra
    assert g.bracket_vec(x, y) == tuple(-a for a in g.bracket_vec(y, x))
    terms = (
        g.bracket_vec(x, g.bracket_vec(y, z)),
        g.bracket_vec(y, g.bracket_vec(z, x)),
        g.bracket_vec(z, g.bracket_vec(x, y)),
    )
    assert all(sum(t) == 0 for t in zip(*terms))


def test_element_arithmetic(sl2):
    h, e = sl2.basis_element(0), sl2.basis_element(1)
    assert h.bracket(e).coords == (0, 2, 0)
    assert (F(1, 2) * h).bracket(e).coords == (0, 1, 0)
    assert (h - h).is_zero()
    assert Mat.identity(3) == sl2.ad_matrix((0, 0, 0)) + Mat.identity(3)
