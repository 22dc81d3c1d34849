from fractions import Fraction

import pytest

from liecones import catalog
from liecones.derivations import detect_3grading, is_beta_compatible
from liecones.linalg import Mat, eigenspace, subspace_contains
from liecones.spindler import standard_omega

F = Fraction
HALF = F(1, 2)


@pytest.mark.parametrize("name", catalog.standard_entries())
def test_entries_pass_self_checks(name):
    e = catalog.get(name, check=False)
    checks = e.self_checks()
    assert all(checks.values()), checks


@pytest.mark.parametrize(
    "name, dim",
    [("sl2", 3), ("sp2n(2)", 10), ("heis(2)", 5), ("jacobi(1)", 6), ("jacobi(2)", 15), ("ex318", 9),
     ("generalized_jacobi_ex318", 9), ("oscillator", 4), ("ex319(1)", 6), ("wedge_fix_ex319(2)", 10)],
)
def test_dimensions(name, dim):
    assert catalog.get(name).algebra.dim == dim


def test_jacobi_witnesses():
    e = catalog.get("jacobi(1)")
    w = e.witnesses
    rho = e.data.rho_of
    assert rho(w.convex_type_x) == catalog.sl2_matrices()["U"]
    assert rho(w.h) == Mat.diag([HALF, -HALF])
    assert rho(w.jordan_units[1][0]) == Mat([[0, 1], [0, 0]])
    assert w.tube_type == {"sp2": True}


def test_oscillator_hypotheses():
    g = catalog.get("oscillator").algebra
    assert g.is_solvable()
    assert subspace_contains(g.derived_subalgebra(), g.center(), g.dim)
    assert len(g.derived_subalgebra()) == 3


def test_ex318_grading_detected():
    e = catalog.get("ex318")
    assert e.witnesses.f == (1, 1)
    _, d = e.classified()
    assert detect_3grading(d) is not None


def test_ex319_small_case_recovers_omega():
    e = catalog.get("ex319(1)")
    fix = e.extra["fix_basis"]
    assert len(fix) == 1 and e.data.dim_z == 1
    # (Omega o beta)(v, w) = Omega(v, w), with Omega o beta given by the shipped functional
    assert e.data.omega(e.witnesses.f) == standard_omega(1)


def test_ex319_multiplicity_two():
    e = catalog.get("ex319(2)")
    # the sl2-fixed part of Lambda^2(R^2 (x) R^2) is Lambda^2(R^2) (x) Sym^2(R^2), dimension 3
    assert e.data.dim_z == 3
    w = e.witnesses
    assert is_beta_compatible(w.d_v, w.d_z, e.data.forms)
    # one copy of R^2 at each of +-1/2 gives D_z eigenvalues 1, 0, -1
    assert [len(eigenspace(w.d_z, lam)) for lam in (1, 0, -1)] == [1, 1, 1]


def test_unknown_names():
    for bad in ("nope", "sl2(3)", "jacobi(0)", "jacobi(x)"):
        with pytest.raises(catalog.UnknownName):
            catalog.get(bad)


def test_size_cap():
    with pytest.raises(catalog.CatalogError):
        catalog.get("jacobi(5)")


def test_wedge_split_bounds():
    with pytest.raises(ValueError):
        catalog.wedge_fix(2, split=3)
