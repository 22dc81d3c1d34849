from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from liecones import catalog
from liecones.derivations import (
    ConditionViolation,
    Derivation,
    NotADerivation,
    NotHeisenberg,
    HypothesisViolation,
    build_classified,
    check_no_go_hypotheses,
    classify_from_derivation,
    compatible_dz,
    decompose_heis_derivation,
    derivation_algebra,
    detect_3grading,
    inner_derivations,
    is_beta_compatible,
    rescaled_combinations,
    solvable_no_go_scan,
    z_decomposition,
)
from liecones.lie import abelian
from liecones.linalg import Mat, eigenspace, in_span, span_rank, subspace_contains, unit_vec
from liecones.spindler import SpindlerData, build, sp_of_beta, standard_omega

F = Fraction
HALF = F(1, 2)
OM = standard_omega(1)


def test_abelian_derivations_are_everything():
    assert len(derivation_algebra(abelian(3))) == 9


@pytest.mark.parametrize("name", ["heis(1)", "jacobi(1)", "sl2", "oscillator", "ex318", "heis(2)"])
def test_derivation_dimension_matches_brute_force(name):
    g = catalog.get(name).algebra
    assert len(derivation_algebra(g)) == oracles.derivation_dim(g)


def test_jacobi_outer_derivation_is_one_dimensional():
    g = catalog.get("jacobi(1)").algebra
    der = derivation_algebra(g)
    inner = inner_derivations(g)
    assert (len(der), len(inner)) == (6, 5)
    conformal = Mat.diag([1, 1, 2, 0, 0, 0])
    Derivation(conformal, g)
    flat = [d.flatten() for d in der]
    assert in_span(conformal.flatten(), flat)
    assert not in_span(conformal.flatten(), inner)
    assert span_rank(inner + [conformal.flatten()], 36) == 6


@pytest.mark.parametrize("name", ["heis(1)", "jacobi(1)", "ex318"])
def test_inner_derivations_are_derivations(name):
    g = catalog.get(name).algebra
    flat = [d.flatten() for d in derivation_algebra(g)]
    for i in range(g.dim):
        ad = g.ad_matrix(unit_vec(g.dim, i))
        Derivation(ad, g)
        assert in_span(ad.flatten(), flat)


def test_not_a_derivation():
    g = catalog.get("heis(1)").algebra
    with pytest.raises(NotADerivation):
        Derivation(Mat.diag([1, 0, 0]), g)
    with pytest.raises(NotADerivation):
        Derivation(Mat.identity(2), g)


def test_every_heisenberg_derivation_decomposes():
    g = catalog.get("heis(1)").algebra
    for m in derivation_algebra(g):
        d_v, d_vz, d_z = decompose_heis_derivation(Derivation(m, g))
        # recompute the compatibility identity on each basis pair directly
        for p in range(2):
            for q in range(2):
                lhs = d_z[0, 0] * OM[p, q]
                rhs = sum(d_v[s, p] * OM[s, q] + OM[p, s] * d_v[s, q] for s in range(2))
                assert lhs == rhs
        assert d_vz.shape == (1, 2)


def test_heisenberg_decomposition_examples():
    g = catalog.get("heis(1)").algebra
    w = (1, 0, 0)
    d_v, d_vz, d_z = decompose_heis_derivation(Derivation(g.ad_matrix(w), g))
    assert d_v.is_zero() and d_z.is_zero()
    # ad(w) sends e2 to Omega(w, e2) z
    assert d_vz == Mat([[0, 1]])
    dc = Mat.diag([HALF, HALF, 1])
    assert decompose_heis_derivation(Derivation(dc, g)) == (Mat.diag([HALF, HALF]), Mat.zeros(1, 2), Mat.identity(1))


def test_decompose_rejects_non_heisenberg():
    g = catalog.get("jacobi(1)").algebra
    with pytest.raises(NotHeisenberg):
        decompose_heis_derivation(Derivation(Mat.zeros(6), g))


def test_beta_compatibility_examples():
    forms = list(catalog.get("ex318").data.forms)
    assert is_beta_compatible(Mat.identity(4).scale(HALF), Mat.identity(2), forms)
    for x in sp_of_beta(4, forms):
        assert is_beta_compatible(x, Mat.zeros(2), forms)
    assert is_beta_compatible(Mat.diag([HALF, HALF, -HALF, -HALF]), Mat.diag([1, -1]), forms)
    assert not is_beta_compatible(Mat.diag([HALF, HALF, -HALF, -HALF]), Mat.identity(2), forms)


def test_compatible_dz_recovers_ex318():
    forms = list(catalog.get("ex318").data.forms)
    assert compatible_dz(Mat.diag([HALF, HALF, -HALF, -HALF]), forms) == Mat.diag([1, -1])
    with pytest.raises(NotADerivation):
        compatible_dz(Mat([[0, 0, 1, 0], [0] * 4, [0] * 4, [0] * 4]), forms)


def test_jacobi_classified_grading():
    e = catalog.get("jacobi(1)")
    h = e.witnesses.h
    assert e.data.rho_of(h) == Mat.diag([HALF, -HALF])
    cd, d = build_classified(e.data, h, Mat.identity(2).scale(HALF), Mat.identity(1))
    gr = detect_3grading(d)
    assert gr.dims == (1, 2, 3)
    assert tuple(oracles.eigenspace_dim(d.matrix, lam) for lam in (-1, 0, 1)) == (1, 2, 3)
    # D(v, z, x) = (v/2 + rho(h) v, z, [h, x])
    assert d.matrix == Mat.diag([1, 0, 1, 0, 1, -1])


def test_ex318_grading_zero_part():
    e = catalog.get("ex318")
    cd, d = e.classified()
    gr = detect_3grading(d)
    assert gr.dims == (3, 3, 3)
    g0 = gr.zero
    h_elt = e.data.embed(x=(1, 0, 0))
    assert in_span(h_elt, g0)
    # the mixed blocks V_-1/2(D_V) cap V_1/2(rho(h)) and V_1/2(D_V) cap V_-1/2(rho(h))
    assert in_span(e.data.embed(v=(0, 1, 0, 0)), g0)
    assert in_span(e.data.embed(v=(0, 0, 1, 0)), g0)


def test_condition_three_violation():
    e = catalog.get("jacobi(1)")
    with pytest.raises(ConditionViolation) as exc:
        build_classified(e.data, (0, 0, 0), Mat.identity(2).scale(HALF), Mat.identity(1))
    assert exc.value.condition == 3


def test_condition_two_violation():
    e = catalog.get("jacobi(1)")
    # h = 2 * diag(1,-1)/2 gives ad eigenvalues +-2
    with pytest.raises(ConditionViolation) as exc:
        build_classified(e.data, tuple(2 * x for x in e.witnesses.h), Mat.identity(2).scale(HALF), Mat.identity(1))
    assert exc.value.condition == 2


def test_h_outside_semisimple_part_is_condition_two():
    e = catalog.get("oscillator")
    with pytest.raises(ConditionViolation) as exc:
        build_classified(e.data, (1,), Mat.zeros(2), Mat.zeros(1))
    assert exc.value.condition == 2


def test_derivation_moving_center_of_l_violates_condition_one():
    data = SpindlerData(abelian(1), (Mat.zeros(0),), 0, 0, ())
    g = build(data)
    d = Derivation(Mat.identity(1), g)
    assert detect_3grading(d).dims == (0, 0, 1)
    diag = []
    assert classify_from_derivation(data, d, diagnostics=diag) is None
    assert diag[0].startswith("classification condition 1")


def test_conformal_derivation_has_no_grading():
    g = catalog.get("jacobi(1)").algebra
    d = Derivation(Mat.diag([1, 1, 2, 0, 0, 0]), g)
    assert detect_3grading(d) is None
    assert eigenspace(d.matrix, 2)


def test_sl2_half_h_grading():
    g = catalog.get("sl2").algebra
    d = Derivation(g.ad_matrix((HALF, 0, 0)), g)
    assert detect_3grading(d).dims == (1, 1, 1)
    assert detect_3grading(Derivation(Mat.zeros(3), g)).dims == (0, 3, 0)


@pytest.mark.parametrize("name", ["jacobi(1)", "jacobi(2)", "ex318", "ex319(1)", "ex319(2)", "sl2", "sp2n(2)"])
def test_classification_round_trip(name):
    e = catalog.get(name)
    cd, d = e.classified()
    back = classify_from_derivation(e.data, d)
    assert (back.h, back.d_v, back.d_z) == (cd.h, cd.d_v, cd.d_z)
    assert build_classified(e.data, back.h, back.d_v, back.d_z, algebra=e.algebra)[1].matrix == d.matrix
    assert is_beta_compatible(back.d_v, back.d_z, e.data.forms)
    assert z_decomposition(back).holds


def test_zero_derivation_classifies_to_zero():
    e = catalog.get("jacobi(1)")
    back = classify_from_derivation(e.data, Derivation(Mat.zeros(6), e.algebra))
    assert back.h == (0, 0, 0) and back.d_v.is_zero() and back.d_z.is_zero()


def test_nilpotent_inner_derivation_is_not_classified():
    e = catalog.get("jacobi(1)")
    g = e.algebra
    d = Derivation(g.ad_matrix(e.data.embed(x=e.witnesses.jordan_units[1][0])), g)
    diag = []
    assert classify_from_derivation(e.data, d, diagnostics=diag) is None
    assert diag


def test_non_adapted_derivation_is_reported():
    e = catalog.get("jacobi(1)")
    g = e.algebra
    d = Derivation(g.ad_matrix(unit_vec(6, 0)), g)
    diag = []
    assert classify_from_derivation(e.data, d, diagnostics=diag) is None
    assert diag[0].startswith("presentation not adapted")


def test_grading_brackets_respect_degrees():
    e = catalog.get("ex318")
    _, d = e.classified()
    gr = detect_3grading(d)
    g = e.algebra
    for i in (-1, 0, 1):
        for j in (-1, 0, 1):
            for x in gr.part(i):
                for y in gr.part(j):
                    w = g.bracket_vec(x, y)
                    if abs(i + j) >= 2:
                        assert not any(w)
                    else:
                        assert in_span(w, gr.part(i + j))


def test_rescaled_combinations_start_with_zero():
    basis = [Mat.identity(2), Mat.diag([1, 0])]
    combos = list(rescaled_combinations(basis))
    assert len(combos) == 25
    assert combos[0][1].is_zero()


def test_no_go_hypotheses():
    e = catalog.get("oscillator")
    g = check_no_go_hypotheses(e.data)
    assert subspace_contains(g.derived_subalgebra(), g.center(), g.dim)
    with pytest.raises(HypothesisViolation):
        check_no_go_hypotheses(catalog.get("jacobi(1)").data)


def test_no_go_scan_on_oscillator():
    e = catalog.get("oscillator")
    g = e.algebra
    basis = derivation_algebra(g)
    report = solvable_no_go_scan(e.data, e.witnesses.f, rescaled_combinations(basis), g=g)
    assert len(report.candidates) == 5 ** len(basis)
    assert [c.reason for c in report.survivors] == ["zero derivation"]


def test_no_go_scan_excludes_bad_candidates():
    e = catalog.get("oscillator")
    g = e.algebra
    cands = [("twice", Mat.diag([2, 2, 4, 0])), ("junk", Mat.diag([1, 0, 0, 0])), ("zero", Mat.zeros(4))]
    report = solvable_no_go_scan(e.data, e.witnesses.f, cands, g=g)
    verdicts = [c.verdict for c in report.candidates]
    assert verdicts == ["excluded", "excluded", "survivor"]


def test_no_go_span_failure_path():
    # heis(1) with D = diag(1, 0, 1): g_1 = {e1, z}; only z lies in W_f
    e = catalog.get("heis(1)")
    g = e.algebra
    report = solvable_no_go_scan(e.data, e.witnesses.f, [("d", Mat.diag([1, 0, 1]))], g=g)
    c = report.candidates[0]
    assert c.verdict == "fails" and "span" in c.reason


@given(st.sampled_from([F(1), F(-1), HALF, -HALF, F(2)]))
def test_conformal_rescalings_never_grade(c):
    g = catalog.get("jacobi(1)").algebra
    d = Derivation(Mat.diag([c, c, 2 * c, 0, 0, 0]), g)
    assert detect_3grading(d) is None
