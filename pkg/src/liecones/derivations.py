"""Derivation algebras, 3-gradings and the classification of grading derivations."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

from .lie import LieAlgebra
from .linalg import (
    Inconsistent,
    Mat,
    Vec,
    commutator,
    eigenspace,
    in_span,
    intersection,
    is_direct_sum,
    is_zero,
    kernel,
    solve,
    span_basis,
    span_rank,
    sparse_kernel,
    subspace_contains,
    subspace_equal,
    unit_vec,
    vec,
)
from .spindler import SpindlerData, build, sp_of_beta

GRADING_EIGENVALUES = (-1, 0, 1)
HALF = Fraction(1, 2)


class DerivationError(Exception):
    pass


class NotADerivation(DerivationError):
    pass


class NotHeisenberg(DerivationError):
    pass


class HypothesisViolation(DerivationError):
    pass


class ConditionViolation(DerivationError):
    """A classification condition (numbered 1, 2 or 3) fails."""

    def __init__(self, condition: int, message: str):
        super().__init__(f"classification condition {condition}: {message}")
        self.condition = condition


CONDITION_NAMES = {
    1: "D kills the center of l",
    2: "D restricted to s = [l, l] is ad(h) with h 3-grading s",
    3: "D on V is D_V + rho(h) with D_V in End_l(V), spectrum in {0, +-1/2} and matching kernels",
}


# --- derivation algebra ---------------------------------------------------------

def derivation_algebra(g: LieAlgebra) -> list[Mat]:
    """Basis of der(g) as the kernel of D -> (D[x,y] - [Dx,y] - [x,Dy]).

    Unknown ``D[k][m]`` (row k, column m, so ``D e_m = sum_k D[k][m] e_k``)
    sits at index ``k * n + m``.
    """
    n = g.dim
    # right[b] lists (m, k, c) with [e_m, e_b] = ... + c e_k
    right: dict[int, list] = defaultdict(list)
    for (i, j), cs in g.structure.items():
        for k, c in cs.items():
            right[j].append((i, k, c))
            right[i].append((j, k, -c))
    rows = []
    for a, b in combinations(range(n), 2):
        eq: dict[int, dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for m, c in g.structure_constant(a, b).items():
            for k in range(n):
                eq[k][k * n + m] += c
        # [D e_a, e_b]_k = sum_m D[m][a] c[m][b][k]
        for m, k, c in right[b]:
            eq[k][m * n + a] -= c
        # [e_a, D e_b]_k = sum_m D[m][b] c[a][m][k] = -sum_m D[m][b] c[m][a][k]
        for m, k, c in right[a]:
            eq[k][m * n + b] += c
        rows.extend(r for r in eq.values() if any(r.values()))
    return [Mat.unflatten(v, n) for v in sparse_kernel(rows, n * n)]


def derivation_defect(g: LieAlgebra, m: Mat) -> tuple[int, int] | None:
    """First basis pair on which ``m`` fails the Leibniz rule, or None."""
    for a, b in combinations(range(g.dim), 2):
        ea, eb = unit_vec(g.dim, a), unit_vec(g.dim, b)
        lhs = m.apply(g.bracket_vec(ea, eb))
        rhs = tuple(x + y for x, y in zip(g.bracket_vec(m.col(a), eb), g.bracket_vec(ea, m.col(b))))
        if lhs != rhs:
            return (a, b)
    return None


def inner_derivations(g: LieAlgebra) -> list[Vec]:
    """Basis of ad(g) as flattened matrices."""
    return span_basis((g.ad_matrix(unit_vec(g.dim, i)).flatten() for i in range(g.dim)), g.dim ** 2)


@dataclass(frozen=True)
class Derivation:
    matrix: Mat
    parent: LieAlgebra = field(repr=False, compare=False)

    def __post_init__(self):
        if self.matrix.shape != (self.parent.dim, self.parent.dim):
            raise NotADerivation(f"matrix shape {self.matrix.shape} does not match dim {self.parent.dim}")
        bad = derivation_defect(self.parent, self.matrix)
        if bad is not None:
            raise NotADerivation(f"Leibniz rule fails on basis pair {bad}")

    def __call__(self, v: Sequence) -> Vec:
        return self.matrix.apply(v)

    def is_zero(self) -> bool:
        return self.matrix.is_zero()


# --- 3-gradings -------------------------------------------------------------------

@dataclass(frozen=True)
class Grading3:
    derivation: Derivation
    minus: list[Vec]
    zero: list[Vec]
    plus: list[Vec]

    def part(self, degree: int) -> list[Vec]:
        return {-1: self.minus, 0: self.zero, 1: self.plus}[degree]

    @property
    def dims(self) -> tuple[int, int, int]:
        return (len(self.minus), len(self.zero), len(self.plus))

    def degree_of(self, v: Sequence, dim: int) -> int | None:
        for d in GRADING_EIGENVALUES:
            if in_span(v, self.part(d), dim):
                return d
        return None


def grading_is_compatible(g: LieAlgebra, parts: dict[int, list[Vec]]) -> bool:
    """[g_i, g_j] lies in g_{i+j}, and vanishes when |i + j| >= 2."""
    for i in GRADING_EIGENVALUES:
        for j in GRADING_EIGENVALUES:
            target = parts.get(i + j, [])
            for x in parts[i]:
                for y in parts[j]:
                    w = g.bracket_vec(x, y)
                    if not is_zero(w) and not in_span(w, target, g.dim):
                        return False
    return True


def detect_3grading(d: Derivation) -> Grading3 | None:
    """The decomposition g = g_-1 + g_0 + g_1 of ``d``, or None if it does not exist."""
    g = d.parent
    parts = {lam: eigenspace(d.matrix, lam) for lam in GRADING_EIGENVALUES}
    if not is_direct_sum(list(parts.values()), g.dim):
        return None
    if not grading_is_compatible(g, parts):
        return None
    return Grading3(d, parts[-1], parts[0], parts[1])


# --- beta-compatibility and generalized Heisenberg algebras ------------------------

def is_beta_compatible(d_v: Mat, d_z: Mat, forms: Sequence[Mat]) -> bool:
    """D_z beta(v, w) = beta(D_V v, w) + beta(v, D_V w) on all basis pairs."""
    n = d_v.nrows
    for r, b in enumerate(forms):
        rhs = d_v.T @ b + b @ d_v
        lhs = Mat.zeros(n)
        for s, bs in enumerate(forms):
            if d_z[r, s]:
                lhs = lhs + bs.scale(d_z[r, s])
        if lhs != rhs:
            return False
    return True


def compatible_dz(d_v: Mat, forms: Sequence[Mat]) -> Mat:
    """The D_z making (D_V, D_z) beta-compatible; requires beta(V, V) to span z."""
    n, m = d_v.nrows, len(forms)
    if m == 0:
        return Mat.zeros(0)
    # unknown D_z[r][s] at index r * m + s; one equation per (r, p < q)
    rows, rhs = [], []
    for r, b in enumerate(forms):
        target = d_v.T @ b + b @ d_v
        for p, q in combinations(range(n), 2):
            row = [Fraction(0)] * (m * m)
            for s, bs in enumerate(forms):
                row[r * m + s] = bs[p, q]
            rows.append(row)
            rhs.append(target[p, q])
    try:
        sol = solve(Mat(rows, ncols=m * m), rhs)
    except Inconsistent as exc:
        raise NotADerivation("no D_z is beta-compatible with this D_V") from exc
    dz = Mat.unflatten(sol, m)
    if span_rank((tuple(b[p, q] for b in forms) for p, q in combinations(range(n), 2)), m) < m:
        raise NotADerivation("beta(V, V) does not span z, so D_z is not determined")
    return dz


def heisenberg_forms(g: LieAlgebra) -> tuple[int, int, list[Mat]]:
    blocks = g.metadata.get("blocks")
    if not blocks:
        raise NotHeisenberg("algebra carries no Spindler block data")
    (v0, v1), (z0, z1), (l0, l1) = blocks["V"], blocks["z"], blocks["l"]
    dv, dz = v1 - v0, z1 - z0
    if l1 != l0:
        raise NotHeisenberg("l block is not trivial")
    center = g.center()
    zblock = [unit_vec(g.dim, i) for i in range(z0, z1)]
    if not subspace_equal(center, zblock, g.dim):
        raise NotHeisenberg("center does not complement V")
    forms = []
    for r in range(dz):
        forms.append(Mat([[g.structure_constant(p, q).get(dv + r, 0) for q in range(dv)] for p in range(dv)], ncols=dv))
    return dv, dz, forms


def decompose_heis_derivation(d: Derivation) -> tuple[Mat, Mat, Mat]:
    """Blocks (D_V, D_Vz, D_z) of D(v, z) = (D_V v, D_Vz v + D_z z)."""
    dv, dz, forms = heisenberg_forms(d.parent)
    m = d.matrix
    vi, zi = list(range(dv)), list(range(dv, dv + dz))
    if not m.submatrix(vi, zi).is_zero():
        raise NotADerivation("derivation does not preserve the center")
    d_v, d_vz, d_z = m.submatrix(vi, vi), m.submatrix(zi, vi), m.submatrix(zi, zi)
    if not is_beta_compatible(d_v, d_z, forms):
        raise NotADerivation("extracted pair is not beta-compatible")
    sp = [x.flatten() for x in sp_of_beta(dv, forms)]
    for x in sp:
        if not in_span(commutator(d_v, Mat.unflatten(x, dv)).flatten(), sp, dv * dv):
            raise NotADerivation("ad(D_V) does not preserve sp(V, beta)")
    return d_v, d_vz, d_z


# --- classification -----------------------------------------------------------------

@dataclass(frozen=True)
class ClassifiedDerivation:
    h: Vec
    d_v: Mat
    d_z: Mat
    data: SpindlerData = field(repr=False, compare=False)

    def matrix(self) -> Mat:
        data = self.data
        return Mat.block_diag(self.d_v + data.rho_of(self.h), self.d_z, data.l.ad_matrix(self.h))

    def v_eigenspace(self, lam) -> list[Vec]:
        return eigenspace(self.d_v, lam)

    @property
    def v_d(self) -> list[Vec]:
        """V_{-1/2}(D_V) + V_{1/2}(D_V)."""
        return self.v_eigenspace(-HALF) + self.v_eigenspace(HALF)


def _l_grading_ok(data: SpindlerData, h: Vec) -> bool:
    s = data.semisimple_part
    ad = data.l.ad_matrix(h)
    parts = [intersection(eigenspace(ad, lam), s, data.l.dim) for lam in GRADING_EIGENVALUES]
    return sum(len(p) for p in parts) == len(s)


def check_conditions(data: SpindlerData, h: Vec, d_v: Mat, d_z: Mat) -> list[tuple[int, str]]:
    """Violations of the three classification conditions, as (number, reason)."""
    out = []
    dl = data.l.dim
    h = vec(h)
    # (1) the assembled D acts on l by ad(h), so z(l) must be killed by it
    ad = data.l.ad_matrix(h)
    if any(not is_zero(ad.apply(c)) for c in data.l.center()):
        out.append((1, "D does not annihilate z(l)"))
    # (2)
    if len(h) != dl:
        out.append((2, f"h has {len(h)} coordinates, l has dimension {dl}"))
        return out
    if not in_span(h, data.semisimple_part, dl):
        out.append((2, "h is not in s = [l, l]"))
    elif not _l_grading_ok(data, h):
        out.append((2, "ad(h) does not induce a 3-grading of s"))
    # (3)
    n = data.dim_v
    if d_v.shape != (n, n):
        out.append((3, f"D_V has shape {d_v.shape}, expected {(n, n)}"))
        return out
    if any(not commutator(d_v, r).is_zero() for r in data.rho):
        out.append((3, "D_V is not an l-module endomorphism"))
    spaces = [eigenspace(d_v, lam) for lam in (-HALF, 0, HALF)]
    if sum(len(s) for s in spaces) != n:
        out.append((3, "D_V is not diagonalizable with spectrum in {0, +-1/2}"))
    rh = data.rho_of(h)
    if not subspace_equal(kernel(d_v), kernel(rh), n):
        out.append((3, "ker(D_V) differs from ker(rho(h))"))
    vd = spaces[0] + spaces[2]
    vh = eigenspace(rh, -HALF) + eigenspace(rh, HALF)
    if not subspace_equal(vd, vh, n):
        out.append((3, "V_{-1/2}(D_V) + V_{1/2}(D_V) differs from the same sum for rho(h)"))
    return out


def build_classified(
    data: SpindlerData, h: Sequence, d_v: Mat, d_z: Mat, algebra: LieAlgebra | None = None
) -> tuple[ClassifiedDerivation, Derivation]:
    """Assemble D(v, z, x) = (D_V v + rho(h) v, D_z z, [h, x]) after validating its inputs."""
    h = vec(h)
    bad = check_conditions(data, h, d_v, d_z)
    if bad:
        raise ConditionViolation(*bad[0])
    if d_z.shape != (data.dim_z, data.dim_z) or not is_beta_compatible(d_v, d_z, data.forms):
        raise NotADerivation("(D_V, D_z) is not beta-compatible")
    cd = ClassifiedDerivation(h, d_v, d_z, data)
    g = algebra if algebra is not None else build(data)
    d = Derivation(cd.matrix(), g)
    if detect_3grading(d) is None:
        raise NotADerivation("assembled derivation does not induce a 3-grading")
    return cd, d


def _blocks_preserved(data: SpindlerData, m: Mat) -> bool:
    sl = (data.v_slice, data.z_slice, data.l_slice)
    for i, rows in enumerate(sl):
        for j, cols in enumerate(sl):
            if i != j and not m.submatrix(list(rows), list(cols)).is_zero():
                return False
    return True


def classify_from_derivation(
    data: SpindlerData, d: Derivation, diagnostics: list[str] | None = None
) -> ClassifiedDerivation | None:
    """Recover (h, D_V, D_z) from a block-preserving grading derivation."""

    def fail(msg):
        if diagnostics is not None:
            diagnostics.append(msg)
        return None

    m = d.matrix
    if not _blocks_preserved(data, m):
        return fail("presentation not adapted: D does not preserve the V, z and l blocks")
    if detect_3grading(d) is None:
        return fail("D does not induce a 3-grading")
    vi, zi, li = list(data.v_slice), list(data.z_slice), list(data.l_slice)
    d_l = m.submatrix(li, li)
    s = data.semisimple_part
    dl = data.l.dim
    if any(not is_zero(d_l.apply(c)) for c in data.l.center()):
        return fail("classification condition 1: D does not annihilate z(l)")
    # D on l must be ad(h) for some h in s
    if s:
        ads = Mat.from_columns([data.l.ad_matrix(x).flatten() for x in s], dl * dl)
        try:
            coeffs = solve(ads, d_l.flatten())
        except Inconsistent:
            return fail("classification condition 2: D on l is not ad(h) for h in s")
        h = tuple(sum((c * x[i] for c, x in zip(coeffs, s)), Fraction(0)) for i in range(dl))
    else:
        if not d_l.is_zero():
            return fail("classification condition 2: D on l is not ad(h) for h in s")
        h = (Fraction(0),) * dl
    d_v = m.submatrix(vi, vi) - data.rho_of(h)
    d_z = m.submatrix(zi, zi)
    bad = check_conditions(data, h, d_v, d_z)
    if bad:
        n, msg = bad[0]
        return fail(f"classification condition {n}: {msg}")
    if not is_beta_compatible(d_v, d_z, data.forms):
        return fail("(D_V, D_z) is not beta-compatible")
    return ClassifiedDerivation(h, d_v, d_z, data)


@dataclass(frozen=True)
class ZDecomposition:
    plus: list[Vec]
    minus: list[Vec]
    middle: list[Vec]
    holds: bool


def z_decomposition(cd: ClassifiedDerivation) -> ZDecomposition:
    """z = [V_1/2, V_1/2] + [V_-1/2, V_-1/2] + ([V_0, V_0] + [V_-1/2, V_1/2]), direct."""
    data = cd.data
    vp, vm, v0 = (cd.v_eigenspace(x) for x in (HALF, -HALF, 0))

    def pairs(a, b):
        return span_basis((data.beta(x, y) for x in a for y in b), data.dim_z)

    plus, minus = pairs(vp, vp), pairs(vm, vm)
    middle = span_basis(pairs(v0, v0) + pairs(vm, vp), data.dim_z)
    holds = is_direct_sum([plus, minus, middle], data.dim_z)
    return ZDecomposition(plus, minus, middle, holds)


def tube_type_report(cd: ClassifiedDerivation, ideals: dict[str, list[Vec]], tube_flags: dict[str, bool]) -> dict:
    """Which declared simple ideals act non-trivially on V_D, with their declared tube-type flags."""
    data = cd.data
    vd = cd.v_d
    out = {}
    for name, basis in sorted(ideals.items()):
        acts = any(not is_zero(data.rho_of(x).apply(v)) for x in basis for v in vd)
        out[name] = {"acts_on_V_D": acts, "tube_type": tube_flags.get(name)}
    return out


def rescaled_combinations(basis: Sequence[Mat], coeffs=(0, HALF, -HALF, 1, -1)):
    """All combinations sum c_i b_i with c_i drawn from ``coeffs``, zero first."""
    n = basis[0].nrows if basis else 0
    for cs in product(coeffs, repeat=len(basis)):
        m = Mat.zeros(n)
        for c, b in zip(cs, basis):
            if c:
                m = m + b.scale(c)
        yield cs, m


@dataclass
class NoGoCandidate:
    label: str
    verdict: str
    reason: str
    dims: tuple[int, int, int] | None = None
    survivor: bool = False


@dataclass
class NoGoReport:
    candidates: list[NoGoCandidate]
    note: str = "finite candidate scan; not a proof over all of der(g)"

    @property
    def survivors(self) -> list[NoGoCandidate]:
        return [c for c in self.candidates if c.survivor]


def check_no_go_hypotheses(data: SpindlerData, g: LieAlgebra | None = None) -> LieAlgebra:
    g = g if g is not None else build(data)
    if not data.l.is_abelian():
        raise HypothesisViolation("l is not abelian")
    if not g.is_solvable():
        raise HypothesisViolation("g is not solvable")
    if not subspace_contains(g.derived_subalgebra(), g.center(), g.dim):
        raise HypothesisViolation("z(g) is not contained in [g, g]")
    return g


def solvable_no_go_scan(data: SpindlerData, f: Sequence, candidates, g: LieAlgebra | None = None) -> NoGoReport:
    """Scan ``(label, matrix)`` candidates for grading derivations whose +-1 parts are spanned by W_f.

    Candidates failing the Leibniz rule or the grading test are excluded; for
    the rest the +-1 eigenspaces must lie in u = V + z, and the span of their
    intersection with W_f is computed exactly from the affine description of
    W_f on u.
    """
    from .cones import ConeQuery, cone_span_in_u

    g = check_no_go_hypotheses(data, g)
    query = ConeQuery(data, f, algebra=g)
    out = []
    for label, m in candidates:
        try:
            d = Derivation(m, g)
        except NotADerivation as exc:
            out.append(NoGoCandidate(label, "excluded", f"not a derivation: {exc}"))
            continue
        gr = detect_3grading(d)
        if gr is None:
            out.append(NoGoCandidate(label, "excluded", "no 3-grading"))
            continue
        if d.is_zero():
            out.append(NoGoCandidate(label, "survivor", "zero derivation", gr.dims, survivor=True))
            continue
        reason = None
        for side in (1, -1):
            part = gr.part(side)
            try:
                spanned = cone_span_in_u(query, part)
            except ValueError:
                reason = f"g_{side:+d} is not contained in u"
                break
            if len(spanned) < len(part):
                reason = (
                    f"span(W_f cap g_{side:+d}) has dim {len(spanned)} < dim g_{side:+d} = {len(part)}"
                )
                break
        if reason is None:
            out.append(NoGoCandidate(label, "survivor", "span condition holds", gr.dims, survivor=True))
        else:
            out.append(NoGoCandidate(label, "fails", reason, gr.dims))
    return NoGoReport(out)

