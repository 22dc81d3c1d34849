"""The invariant cones W_f, pulled back from non-negative quadratic polynomials.

An element ``(v, z, x)`` of g(l, V, z, beta) maps to the Jacobi element
``(v, f(z), rho(x))`` of hsp(V, Omega), Omega = f o beta, which in turn is the
polynomial ``p(u) = 1/2 Omega(X u, u) + Omega(v, u) + f(z)``.  Membership in
W_f is global non-negativity of ``p``, decided exactly through the bordered
Gram matrix ``[[Q, l/2], [l^T/2, c]]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .derivations import ClassifiedDerivation, Grading3
from .lie import LieAlgebra
from .linalg import (
    Mat,
    PSDStatus,
    Singular,
    Vec,
    det,
    dot,
    in_span,
    inverse,
    is_zero,
    kernel,
    psd_status,
    quadratic_form,
    span_basis,
    span_rank,
    sparse_kernel,
    subspace_contains,
    unit_vec,
    vadd,
    vec,
    vscale,
    vsub,
)
from .spindler import OmegaSingular, SpindlerData, SymplecticForm, build, check_convex_type


class ConeError(Exception):
    pass


class NotInEigenspace(ConeError):
    pass


class WitnessNotInCone(ConeError):
    pass


@dataclass(frozen=True)
class JacobiElement:
    w: Vec
    c: Fraction
    x: Mat


@dataclass(frozen=True)
class QuadPolynomial:
    """p(v) = v^T Q v + l . v + c."""

    Q: Mat
    l: Vec
    c: Fraction

    def __post_init__(self):
        if not self.Q.is_symmetric():
            raise ValueError("quadratic part must be symmetric")

    @property
    def nvars(self) -> int:
        return self.Q.nrows

    def __call__(self, v: Sequence) -> Fraction:
        v = vec(v)
        return quadratic_form(self.Q, v) + dot(self.l, v) + self.c

    def bordered(self) -> Mat:
        n = self.nvars
        half = Fraction(1, 2)
        rows = [list(self.Q.rows[i]) + [half * self.l[i]] for i in range(n)]
        rows.append([half * a for a in self.l] + [self.c])
        return Mat(rows, ncols=n + 1)

    def status(self) -> PSDStatus:
        return psd_status(self.bordered())

    def is_nonnegative(self) -> bool:
        return self.status().is_psd

    def is_strictly_positive_definite(self) -> bool:
        return self.status() is PSDStatus.POSITIVE_DEFINITE

    def coefficients(self) -> dict[tuple[int, ...], Fraction]:
        """Monomial coefficients keyed by sorted variable indices (() is the constant)."""
        out: dict[tuple[int, ...], Fraction] = {}
        n = self.nvars
        for i in range(n):
            for j in range(i, n):
                c = self.Q[i, j] * (1 if i == j else 2)
                if c:
                    out[(i, j)] = c
            if self.l[i]:
                out[(i,)] = self.l[i]
        if self.c:
            out[()] = self.c
        return out

    def __str__(self):
        terms = []
        for key, c in sorted(self.coefficients().items(), key=lambda kv: (-len(kv[0]), kv[0])):
            mono = "*".join(f"v{i + 1}" for i in key)
            if len(key) == 2 and key[0] == key[1]:
                mono = f"v{key[0] + 1}^2"
            terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(terms) if terms else "0"


def to_polynomial(j: JacobiElement, omega: Mat) -> QuadPolynomial:
    """phi(w, c, X)(v) = 1/2 Omega(Xv, v) + Omega(w, v) + c."""
    a = j.x.T @ omega  # 1/2 Omega(Xv, v) = 1/2 v^T X^T Omega v
    q = (a + a.T).scale(Fraction(1, 4))
    ell = omega.T.apply(j.w)
    return QuadPolynomial(q, ell, Fraction(j.c))


class ConeQuery:
    """W_f for Spindler data and a functional f on z with f o beta symplectic."""

    def __init__(self, data: SpindlerData, f: Sequence, algebra: LieAlgebra | None = None, convex_witness=None):
        self.data = data
        self.form = SymplecticForm.from_functional(data, f)
        self.f = self.form.f
        self.omega = self.form.omega
        try:
            inverse(self.omega)
        except Singular as exc:
            raise OmegaSingular("f o beta is degenerate") from exc
        self._algebra = algebra
        self.convex_witness = vec(convex_witness) if convex_witness is not None else None

    @cached_property
    def algebra(self) -> LieAlgebra:
        return self._algebra if self._algebra is not None else build(self.data)

    def convex_type_ok(self) -> bool | None:
        """Lazy convex-type check; None when no witness was supplied."""
        if self.convex_witness is None:
            return None
        return check_convex_type(self.data, self.form, self.convex_witness)

    def polynomial(self, coords: Sequence) -> QuadPolynomial:
        return to_polynomial(phi_f(self, coords), self.omega)


def phi_f(query: ConeQuery, coords: Sequence) -> JacobiElement:
    """(v, z, x) -> (v, f(z), rho(x))."""
    v, z, x = query.data.split(coords)
    return JacobiElement(v, dot(query.f, z), query.data.rho_of(x))


def jacobi_bracket(a: JacobiElement, b: JacobiElement, omega: Mat) -> JacobiElement:
    """Bracket of hsp(V, Omega): (x w' - x' w, Omega(w, w'), [x, x'])."""
    w = vsub(a.x.apply(b.w), b.x.apply(a.w))
    c = dot(a.w, omega.apply(b.w))
    return JacobiElement(w, c, a.x @ b.x - b.x @ a.x)


def in_cone(query: ConeQuery, coords: Sequence) -> bool:
    return query.polynomial(coords).is_nonnegative()


def in_cone_interior(query: ConeQuery, coords: Sequence, subspace: Sequence[Sequence] | None = None) -> bool:
    """Interior membership; relative to ``subspace`` when one is given.

    Without a subspace this is positive definiteness of the bordered matrix M.
    Relative to a subspace S containing the point, M(x) + t M(e) stays PSD for
    all small |t| and all e in S iff M(x) is PSD and ker M(x) lies in ker M(e).
    """
    m = query.polynomial(coords).bordered()
    if subspace is None:
        return psd_status(m) is PSDStatus.POSITIVE_DEFINITE
    if not in_span(coords, subspace, query.data.dim):
        raise ValueError("point does not lie in the subspace")
    if not psd_status(m).is_psd:
        return False
    ker = kernel(m)
    for e in subspace:
        me = query.polynomial(e).bordered()
        if any(not is_zero(me.apply(k)) for k in ker):
            return False
    return True


def witness_3grading(
    query: ConeQuery,
    grading: Grading3,
    classified: ClassifiedDerivation,
    side: int,
    jordan_units: Sequence[Sequence],
    central: Sequence | None = None,
) -> Vec:
    """sum_k x_k + z for Jordan units x_k in s_side(h) and f(z) > 0."""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    data = query.data
    ad = data.l.ad_matrix(classified.h)
    s = data.semisimple_part
    total = data.embed()
    for x in jordan_units:
        x = vec(x)
        if ad.apply(x) != vscale(side, x) or not in_span(x, s, data.l.dim):
            raise NotInEigenspace(f"{x} is not in s_{side:+d}(h)")
        total = vadd(total, data.embed(x=x))
    if central is not None:
        central = vec(central)
        if dot(query.f, central) <= 0:
            raise ValueError("central part must satisfy f(z) > 0")
        total = vadd(total, data.embed(z=central))
    if not in_span(total, grading.part(side), data.dim):
        raise NotInEigenspace(f"witness is not in g_{side:+d}(D)")
    return total


@dataclass(frozen=True)
class SpanCertificate:
    subspace: list[Vec]
    witness: Vec
    epsilons: tuple[Fraction, ...]
    points: tuple[Vec, ...] = field(repr=False)
    verdicts: tuple[bool, ...] = field(repr=False)

    @property
    def min_epsilon(self) -> Fraction | None:
        return min(self.epsilons) if self.epsilons else None

    def revalidate(self, query: ConeQuery) -> bool:
        """Every point lies in W_f and the points span the subspace."""
        dim = query.data.dim
        if not in_cone(query, self.witness):
            return False
        expected = []
        for e, eps in zip(self.subspace, self.epsilons):
            expected += [vadd(self.witness, vscale(eps, e)), vsub(self.witness, vscale(eps, e))]
        if tuple(expected) != self.points:
            return False
        if not all(in_cone(query, p) for p in self.points):
            return False
        if not subspace_contains(self.subspace, self.points, dim):
            return False
        return span_rank(self.points, dim) == len(self.subspace)


def certify_span(
    query: ConeQuery,
    subspace: Sequence[Sequence],
    witness: Sequence,
    max_halvings: int = 40,
    diagnostics: list | None = None,
) -> SpanCertificate | None:
    """Certificate that W_f cap subspace spans the subspace, or None (inconclusive)."""
    subspace = [vec(e) for e in subspace]
    witness = vec(witness)
    dim = query.data.dim
    if not in_span(witness, subspace, dim):
        raise ValueError("witness does not lie in the subspace")
    if not in_cone(query, witness):
        raise WitnessNotInCone("witness is not in W_f")
    epsilons, points = [], []
    for i, e in enumerate(subspace):
        eps = Fraction(1)
        for _ in range(max_halvings + 1):
            plus, minus = vadd(witness, vscale(eps, e)), vsub(witness, vscale(eps, e))
            if in_cone(query, plus) and in_cone(query, minus):
                break
            eps /= 2
        else:
            if diagnostics is not None:
                diagnostics.append(i)
            return None
        epsilons.append(eps)
        points += [plus, minus]
    return SpanCertificate(subspace, witness, tuple(epsilons), tuple(points), (True,) * len(points))


# --- the u-block -------------------------------------------------------------------

def u_block(data: SpindlerData) -> list[Vec]:
    return data.block_basis("V") + data.block_basis("z")


def cone_span_in_u(query: ConeQuery, subspace: Sequence[Sequence]) -> list[Vec]:
    """Basis of span(W_f cap S) for a subspace S of u = V + z.

    On u the polynomial is affine, u -> Omega(v, u) + f(z), and Omega is
    invertible, so W_f cap u = {(0, z, 0) : f(z) >= 0}.  Hence W_f cap S is a
    half-space (or all) of T = S cap z and spans T.
    """
    data = query.data
    dim = data.dim
    subspace = [vec(s) for s in subspace]
    if not subspace_contains(u_block(data), subspace, dim):
        raise ValueError("subspace is not contained in u")
    if not subspace:
        return []
    # T = {sum c_i s_i : V-part vanishes}
    rows = [[s[p] for s in subspace] for p in data.v_slice]
    coeffs = sparse_kernel(rows, len(subspace))
    t = [tuple(sum((c * s[i] for c, s in zip(cs, subspace)), Fraction(0)) for i in range(dim)) for cs in coeffs]
    return span_basis(t, dim)


def check_u_characterization(query: ConeQuery) -> bool:
    """W_f cap u = {(0, z, 0) : f(z) >= 0}, checked on its exact ingredients.

    A u-element has affine polynomial Omega(v, .) + f(z); it is non-negative
    iff its linear part vanishes and f(z) >= 0.  The linear part is
    -Omega v, so the identity holds iff Omega is invertible; each V basis
    direction must therefore be decided as not in W_f and each z direction
    according to the sign of f.
    """
    data = query.data
    if det(query.omega) == 0:
        return False
    for p in range(data.dim_v):
        for c in (0, 1, -1):
            for r in range(data.dim_z):
                pt = data.embed(v=unit_vec(data.dim_v, p), z=vscale(c, unit_vec(data.dim_z, r)))
                if in_cone(query, pt):
                    return False
            if data.dim_z == 0 and in_cone(query, data.embed(v=unit_vec(data.dim_v, p))):
                return False
    for r in range(data.dim_z):
        for sign in (1, -1):
            z = vscale(sign, unit_vec(data.dim_z, r))
            if in_cone(query, data.embed(z=z)) != (dot(query.f, z) >= 0):
                return False
    return True


def exp_ad_nilpotent(g: LieAlgebra, n: Sequence, x: Sequence, max_terms: int | None = None) -> Vec:
    """e^{ad n} x as the exact finite sum; raises if ad n is not nilpotent on x."""
    ad = g.ad_matrix(n)
    term = vec(x)
    total = term
    k = 1
    limit = max_terms if max_terms is not None else g.dim + 1
    while not is_zero(term):
        if k > limit:
            raise ValueError("ad(n) is not nilpotent on x")
        term = vscale(Fraction(1, k), ad.apply(term))
        total = vadd(total, term)
        k += 1
    return total
