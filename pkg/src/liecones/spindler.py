"""Spindler's construction g(l, V, z, beta) and the symplectic tools around it.

Conventions used throughout the package:

* A skew map ``beta: V x V -> z`` is stored as one antisymmetric matrix per
  basis vector of ``z``: ``beta(v, w)_r = v^T B_r w``.
* A bilinear form ``Omega`` is its Gram matrix, ``Omega(v, w) = v^T Omega w``.
* The composite basis of a build is ``V`` block, then ``z`` block, then ``l``
  block, mirroring tuples ``(v, z, x)``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from .lie import LieAlgebra, matrix_lie_algebra
from .linalg import (
    Inconsistent,
    Mat,
    PSDStatus,
    Singular,
    Vec,
    commutator,
    det,
    eigenspace,
    frac,
    in_span,
    inverse,
    is_zero,
    psd_status,
    solve,
    span_basis,
    sparse_kernel,
    unit_vec,
    vec,
)


class SpindlerError(Exception):
    pass


class InvalidData(SpindlerError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class OmegaSingular(SpindlerError):
    pass


class NotAbelian(SpindlerError):
    pass


class RankDeficientBeta(UserWarning):
    """span beta(V, V) is a proper subspace of z."""


def forms_from_tensor(beta: Mapping[tuple[int, int], Mapping[int, object]], dim_v: int, dim_z: int) -> tuple[Mat, ...]:
    """Convert a sparse ``b[(p, q)][r]`` tensor into per-component Gram matrices.

    Pairs may be given in either order; when both orders are present they must
    be negatives of each other.
    """
    entries: dict[tuple[int, int, int], Fraction] = {}
    for (p, q), coeffs in beta.items():
        for r, c in coeffs.items():
            c = frac(c)
            r = int(r)
            if not (0 <= p < dim_v and 0 <= q < dim_v and 0 <= r < dim_z):
                raise InvalidData(f"beta index out of range at ({p}, {q}, {r})", (p, q, r))
            if p == q:
                if c:
                    raise InvalidData(f"beta(f{p}, f{p}) must vanish", (p, q, r))
                continue
            for key, val in (((p, q, r), c), ((q, p, r), -c)):
                if key in entries and entries[key] != val:
                    raise InvalidData(f"beta is not antisymmetric at ({p}, {q}, {r})", (p, q, r))
                entries[key] = val
    forms = []
    for r in range(dim_z):
        forms.append(Mat([[entries.get((p, q, r), 0) for q in range(dim_v)] for p in range(dim_v)], ncols=dim_v))
    return tuple(forms)


def combine_forms(forms: Sequence[Mat], g: Sequence, dim_v: int) -> Mat:
    """Gram matrix of ``g o beta``."""
    out = Mat.zeros(dim_v)
    for c, b in zip(vec(g), forms, strict=True):
        if c:
            out = out + b.scale(c)
    return out


@dataclass(frozen=True)
class SpindlerData:
    """Inputs (l, rho, z, beta) of Spindler's construction.

    ``rho[a]`` is the action of the ``a``-th basis vector of ``l`` on ``V``;
    ``forms[r]`` is the ``r``-th component of ``beta``.
    """

    l: LieAlgebra
    rho: tuple[Mat, ...]
    dim_v: int
    dim_z: int
    forms: tuple[Mat, ...]
    v_labels: tuple[str, ...] | None = None
    z_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(self.rho))
        object.__setattr__(self, "forms", tuple(self.forms))
        self.validate()

    @classmethod
    def from_tensor(cls, l, rho, dim_v, dim_z, beta, **kw) -> SpindlerData:
        return cls(l, tuple(rho), dim_v, dim_z, forms_from_tensor(beta, dim_v, dim_z), **kw)

    def validate(self):
        n = self.dim_v
        if len(self.rho) != self.l.dim:
            raise InvalidData(f"expected {self.l.dim} representation matrices, got {len(self.rho)}")
        if len(self.forms) != self.dim_z:
            raise InvalidData(f"expected {self.dim_z} components of beta, got {len(self.forms)}")
        for a, m in enumerate(self.rho):
            if m.shape != (n, n):
                raise InvalidData(f"rho[{a}] has shape {m.shape}, expected {(n, n)}")
        for r, b in enumerate(self.forms):
            if b.shape != (n, n):
                raise InvalidData(f"beta component {r} has shape {b.shape}")
            for p in range(n):
                for q in range(p, n):
                    if b[p, q] != -b[q, p]:
                        raise InvalidData(f"beta is not antisymmetric at ({p}, {q}, {r})", (p, q, r))
        for a, b in combinations(range(self.l.dim), 2):
            lhs = Mat.zeros(n)
            for k, c in self.l.structure_constant(a, b).items():
                lhs = lhs + self.rho[k].scale(c)
            rhs = commutator(self.rho[a], self.rho[b])
            if lhs != rhs:
                raise InvalidData(f"rho is not a homomorphism on the basis pair ({a}, {b})", (a, b, None))
        for a, x in enumerate(self.rho):
            for r, b in enumerate(self.forms):
                # beta(x.v, w) + beta(v, x.w) = v^T (x^T B + B x) w
                inv = x.T @ b + b @ x
                if not inv.is_zero():
                    p, q = next((p, q) for p in range(n) for q in range(n) if inv[p, q])
                    raise InvalidData(
                        f"beta is not l-invariant: basis x{a}, v=f{p}, w=f{q} (component {r})", (a, p, q)
                    )

    # --- helpers ------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.dim_v + self.dim_z + self.l.dim

    @property
    def v_slice(self) -> range:
        return range(0, self.dim_v)

    @property
    def z_slice(self) -> range:
        return range(self.dim_v, self.dim_v + self.dim_z)

    @property
    def l_slice(self) -> range:
        return range(self.dim_v + self.dim_z, self.dim)

    def beta(self, v: Sequence, w: Sequence) -> Vec:
        return tuple(sum((a * x for a, x in zip(v, b.apply(w))), Fraction(0)) for b in self.forms)

    def rho_of(self, x: Sequence) -> Mat:
        """Representation matrix of an element of ``l`` given by coordinates."""
        out = Mat.zeros(self.dim_v)
        for c, m in zip(vec(x), self.rho, strict=True):
            if c:
                out = out + m.scale(c)
        return out

    def omega(self, f: Sequence) -> Mat:
        return combine_forms(self.forms, f, self.dim_v)

    def l_coords(self, m: Mat) -> Vec:
        """Coordinates of an element of ``l`` from its (faithful) representation matrix."""
        if not self.rho:
            if m.is_zero():
                return ()
            raise Inconsistent("matrix is not in rho(l)")
        cols = Mat.from_columns([r.flatten() for r in self.rho])
        sol = solve(cols, m.flatten())
        if self.rho_of(sol) != m:
            raise Inconsistent("matrix is not in rho(l)")
        return sol

    def embed(self, v=None, z=None, x=None) -> Vec:
        """Composite-basis coordinates of ``(v, z, x)``; omitted blocks are zero."""
        v = vec(v) if v is not None else (Fraction(0),) * self.dim_v
        z = vec(z) if z is not None else (Fraction(0),) * self.dim_z
        x = vec(x) if x is not None else (Fraction(0),) * self.l.dim
        if (len(v), len(z), len(x)) != (self.dim_v, self.dim_z, self.l.dim):
            raise ValueError("block lengths do not match the Spindler data")
        return v + z + x

    def split(self, coords: Sequence) -> tuple[Vec, Vec, Vec]:
        coords = vec(coords)
        return (
            coords[: self.dim_v],
            coords[self.dim_v: self.dim_v + self.dim_z],
            coords[self.dim_v + self.dim_z:],
        )

    def block_basis(self, block: str) -> list[Vec]:
        idx = {"V": self.v_slice, "z": self.z_slice, "l": self.l_slice}[block]
        return [unit_vec(self.dim, i) for i in idx]

    @cached_property
    def semisimple_part(self) -> list[Vec]:
        """Basis of s = [l, l] in l-coordinates."""
        return self.l.derived_subalgebra()

    def beta_image(self) -> list[Vec]:
        return span_basis((self.beta(unit_vec(self.dim_v, p), unit_vec(self.dim_v, q))
                           for p, q in combinations(range(self.dim_v), 2)), self.dim_z)


def build(data: SpindlerData, torus: Sequence[Sequence] | None = None, validate: bool = True) -> LieAlgebra:
    """The Lie algebra g(l, V, z, beta) in the composite basis.

    ``[(v,z,x), (v',z',x')] = (x.v' - x'.v, beta(v, v'), [x, x'])``.  When a
    torus of ``l`` with trivial joint kernel on ``V`` is supplied, ``V + z`` is
    recorded as the nilradical.
    """
    dv, dz, dl = data.dim_v, data.dim_z, data.l.dim
    off = dv + dz
    structure: dict[tuple[int, int], dict[int, Fraction]] = {}
    for p, q in combinations(range(dv), 2):
        cs = {dv + r: b[p, q] for r, b in enumerate(data.forms) if b[p, q]}
        if cs:
            structure[(p, q)] = cs
    for p in range(dv):
        for a in range(dl):
            # [f_p, x_a] = -x_a . f_p
            cs = {s: -data.rho[a][s, p] for s in range(dv) if data.rho[a][s, p]}
            if cs:
                structure[(p, off + a)] = cs
    for (a, b), cs in data.l.structure.items():
        structure[(off + a, off + b)] = {off + k: c for k, c in cs.items()}
    labels = (
        tuple(data.v_labels or (f"v{p}" for p in range(dv)))
        + tuple(data.z_labels or (f"z{r}" for r in range(dz)))
        + data.l.labels
    )
    metadata: dict[str, object] = {"blocks": {"V": (0, dv), "z": (dv, off), "l": (off, off + dl)}}
    if torus is not None and check_effective_torus(data, torus):
        metadata["nilradical"] = data.block_basis("V") + data.block_basis("z")
    if dz and len(data.beta_image()) < dz:
        warnings.warn(
            "span beta(V, V) is a proper subspace of z; the center is then not contained in [g, g]",
            RankDeficientBeta,
            stacklevel=2,
        )
    return LieAlgebra(data.dim, structure, labels=labels, metadata=metadata, validate=validate)


def center_closed_form(data: SpindlerData) -> list[Vec]:
    """{0} x z x {x in z(l) : x.V = 0} in composite coordinates."""
    zl = data.l.center()
    fixed = []
    if zl:
        # x = sum c_i zl_i with sum c_i rho(zl_i) = 0
        mats = [data.rho_of(c).flatten() for c in zl]
        rows = [[m[k] for m in mats] for k in range(data.dim_v ** 2)]
        for coeffs in sparse_kernel(rows, len(zl)):
            x = tuple(sum((c * v[i] for c, v in zip(coeffs, zl)), Fraction(0)) for i in range(data.l.dim))
            fixed.append(data.embed(x=x))
    return data.block_basis("z") + fixed


def derived_closed_form(data: SpindlerData) -> list[Vec]:
    """span(l.V) x [V, V] x [l, l]; equals V x [V, V] x s when V = span(l.V)."""
    lv = span_basis((m.col(j) for m in data.rho for j in range(data.dim_v)), data.dim_v)
    vv = data.beta_image()
    ll = data.semisimple_part
    return [data.embed(v=v) for v in lv] + [data.embed(z=z) for z in vv] + [data.embed(x=x) for x in ll]


def sp_of_beta(dim_v: int, forms: Sequence[Mat]) -> list[Mat]:
    """Basis of sp(V, beta) = {X : beta(Xv, w) + beta(v, Xw) = 0}."""
    n = dim_v
    rows = []
    for b in forms:
        for p in range(n):
            for q in range(p + 1, n):
                # (X^T B + B X)[p][q] = sum_s X[s][p] B[s][q] + sum_s B[p][s] X[s][q]
                row: dict[int, Fraction] = {}
                for s in range(n):
                    if b[s, q]:
                        row[s * n + p] = row.get(s * n + p, 0) + b[s, q]
                    if b[p, s]:
                        row[s * n + q] = row.get(s * n + q, 0) + b[p, s]
                if any(row.values()):
                    rows.append(row)
    basis = [Mat.unflatten(v, n) for v in sparse_kernel(rows, n * n)]
    flat = [m.flatten() for m in basis]
    for x, y in combinations(basis, 2):
        if not in_span(commutator(x, y).flatten(), flat, n * n):
            raise SpindlerError("sp(V, beta) basis is not closed under the commutator")
    return basis


def sharp(x: Mat, omega: Mat) -> Mat:
    """The Omega-adjoint X^#: Omega(Xv, w) = Omega(v, X^# w)."""
    try:
        oinv = inverse(omega)
    except Singular as exc:
        raise OmegaSingular("Omega is degenerate") from exc
    return oinv @ x.T @ omega


def commutant(rho: Sequence[Mat], dim_v: int, omega: Mat | None = None) -> list[Mat]:
    """Basis of End_l(V) = {A : [A, rho(x)] = 0 for all basis x}."""
    n = dim_v
    rows = []
    for r in rho:
        # (A R - R A)[i][j] = sum_k A[i][k] R[k][j] - R[i][k] A[k][j]
        for i in range(n):
            for j in range(n):
                row: dict[int, Fraction] = {}
                for k in range(n):
                    if r[k, j]:
                        row[i * n + k] = row.get(i * n + k, 0) + r[k, j]
                    if r[i, k]:
                        row[k * n + j] = row.get(k * n + j, 0) - r[i, k]
                if any(row.values()):
                    rows.append(row)
    basis = [Mat.unflatten(v, n) for v in sparse_kernel(rows, n * n)]
    if omega is not None:
        flat = [m.flatten() for m in basis]
        for a in basis:
            if not in_span(sharp(a, omega).flatten(), flat, n * n):
                raise SpindlerError("commutant is not closed under the Omega-adjoint")
    return basis


def antisymmetric_part(mats: Sequence[Mat], omega: Mat) -> list[Mat]:
    """Basis of {A in span(mats) : A^# = -A}."""
    if not mats:
        return []
    n = mats[0].nrows
    diffs = [(sharp(a, omega) + a).flatten() for a in mats]
    rows = [[d[k] for d in diffs] for k in range(n * n)]
    out = []
    for coeffs in sparse_kernel(rows, len(mats)):
        m = Mat.zeros(n)
        for c, a in zip(coeffs, mats):
            if c:
                m = m + a.scale(c)
        out.append(m)
    return out


SPECTRUM_PROBES = tuple(Fraction(x) for x in (1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2))


def real_probe_failures(x: Mat, probes: Sequence = SPECTRUM_PROBES) -> list[Fraction]:
    """Probe values that are real eigenvalues of ``x`` (empty when none are)."""
    bad = []
    for lam in probes:
        if eigenspace(x, lam) or det(x - Mat.identity(x.nrows).scale(lam)) == 0:
            bad.append(frac(lam))
    return bad


def psi_g(g: Sequence, f: Sequence, forms: Sequence[Mat]) -> Mat:
    """The Omega-symmetric map with (g o beta)(v, w) = Omega(Psi v, w), Omega = f o beta."""
    n = forms[0].nrows if forms else 0
    omega = combine_forms(forms, f, n)
    try:
        oinv = inverse(omega)
    except Singular as exc:
        raise OmegaSingular("f o beta is degenerate") from exc
    psi = oinv @ combine_forms(forms, g, n)
    if sharp(psi, omega) != psi:
        raise SpindlerError("Psi_g is not Omega-symmetric")
    return psi


def sp_via_psi(forms: Sequence[Mat], f: Sequence, gs: Sequence[Sequence]) -> list[Mat]:
    """{x in sp(V, f o beta) : [x, Psi_g] = 0 for all g in gs}."""
    n = forms[0].nrows
    omega = combine_forms(forms, f, n)
    base = sp_of_beta(n, [omega])
    psis = [psi_g(g, f, forms) for g in gs]
    diffs = [tuple(c for p in psis for c in commutator(x, p).flatten()) for x in base]
    if not psis:
        return base
    rows = [[d[k] for d in diffs] for k in range(len(diffs[0]))]
    out = []
    for coeffs in sparse_kernel(rows, len(base)):
        m = Mat.zeros(n)
        for c, x in zip(coeffs, base):
            if c:
                m = m + x.scale(c)
        out.append(m)
    return out


@dataclass(frozen=True)
class SymplecticForm:
    f: Vec
    omega: Mat = field(repr=False)

    @classmethod
    def from_functional(cls, data: SpindlerData, f: Sequence) -> SymplecticForm:
        f = vec(f)
        if len(f) != data.dim_z:
            raise ValueError(f"functional has {len(f)} entries, z has dimension {data.dim_z}")
        return cls(f, data.omega(f))

    @property
    def is_nondegenerate(self) -> bool:
        return det(self.omega) != 0


def hamiltonian_matrix(data: SpindlerData, omega: Mat, x: Sequence) -> Mat:
    """Symmetric matrix of v -> Omega(x.v, v)."""
    a = data.rho_of(x).T @ omega
    return (a + a.T).scale(Fraction(1, 2))


def check_convex_type(data: SpindlerData, form: SymplecticForm, witness_x: Sequence) -> bool:
    """True iff v -> Omega(x.v, v) is positive definite (and Omega is symplectic)."""
    if not form.is_nondegenerate:
        return False
    return psd_status(hamiltonian_matrix(data, form.omega, witness_x)) is PSDStatus.POSITIVE_DEFINITE


def check_effective_torus(data: SpindlerData, torus: Sequence[Sequence]) -> bool:
    """True iff the joint kernel of rho(t), t in the torus, is trivial."""
    torus = [vec(t) for t in torus]
    for s, t in combinations(torus, 2):
        if not is_zero(data.l.bracket_vec(s, t)):
            raise NotAbelian("torus elements do not commute")
    mats = [data.rho_of(t) for t in torus if not is_zero(t)]
    rows = [r for m in mats for r in m.rows]
    return len(sparse_kernel(rows, data.dim_v)) == 0


def jacobi_data(dim_v: int, omega: Mat) -> SpindlerData:
    if omega.shape != (dim_v, dim_v) or omega.T != -omega:
        raise InvalidData("Omega must be an antisymmetric dim_v x dim_v matrix")
    if det(omega) == 0:
        raise OmegaSingular("Omega is degenerate")
    return generalized_jacobi_data(dim_v, [omega])


def generalized_jacobi_data(dim_v: int, forms: Sequence[Mat]) -> SpindlerData:
    basis = sp_of_beta(dim_v, forms)
    l = matrix_lie_algebra(basis, labels=[f"x{a}" for a in range(len(basis))])
    return SpindlerData(l, tuple(basis), dim_v, len(forms), tuple(forms))


def build_jacobi(dim_v: int, omega: Mat) -> LieAlgebra:
    return build(jacobi_data(dim_v, omega))


def build_generalized_jacobi(dim_v: int, dim_z: int, forms: Sequence[Mat]) -> LieAlgebra:
    if len(forms) != dim_z:
        raise InvalidData("number of beta components does not match dim z")
    return build(generalized_jacobi_data(dim_v, forms))


def standard_omega(n: int) -> Mat:
    """Gram matrix [[0, 1], [-1, 0]] (blocks of size n) of the standard form on R^2n."""
    z = Mat.zeros(n)
    i = Mat.identity(n)
    top = [list(a) + list(b) for a, b in zip(z.rows, i.rows)]
    bot = [list(a) + list(b) for a, b in zip((-i).rows, z.rows)]
    return Mat(top + bot, ncols=2 * n)
