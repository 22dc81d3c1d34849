"""Named instances with their witnesses, so the pipelines run without input files."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .derivations import build_classified, classify_from_derivation, compatible_dz, detect_3grading
from .lie import LieAlgebra, abelian, matrix_lie_algebra
from .linalg import Mat, Vec, solve, sparse_kernel, span_basis, unit_vec, vec
from .spindler import (
    SpindlerData,
    SymplecticForm,
    build,
    check_convex_type,
    check_effective_torus,
    standard_omega,
)

HALF = Fraction(1, 2)
MAX_DIM_V = 8


class CatalogError(Exception):
    pass


class UnknownName(CatalogError):
    pass


@dataclass
class Witnesses:
    f: Vec | None = None
    convex_type_x: Vec | None = None
    torus: list[Vec] = field(default_factory=list)
    h: Vec | None = None
    d_v: Mat | None = None
    d_z: Mat | None = None
    jordan_units: dict[int, list[Vec]] = field(default_factory=dict)
    central: dict[int, Vec | None] = field(default_factory=dict)
    ideals: dict[str, list[Vec]] = field(default_factory=dict)
    tube_type: dict[str, bool] = field(default_factory=dict)


@dataclass
class CatalogEntry:
    name: str
    data: SpindlerData
    witnesses: Witnesses
    description: str = ""
    extra: dict = field(default_factory=dict)

    @cached_property
    def algebra(self) -> LieAlgebra:
        torus = self.witnesses.torus or None
        return build(self.data, torus=torus)

    @property
    def has_derivation(self) -> bool:
        w = self.witnesses
        return w.h is not None and w.d_v is not None and w.d_z is not None

    def classified(self):
        w = self.witnesses
        if not self.has_derivation:
            raise CatalogError(f"{self.name} ships no grading derivation")
        return build_classified(self.data, w.h, w.d_v, w.d_z, algebra=self.algebra)

    def self_checks(self) -> dict[str, bool]:
        w = self.witnesses
        out = {"jacobi_identity": True}  # build validated it
        self.algebra
        if w.f is not None and w.convex_type_x is not None:
            form = SymplecticForm.from_functional(self.data, w.f)
            out["convex_type"] = check_convex_type(self.data, form, w.convex_type_x)
        if w.torus:
            out["effective_torus"] = check_effective_torus(self.data, w.torus)
        if self.has_derivation:
            cd, d = self.classified()
            out["grading_detected"] = detect_3grading(d) is not None
            back = classify_from_derivation(self.data, d)
            out["round_trip"] = back is not None and back.h == cd.h and back.d_v == cd.d_v and back.d_z == cd.d_z
        return out


# --- matrix algebras ------------------------------------------------------------------

def _e(n, i, j) -> Mat:
    return Mat([[int((a, b) == (i, j)) for b in range(n)] for a in range(n)], ncols=n)


def _blocks(a: Mat, b: Mat, c: Mat, d: Mat) -> Mat:
    rows = [list(r1) + list(r2) for r1, r2 in zip(a.rows, b.rows)]
    rows += [list(r1) + list(r2) for r1, r2 in zip(c.rows, d.rows)]
    return Mat(rows, ncols=a.ncols + b.ncols)


def sp2n_basis(n: int) -> tuple[list[Mat], list[str]]:
    """Basis of sp(2n, R) for the standard form: gl(n) block, upper symmetric, lower symmetric."""
    z = Mat.zeros(n)
    basis, labels = [], []
    for i in range(n):
        for j in range(n):
            a = _e(n, i, j)
            basis.append(_blocks(a, z, z, -a.T))
            labels.append(f"A{i}{j}")
    sym = []
    for i in range(n):
        for j in range(i, n):
            sym.append(((i, j), _e(n, i, j) if i == j else _e(n, i, j) + _e(n, j, i)))
    for (i, j), s in sym:
        basis.append(_blocks(z, s, z, z))
        labels.append(f"P{i}{j}")
    for (i, j), s in sym:
        basis.append(_blocks(z, z, s, z))
        labels.append(f"N{i}{j}")
    return basis, labels


def sl2_matrices() -> dict[str, Mat]:
    return {
        "H": Mat([[1, 0], [0, -1]]),
        "E": Mat([[0, 1], [0, 0]]),
        "F": Mat([[0, 0], [1, 0]]),
        "U": Mat([[0, 1], [-1, 0]]),
    }


def _h_element(n: int) -> Mat:
    return Mat.diag([HALF] * n + [-HALF] * n)


def _jordan_unit(n: int, side: int) -> Mat:
    z, i = Mat.zeros(n), Mat.identity(n)
    return _blocks(z, i, z, z) if side == 1 else -_blocks(z, z, i, z)


def _spindler(l: LieAlgebra, rho, dim_v, forms, **kw) -> SpindlerData:
    return SpindlerData(l, tuple(rho), dim_v, len(forms), tuple(forms), **kw)


def _empty_module(l: LieAlgebra) -> SpindlerData:
    return _spindler(l, [Mat.zeros(0)] * l.dim, 0, [])


# --- entries -------------------------------------------------------------------------

def sl2() -> CatalogEntry:
    m = sl2_matrices()
    l = matrix_lie_algebra([m["H"], m["E"], m["F"]], labels=["H", "E", "F"])
    data = _empty_module(l)
    w = Witnesses(
        convex_type_x=vec((0, 1, -1)),
        torus=[vec((0, 1, -1))],
        h=vec((HALF, 0, 0)),
        d_v=Mat.zeros(0),
        d_z=Mat.zeros(0),
        jordan_units={1: [vec((0, 1, 0))], -1: [vec((0, 0, -1))]},
        ideals={"sl2": l.full_basis()},
        tube_type={"sl2": True},
    )
    return CatalogEntry("sl2", data, w, "sl(2, R) with h = H/2")


def _sp_data(n: int):
    basis, labels = sp2n_basis(n)
    l = matrix_lie_algebra(basis, labels=labels)
    return l, basis


def _coords(basis: list[Mat], m: Mat) -> Vec:
    cols = Mat.from_columns([b.flatten() for b in basis])
    return solve(cols, m.flatten())


def sp2n(n: int = 1) -> CatalogEntry:
    l, basis = _sp_data(n)
    data = _empty_module(l)
    u = standard_omega(n)
    w = Witnesses(
        convex_type_x=_coords(basis, u),
        torus=_diagonal_torus(n, basis),
        h=_coords(basis, _h_element(n)),
        d_v=Mat.zeros(0),
        d_z=Mat.zeros(0),
        jordan_units={s: [_coords(basis, _jordan_unit(n, s))] for s in (1, -1)},
        ideals={f"sp{2 * n}": l.full_basis()},
        tube_type={f"sp{2 * n}": True},
    )
    return CatalogEntry(f"sp2n({n})", data, w, f"sp({2 * n}, R) with h = diag(1, -1)/2")


def _diagonal_torus(n: int, basis: list[Mat]) -> list[Vec]:
    """Rotations in the (e_k, e_{n+k}) planes."""
    out = []
    for k in range(n):
        u = _e(2 * n, k, n + k) - _e(2 * n, n + k, k)
        out.append(_coords(basis, u))
    return out


def heis(n: int = 1) -> CatalogEntry:
    _cap(2 * n)
    om = standard_omega(n)
    data = _spindler(abelian(0), [], 2 * n, [om])
    return CatalogEntry(f"heis({n})", data, Witnesses(f=vec((1,))), f"Heisenberg algebra on R^{2 * n}")


def jacobi(n: int = 1) -> CatalogEntry:
    _cap(2 * n)
    l, basis = _sp_data(n)
    om = standard_omega(n)
    data = _spindler(l, basis, 2 * n, [om])
    w = Witnesses(
        f=vec((1,)),
        convex_type_x=_coords(basis, om),
        torus=_diagonal_torus(n, basis),
        h=_coords(basis, _h_element(n)),
        d_v=Mat.identity(2 * n).scale(HALF),
        d_z=Mat.identity(1),
        jordan_units={s: [_coords(basis, _jordan_unit(n, s))] for s in (1, -1)},
        central={1: vec((1,)), -1: None},
        ideals={f"sp{2 * n}": l.full_basis()},
        tube_type={f"sp{2 * n}": True},
    )
    return CatalogEntry(f"jacobi({n})", data, w, f"Jacobi algebra hsp(R^{2 * n})")


def ex318() -> CatalogEntry:
    m = sl2_matrices()
    l = matrix_lie_algebra([m["H"], m["E"], m["F"]], labels=["H", "E", "F"])
    rho = [Mat.block_diag(x, x) for x in (m["H"], m["E"], m["F"])]
    om = standard_omega(1)
    z2 = Mat.zeros(2)
    forms = [Mat.block_diag(om, z2), Mat.block_diag(z2, om)]
    data = _spindler(l, rho, 4, forms)
    w = Witnesses(
        f=vec((1, 1)),
        convex_type_x=vec((0, 1, -1)),
        torus=[vec((0, 1, -1))],
        h=vec((HALF, 0, 0)),
        d_v=Mat.diag([HALF, HALF, -HALF, -HALF]),
        d_z=Mat.diag([1, -1]),
        jordan_units={1: [vec((0, 1, 0))], -1: [vec((0, 0, -1))]},
        central={1: vec((1, 0)), -1: vec((0, 1))},
        ideals={"sl2": l.full_basis()},
        tube_type={"sl2": True},
    )
    return CatalogEntry("generalized_jacobi_ex318", data, w, "sl(2, R) acting diagonally on V + V, z = R^2")


def oscillator() -> CatalogEntry:
    u = sl2_matrices()["U"]
    l = abelian(1, labels=["U"])
    data = _spindler(l, [u], 2, [standard_omega(1)])
    w = Witnesses(f=vec((1,)), convex_type_x=vec((1,)), torus=[vec((1,))])
    return CatalogEntry("oscillator", data, w, "Heisenberg algebra extended by the rotation U")


def wedge_fix(n: int = 2, split: int | None = None) -> CatalogEntry:
    """sl(2, R) on V = R^2 (x) R^n, z = (V ^ V)_fix, beta = fixed part of v ^ w.

    The first ``split`` copies of R^2 form V_1 (D_V = 1/2), the rest V_-1.
    """
    _cap(2 * n)
    split = (n + 1) // 2 if split is None else split
    if not 0 <= split <= n:
        raise ValueError("split must lie between 0 and n")
    m = sl2_matrices()
    l = matrix_lie_algebra([m["H"], m["E"], m["F"]], labels=["H", "E", "F"])
    rho = [Mat.block_diag(*([x] * n)) for x in (m["H"], m["E"], m["F"])]
    dim_v = 2 * n
    om = Mat.block_diag(*([standard_omega(1)] * n))
    pairs = list(combinations(range(dim_v), 2))
    index = {pq: i for i, pq in enumerate(pairs)}

    def wedge(u, v):
        out = [Fraction(0)] * len(pairs)
        for p in range(dim_v):
            for q in range(dim_v):
                if p != q and u[p] and v[q]:
                    a, b = (p, q) if p < q else (q, p)
                    out[index[a, b]] += u[p] * v[q] * (1 if p < q else -1)
        return tuple(out)

    def act(x: Mat, w_idx: int):
        p, q = pairs[w_idx]
        ep, eq = unit_vec(dim_v, p), unit_vec(dim_v, q)
        a, b = wedge(x.apply(ep), eq), wedge(ep, x.apply(eq))
        return tuple(s + t for s, t in zip(a, b))

    acts = [Mat.from_columns([act(x, i) for i in range(len(pairs))], len(pairs)) for x in rho]
    fix = sparse_kernel([r for a in acts for r in a.rows], len(pairs))
    eff = span_basis((a.col(i) for a in acts for i in range(len(pairs))), len(pairs))
    if len(fix) + len(eff) != len(pairs):
        raise CatalogError("V ^ V does not split into fixed and effective parts")
    split_basis = Mat.from_columns(fix + eff)
    forms_rows: list[list[list[Fraction]]] = [[[Fraction(0)] * dim_v for _ in range(dim_v)] for _ in fix]
    for (p, q), i in index.items():
        c = solve(split_basis, unit_vec(len(pairs), i))
        for r in range(len(fix)):
            forms_rows[r][p][q] = c[r]
            forms_rows[r][q][p] = -c[r]
    forms = [Mat(f, ncols=dim_v) for f in forms_rows]
    f = tuple(sum((om[p, q] * fr[index[p, q]] for p, q in pairs), Fraction(0)) for fr in fix)
    data = _spindler(l, rho, dim_v, forms)
    d_v = Mat.diag([HALF] * (2 * split) + [-HALF] * (2 * (n - split)))
    d_z = compatible_dz(d_v, forms)

    def central(side):
        lo, hi = (0, 2 * split) if side == 1 else (2 * split, dim_v)
        if hi - lo < 2:
            return None
        return data.beta(unit_vec(dim_v, lo), unit_vec(dim_v, lo + 1))

    w = Witnesses(
        f=f,
        convex_type_x=vec((0, 1, -1)),
        torus=[vec((0, 1, -1))],
        h=vec((HALF, 0, 0)),
        d_v=d_v,
        d_z=d_z,
        jordan_units={1: [vec((0, 1, 0))], -1: [vec((0, 0, -1))]},
        central={1: central(1), -1: central(-1)},
        ideals={"sl2": l.full_basis()},
        tube_type={"sl2": True},
    )
    return CatalogEntry(
        f"wedge_fix_ex319({n})", data, w, "sl(2, R) on R^2 (x) R^n with z = (V ^ V)_fix",
        extra={"fix_basis": fix, "omega": om, "wedge_pairs": pairs},
    )


def _cap(dim_v: int, limit: int | None = None):
    limit = MAX_DIM_V if limit is None else limit
    if dim_v > limit:
        raise CatalogError(f"dim V = {dim_v} exceeds the catalog cap {limit}")


BUILDERS = {
    "sl2": (sl2, None),
    "sp2n": (sp2n, 1),
    "heis": (heis, 1),
    "jacobi": (jacobi, 1),
    "generalized_jacobi_ex318": (ex318, None),
    "ex318": (ex318, None),
    "oscillator": (oscillator, None),
    "wedge_fix_ex319": (wedge_fix, 2),
    "ex319": (wedge_fix, 2),
}

NAMES = ("sl2", "sp2n(n)", "heis(n)", "jacobi(n)", "generalized_jacobi_ex318", "oscillator", "wedge_fix_ex319(n)")

_NAME_RE = re.compile(r"^\s*([a-z0-9_]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def get(name: str, check: bool = True) -> CatalogEntry:
    """Materialize a catalog entry; ``name`` is e.g. ``jacobi(2)`` or ``ex318``."""
    m = _NAME_RE.match(name)
    if not m or m.group(1) not in BUILDERS:
        raise UnknownName(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")
    builder, default = BUILDERS[m.group(1)]
    if m.group(2) is not None:
        if default is None:
            raise UnknownName(f"catalog entry {m.group(1)!r} takes no size parameter")
        n = int(m.group(2))
        if n < 1:
            raise UnknownName("size parameter must be positive")
        entry = builder(n)
    else:
        entry = builder() if default is None else builder(default)
    if check:
        bad = [k for k, ok in entry.self_checks().items() if not ok]
        if bad:
            raise CatalogError(f"{entry.name}: shipped witnesses fail {', '.join(bad)}")
    return entry


def standard_entries() -> list[str]:
    return ["sl2", "sp2n(1)", "sp2n(2)", "heis(1)", "heis(2)", "jacobi(1)", "jacobi(2)", "ex318", "oscillator", "ex319(1)", "ex319(2)"]
