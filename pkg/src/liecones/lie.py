"""Finite-dimensional Lie algebras over Q given by structure constants."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .linalg import (
    Echelon,
    Inconsistent,
    Mat,
    Vec,
    frac,
    is_zero,
    solve,
    span_basis,
    sparse_kernel,
    subspace_contains,
    unit_vec,
    vadd,
    vec,
    vscale,
    zero_vec,
)


class LieError(Exception):
    pass


class StructureError(LieError):
    """Structure constants violate antisymmetry or the Jacobi identity."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class ParentMismatch(LieError):
    pass


class MetadataError(LieError):
    pass


@dataclass(frozen=True)
class Element:
    coords: Vec
    parent: "LieAlgebra" = field(repr=False, compare=False)

    def __post_init__(self):
        if len(self.coords) != self.parent.dim:
            raise ValueError(f"expected {self.parent.dim} coordinates, got {len(self.coords)}")

    def _check(self, other):
        if not isinstance(other, Element) or other.parent is not self.parent:
            raise ParentMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return Element(vadd(self.coords, other.coords), self.parent)

    def __sub__(self, other):
        self._check(other)
        return Element(tuple(a - b for a, b in zip(self.coords, other.coords)), self.parent)

    def __rmul__(self, t):
        return Element(vscale(frac(t), self.coords), self.parent)

    def __neg__(self):
        return Element(vscale(-1, self.coords), self.parent)

    def bracket(self, other):
        return self.parent.bracket(self, other)

    def is_zero(self):
        return is_zero(self.coords)


class LieAlgebra:
    """Lie algebra with basis ``e_0..e_{n-1}`` and ``[e_i, e_j] = sum_k c[i,j][k] e_k``.

    ``structure`` maps pairs ``(i, j)`` with ``i < j`` to sparse ``{k: coeff}``
    dicts; pairs given with ``i > j`` are accepted and negated.  Supplying both
    orders for one pair is an antisymmetry check.  The Jacobi identity is checked
    on every basis triple unless ``validate=False`` (reserved for test oracles).

    ``metadata`` holds named subspaces (lists of coordinate vectors) and is
    re-validated by :meth:`validated_subspace` whenever it is used.
    """

    def __init__(
        self,
        dim: int,
        structure: Mapping[tuple[int, int], Mapping[int, object]],
        labels: Sequence[str] | None = None,
        metadata: Mapping[str, object] | None = None,
        validate: bool = True,
    ):
        self.dim = dim
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError("label count does not match dimension")
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), coeffs in structure.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise StructureError(f"basis index out of range in pair ({i}, {j})", (i, j, None))
            cs = {int(k): frac(v) for k, v in coeffs.items() if frac(v) != 0}
            for k in cs:
                if not 0 <= k < dim:
                    raise StructureError(f"basis index {k} out of range", (i, j, k))
            if i == j:
                if cs:
                    k = min(cs)
                    raise StructureError(f"[e{i}, e{i}] must vanish", (i, i, k))
                continue
            key, sgn = ((i, j), 1) if i < j else ((j, i), -1)
            cs = {k: sgn * v for k, v in cs.items()}
            if key in table:
                if table[key] != cs:
                    k = min(k for k in set(table[key]) | set(cs) if table[key].get(k, 0) != cs.get(k, 0))
                    raise StructureError(
                        f"antisymmetry violated: c[{key[0]}][{key[1]}][{k}] != -c[{key[1]}][{key[0]}][{k}]",
                        (key[0], key[1], k),
                    )
                continue
            if cs:
                table[key] = cs
        self._table = table
        self.metadata = dict(metadata or {})
        self._ad_cache: dict[int, Mat] = {}
        if validate:
            self.check_jacobi()

    # --- structure constants --------------------------------------------------

    def structure_constant(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -v for k, v in self._table.get((j, i), {}).items()}

    @property
    def structure(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {k: dict(v) for k, v in self._table.items()}

    def check_jacobi(self):
        for i, j, k in combinations(range(self.dim), 3):
            total: dict[int, Fraction] = {}
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m, x in self.structure_constant(b, c).items():
                    for n, y in self.structure_constant(a, m).items():
                        total[n] = total.get(n, 0) + x * y
            bad = [n for n, v in total.items() if v != 0]
            if bad:
                raise StructureError(
                    f"Jacobi identity fails on basis triple ({i}, {j}, {k}) in component {bad[0]}",
                    (i, j, k),
                )

    # --- elements -------------------------------------------------------------

    def element(self, coords) -> Element:
        return Element(vec(coords), self)

    def basis_element(self, i: int) -> Element:
        return Element(unit_vec(self.dim, i), self)

    def zero(self) -> Element:
        return Element(zero_vec(self.dim), self)

    def bracket_vec(self, u: Sequence, v: Sequence) -> Vec:
        out = [Fraction(0)] * self.dim
        nz_u = [(i, a) for i, a in enumerate(u) if a]
        nz_v = [(j, b) for j, b in enumerate(v) if b]
        for i, a in nz_u:
            for j, b in nz_v:
                for k, c in self.structure_constant(i, j).items():
                    out[k] += a * b * c
        return tuple(out)

    def bracket(self, x: Element, y: Element) -> Element:
        if not isinstance(x, Element) or not isinstance(y, Element):
            raise TypeError("bracket expects Elements")
        if x.parent is not self or y.parent is not self:
            raise ParentMismatch("elements do not belong to this algebra")
        return Element(self.bracket_vec(x.coords, y.coords), self)

    def _basis_ad(self, i: int) -> Mat:
        if i not in self._ad_cache:
            cols = [self.bracket_vec(unit_vec(self.dim, i), unit_vec(self.dim, j)) for j in range(self.dim)]
            self._ad_cache[i] = Mat.from_columns(cols, self.dim) if cols else Mat.zeros(0)
        return self._ad_cache[i]

    def ad_matrix(self, x) -> Mat:
        """Matrix of ad(x); column j is [x, e_j]."""
        coords = x.coords if isinstance(x, Element) else vec(x)
        if isinstance(x, Element) and x.parent is not self:
            raise ParentMismatch("element does not belong to this algebra")
        out = Mat.zeros(self.dim)
        for i, a in enumerate(coords):
            if a:
                out = out + self._basis_ad(i).scale(a)
        return out

    def is_abelian(self) -> bool:
        return not self._table

    # --- subspaces and series -------------------------------------------------

    def center(self) -> list[Vec]:
        n = self.dim
        # [x, e_j]_k = sum_i x_i c[i][j][k]
        rows: dict[tuple[int, int], dict[int, Fraction]] = defaultdict(lambda: defaultdict(Fraction))
        for (i, j), cs in self._table.items():
            for k, c in cs.items():
                rows[j, k][i] += c
                rows[i, k][j] -= c
        return sparse_kernel(rows.values(), n)

    def bracket_span(self, a: Sequence[Sequence], b: Sequence[Sequence]) -> list[Vec]:
        """Basis of span{[x, y] : x in a, y in b}."""
        return span_basis((self.bracket_vec(x, y) for x in a for y in b), self.dim)

    def full_basis(self) -> list[Vec]:
        return [unit_vec(self.dim, i) for i in range(self.dim)]

    def derived_subalgebra(self) -> list[Vec]:
        return span_basis((self.structure_constant_vec(i, j) for i, j in self._table), self.dim)

    def structure_constant_vec(self, i: int, j: int) -> Vec:
        out = [Fraction(0)] * self.dim
        for k, c in self.structure_constant(i, j).items():
            out[k] = c
        return tuple(out)

    def lower_central_series(self) -> list[list[Vec]]:
        series = [self.full_basis()]
        while True:
            nxt = self.bracket_span(self.full_basis(), series[-1])
            if len(nxt) == len(series[-1]):
                return series
            series.append(nxt)

    def derived_series(self) -> list[list[Vec]]:
        series = [self.full_basis()]
        while True:
            nxt = self.bracket_span(series[-1], series[-1])
            if len(nxt) == len(series[-1]):
                return series
            series.append(nxt)

    def is_solvable(self) -> bool:
        return len(self.derived_series()[-1]) == 0

    def is_nilpotent(self) -> bool:
        return len(self.lower_central_series()[-1]) == 0

    def subspace_is_ideal(self, s: Sequence[Sequence]) -> bool:
        return subspace_contains(s, self.bracket_span(self.full_basis(), s), self.dim)

    def subspace_is_subalgebra(self, s: Sequence[Sequence]) -> bool:
        return subspace_contains(s, self.bracket_span(s, s), self.dim)

    def validated_subspace(self, name: str) -> list[Vec]:
        """Fetch a metadata subspace after re-checking its defining property."""
        if name not in self.metadata:
            raise MetadataError(f"no metadata subspace {name!r}")
        s = [vec(v) for v in self.metadata[name]]
        if name == "center":
            if any(not self.ad_matrix(v).is_zero() for v in s):
                raise MetadataError("declared center contains a non-central vector")
        elif name == "nilradical":
            if not self.subspace_is_ideal(s):
                raise MetadataError("declared nilradical is not an ideal")
            sub = _restrict(self, s)
            if not sub.is_nilpotent():
                raise MetadataError("declared nilradical is not nilpotent")
        return s


def _restrict(g: LieAlgebra, s: Sequence[Sequence]) -> LieAlgebra:
    """The subalgebra spanned by ``s`` as an abstract Lie algebra in the basis ``s``."""
    basis = span_basis(s, g.dim)
    m = Mat.from_columns(basis, g.dim)

    structure = {}
    for i, j in combinations(range(len(basis)), 2):
        w = g.bracket_vec(basis[i], basis[j])
        if not is_zero(w):
            c = solve(m, w)
            structure[(i, j)] = {k: x for k, x in enumerate(c) if x}
    return LieAlgebra(len(basis), structure, validate=False)


def matrix_lie_algebra(basis: Sequence[Mat], labels: Sequence[str] | None = None) -> LieAlgebra:
    """Lie algebra spanned by linearly independent matrices under the commutator."""
    if not basis:
        return LieAlgebra(0, {}, labels=labels or ())
    n = basis[0].nrows
    flat = [b.flatten() for b in basis]
    ech = Echelon(n * n)
    for f in flat:
        if not ech.add(f):
            raise ValueError("matrix basis is linearly dependent")
    cols = Mat.from_columns(flat)

    structure = {}
    for i, j in combinations(range(len(basis)), 2):
        c = (basis[i] @ basis[j] - basis[j] @ basis[i]).flatten()
        if is_zero(c):
            continue
        try:
            coeffs = solve(cols, c)
        except Inconsistent as exc:
            raise ValueError("matrix span is not closed under the commutator") from exc
        structure[(i, j)] = {k: x for k, x in enumerate(coeffs) if x}
    return LieAlgebra(len(basis), structure, labels=labels)


def abelian(dim: int, labels: Sequence[str] | None = None) -> LieAlgebra:
    return LieAlgebra(dim, {}, labels=labels)
